#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qvol/state.hpp"

namespace qvol {

/// Symmetric 3x3 metric at a point t.
struct MetricTensor {
  double g11 = 0.0, g22 = 0.0, g33 = 0.0;
  double g12 = 0.0, g13 = 0.0, g23 = 0.0;

  double operator()(int i, int j) const;
  Eigen::Matrix3d matrix() const;
  static MetricTensor from_matrix(const Eigen::Matrix3d& m);  // symmetrizes

  double det() const;
  double sqrt_det() const;
  double max_abs_diff(const MetricTensor& o) const;
};

/// Point of the two-sphere x two-sphere phase space.
struct PhasePoint {
  double theta1 = 0.0, theta2 = 0.0;
  double phi1 = 0.0, phi2 = 0.0;
};

/// Tensor-product rule on S^2 x S^2: Gauss-Legendre in cos(theta), periodic
/// trapezoid in phi. Weights are normalized to sum to 1, so that
/// integral f dmu = 16 pi^2 * sum_n w_n f(x_n) with dmu = sin th1 sin th2 dth1 dth2 dph1 dph2.
class QuadratureGrid {
 public:
  QuadratureGrid(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const;

  std::span<const double> cos_theta_nodes() const { return cos_theta_; }
  std::span<const double> theta_weights() const { return theta_w_; }  // sum to 1
  std::span<const double> phi_nodes() const { return phi_; }          // weight 1/n_phi each

  /// 16 pi^2 * sum over all nodes of weight * f(x): the integral over dmu.
  template <class F>
  double integrate(F&& f) const {
    double total = 0.0;
    for_each_node([&](const PhasePoint& x, double w) { total += w * f(x); });
    return 16.0 * kPi2 * total;
  }

  /// Visits every node with its normalized weight.
  template <class F>
  void for_each_node(F&& f) const {
    const double wphi = 1.0 / (static_cast<double>(n_phi_) * n_phi_);
    for (int i = 0; i < n_theta_; ++i)
      for (int j = 0; j < n_theta_; ++j)
        for (int k = 0; k < n_phi_; ++k)
          for (int l = 0; l < n_phi_; ++l)
            f(PhasePoint{theta_[i], theta_[j], phi_[k], phi_[l]}, theta_w_[i] * theta_w_[j] * wphi);
  }

  // Reduced tables for the Fisher kernel. The integrand depends on (theta1, theta2)
  // only through s12 = sin th1 sin th2 and c12 = cos th1 cos th2, and on (phi1, phi2)
  // only through cc = cos ph1 cos ph2 and ss = sin ph1 sin ph2; symmetric duplicates
  // are folded into the weights.
  struct ThetaPair {
    double s12, c12, w;
  };
  std::span<const ThetaPair> theta_pairs() const { return theta_pairs_; }
  std::span<const double> phi_cc() const { return phi_cc_; }
  std::span<const double> phi_ss() const { return phi_ss_; }
  std::span<const double> phi_w() const { return phi_w_; }

 private:
  static constexpr double kPi2 = 9.869604401089358;

  int n_theta_;
  int n_phi_;
  std::vector<double> cos_theta_, theta_, theta_w_, phi_;
  std::vector<ThetaPair> theta_pairs_;
  std::vector<double> phi_cc_, phi_ss_, phi_w_;
};

/// Husimi Q-function of rho_t at x, normalized to 1 under dmu.
double husimi_q(const TVector& t, const PhasePoint& x);

/// b(x) with dQ/dt_ii = b_i(x) / (16 pi^2); independent of t.
std::array<double, 3> husimi_basis(const PhasePoint& x);

inline constexpr double kDefaultFisherMargin = 1e-6;

/// Classical Fisher-Rao metric of the Husimi family at t.
/// Throws DomainError(kNearBoundary) if face_distance(t) <= margin, and
/// DomainError(kNonFiniteIntegrand) if Q <= 0 at some node.
MetricTensor classical_fisher(const TVector& t, const QuadratureGrid& grid,
                              double margin = kDefaultFisherMargin);

/// ((t11+t22)^2 - (1-t33)^2) ((t11-t22)^2 - (1+t33)^2) = 256 prod_k lam_k.
double delta(const TVector& t);

using Matrix4ld = Eigen::Matrix<long double, 4, 4>;

/// Symmetric logarithmic derivatives L1, L2, L3 (real symmetric, canonical basis).
/// Kept in extended precision: entries grow like 1/lambda_min and the trace
/// products in fisher_from_sld cancel to 1/lambda_min.
struct SLDTriple {
  std::array<Matrix4ld, 3> L;

  Eigen::Matrix4d operator[](int i) const { return L[i].cast<double>(); }
};

/// Closed-form SLDs. Throws DomainError(kSingularState) on the tetrahedron boundary.
SLDTriple sld_operators(const TVector& t);

/// 1/2 Tr(L_i L_j rho + L_j L_i rho).
MetricTensor fisher_from_sld(const SLDTriple& sld, const TVector& t);

/// Helstrom (SLD) quantum Fisher metric in closed form; det = 1 / delta(t).
/// Throws DomainError(kSingularState) when delta(t) < 1e-24.
MetricTensor quantum_fisher(const TVector& t);

/// sum_k dlam_k/dt_i dlam_k/dt_j / lam_k over the Bell spectrum.
/// Throws DomainError(kSingularState) when min lam < 1e-12.
MetricTensor simplex_fisher(const TVector& t);

/// Wigner-Yanase metric 4 Tr[(d_i sqrt rho)(d_j sqrt rho)], evaluated in the
/// (constant) Bell eigenbasis. Throws DomainError(kSingularState) when min lam < 1e-12.
MetricTensor wigner_yanase(const TVector& t);

namespace detail {
/// Closed-form Helstrom metric with an optional sign flip on the g12 numerator.
/// The flip exists only so the validation suite can prove it detects a wrong formula.
MetricTensor quantum_fisher_closed_form(const TVector& t, bool flip_g12_sign);
}  // namespace detail

}  // namespace qvol
