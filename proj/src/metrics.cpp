#include "qvol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <gsl/gsl_integration.h>

#include "qvol/error.hpp"
#include "qvol/geometry.hpp"

namespace qvol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInv16Pi2 = 1.0 / (16.0 * kPi * kPi);

std::string point_str(const TVector& t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", t.t11, t.t22, t.t33);
  return buf;
}

[[noreturn]] void throw_singular(const TVector& t) {
  throw DomainError(DomainError::Kind::kSingularState,
                    "singular state: t = " + point_str(t) + " lies on the tetrahedron boundary");
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricTensor

double MetricTensor::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == j) return i == 0 ? g11 : (i == 1 ? g22 : g33);
  if (i == 0) return j == 1 ? g12 : g13;
  return g23;
}

Eigen::Matrix3d MetricTensor::matrix() const {
  Eigen::Matrix3d m;
  // clang-format off
  m << g11, g12, g13,
       g12, g22, g23,
       g13, g23, g33;
  // clang-format on
  return m;
}

MetricTensor MetricTensor::from_matrix(const Eigen::Matrix3d& m) {
  return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
          0.5 * (m(1, 2) + m(2, 1))};
}

double MetricTensor::det() const {
  // Extended precision: near the boundary the cofactors cancel heavily.
  const long double a = g11, b = g22, c = g33, x = g12, y = g13, z = g23;
  return static_cast<double>(a * (b * c - z * z) - x * (x * c - z * y) + y * (x * z - b * y));
}

double MetricTensor::sqrt_det() const { return std::sqrt(det()); }

double MetricTensor::max_abs_diff(const MetricTensor& o) const {
  return std::max({std::abs(g11 - o.g11), std::abs(g22 - o.g22), std::abs(g33 - o.g33),
                   std::abs(g12 - o.g12), std::abs(g13 - o.g13), std::abs(g23 - o.g23)});
}

// ---------------------------------------------------------------------------
// QuadratureGrid

QuadratureGrid::QuadratureGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2 || n_phi < 2) {
    throw std::invalid_argument("quadrature sizes must be >= 2 (got " + std::to_string(n_theta) +
                                "," + std::to_string(n_phi) + ")");
  }
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n_theta);
  if (table == nullptr) throw std::bad_alloc();
  cos_theta_.resize(n_theta);
  theta_.resize(n_theta);
  theta_w_.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
    cos_theta_[i] = x;
    theta_[i] = std::acos(x);
    theta_w_[i] = 0.5 * w;
  }
  gsl_integration_glfixed_table_free(table);

  phi_.resize(n_phi);
  for (int k = 0; k < n_phi; ++k) phi_[k] = 2.0 * kPi * k / n_phi;

  for (int i = 0; i < n_theta; ++i) {
    const double si = std::sqrt(std::max(0.0, 1.0 - cos_theta_[i] * cos_theta_[i]));
    for (int j = i; j < n_theta; ++j) {
      const double sj = std::sqrt(std::max(0.0, 1.0 - cos_theta_[j] * cos_theta_[j]));
      const double w = theta_w_[i] * theta_w_[j] * (i == j ? 1.0 : 2.0);
      theta_pairs_.push_back({si * sj, cos_theta_[i] * cos_theta_[j], w});
    }
  }

  // (phi1 + pi, phi2 + pi) reproduces (cc, ss); fold it when n_phi is even.
  const bool fold = n_phi % 2 == 0;
  const int k_end = fold ? n_phi / 2 : n_phi;
  const double w = (fold ? 2.0 : 1.0) / (static_cast<double>(n_phi) * n_phi);
  for (int k = 0; k < k_end; ++k) {
    for (int l = 0; l < n_phi; ++l) {
      phi_cc_.push_back(std::cos(phi_[k]) * std::cos(phi_[l]));
      phi_ss_.push_back(std::sin(phi_[k]) * std::sin(phi_[l]));
      phi_w_.push_back(w);
    }
  }
}

std::size_t QuadratureGrid::size() const {
  const auto nt = static_cast<std::size_t>(n_theta_);
  const auto np = static_cast<std::size_t>(n_phi_);
  return nt * nt * np * np;
}

// ---------------------------------------------------------------------------
// Classical metric

std::array<double, 3> husimi_basis(const PhasePoint& x) {
  const double s12 = std::sin(x.theta1) * std::sin(x.theta2);
  return {s12 * std::cos(x.phi1) * std::cos(x.phi2), s12 * std::sin(x.phi1) * std::sin(x.phi2),
          std::cos(x.theta1) * std::cos(x.theta2)};
}

double husimi_q(const TVector& t, const PhasePoint& x) {
  const auto b = husimi_basis(x);
  return kInv16Pi2 * (1.0 + t.t11 * b[0] + t.t22 * b[1] + t.t33 * b[2]);
}

MetricTensor classical_fisher(const TVector& t, const QuadratureGrid& grid, double margin) {
  if (!(face_distance(t) > margin)) {
    throw DomainError(DomainError::Kind::kNearBoundary,
                      "near-boundary point: t = " + point_str(t) + " is within " +
                          std::to_string(margin) + " of a tetrahedron face");
  }

  const auto cc = grid.phi_cc();
  const auto ss = grid.phi_ss();
  const double wphi = grid.phi_w().front();  // uniform
  const std::size_t n = cc.size();

  // In units of 1/(16 pi^2): Q = 1 + t . b, dQ_i = b_i, and the metric is
  // sum_nodes w b_i b_j / (1 + t . b) with normalized weights.
  double g11 = 0, g22 = 0, g33 = 0, g12 = 0, g13 = 0, g23 = 0;
  double q_min = 1.0;
  for (const auto& tp : grid.theta_pairs()) {
    const double a = 1.0 + t.t33 * tp.c12;
    const double b1 = t.t11 * tp.s12;
    const double b2 = t.t22 * tp.s12;
    double s1 = 0, scc = 0, sss = 0, scc2 = 0, sss2 = 0, sccss = 0, qm = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double q = a + b1 * cc[m] + b2 * ss[m];
      qm = std::min(qm, q);
      const double inv = 1.0 / q;
      const double ic = cc[m] * inv;
      const double is = ss[m] * inv;
      s1 += inv;
      scc += ic;
      sss += is;
      scc2 += cc[m] * ic;
      sss2 += ss[m] * is;
      sccss += cc[m] * is;
    }
    q_min = std::min(q_min, qm);
    const double w = tp.w * wphi;
    const double s2 = tp.s12 * tp.s12;
    const double sc = tp.s12 * tp.c12;
    g11 += w * s2 * scc2;
    g22 += w * s2 * sss2;
    g33 += w * tp.c12 * tp.c12 * s1;
    g12 += w * s2 * sccss;
    g13 += w * sc * scc;
    g23 += w * sc * sss;
  }
  if (!(q_min > 0.0) || !std::isfinite(g11 + g22 + g33 + g12 + g13 + g23)) {
    throw DomainError(DomainError::Kind::kNonFiniteIntegrand,
                      "non-finite integrand: Husimi function is not positive at t = " + point_str(t));
  }
  return {g11, g22, g33, g12, g13, g23};
}

// ---------------------------------------------------------------------------
// Quantum metrics

double delta(const TVector& t) {
  const long double t1 = t.t11, t2 = t.t22, t3 = t.t33;
  const long double p = t1 + t2;
  const long double m = t1 - t2;
  return static_cast<double>((p * p - (1 - t3) * (1 - t3)) * (m * m - (1 + t3) * (1 + t3)));
}

SLDTriple sld_operators(const TVector& t) {
  const long double t1 = t.t11, t2 = t.t22, t3 = t.t33;
  // Outer block (|00>,|11>) and inner block (|01>,|10>) denominators.
  const long double d_out = (t1 - t2) * (t1 - t2) - (t3 + 1) * (t3 + 1);
  const long double d_in = (t1 + t2) * (t1 + t2) - (t3 - 1) * (t3 - 1);
  if (std::abs(d_out) < 1e-12 || std::abs(d_in) < 1e-12) throw_singular(t);

  SLDTriple s;
  for (auto& l : s.L) l.setZero();

  auto fill = [](Matrix4ld& l, long double out_diag, long double out_off, long double in_diag,
                 long double in_off) {
    l(0, 0) = l(3, 3) = out_diag;
    l(0, 3) = l(3, 0) = out_off;
    l(1, 1) = l(2, 2) = in_diag;
    l(1, 2) = l(2, 1) = in_off;
  };
  fill(s.L[0], (t1 - t2) / d_out, (t3 + 1) / -d_out, (t1 + t2) / d_in, (t3 - 1) / d_in);
  fill(s.L[1], (t2 - t1) / d_out, (t3 + 1) / d_out, (t1 + t2) / d_in, (t3 - 1) / d_in);
  fill(s.L[2], (t3 + 1) / -d_out, (t1 - t2) / d_out, (1 - t3) / d_in, -(t1 + t2) / d_in);
  return s;
}

MetricTensor fisher_from_sld(const SLDTriple& sld, const TVector& t) {
  Matrix4ld rho = Matrix4ld::Identity() / 4;
  for (int i = 0; i < 3; ++i) rho += static_cast<long double>(t[i]) * density_derivative(i).cast<long double>();
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      g(i, j) = static_cast<double>(0.5L * (sld.L[i] * sld.L[j] * rho + sld.L[j] * sld.L[i] * rho).trace());
    }
  }
  return MetricTensor::from_matrix(g);
}

namespace detail {

MetricTensor quantum_fisher_closed_form(const TVector& t, bool flip_g12_sign) {
  const long double t1 = t.t11, t2 = t.t22, t3 = t.t33;
  const long double p = t1 + t2, m = t1 - t2;
  const long double d = (p * p - (1 - t3) * (1 - t3)) * (m * m - (1 + t3) * (1 + t3));
  if (!(d >= 1e-24L)) throw_singular(t);
  const long double n2 = t1 * t1 + t2 * t2 + t3 * t3;
  const long double diag = 1 - n2 - 2 * t1 * t2 * t3;
  const long double sign12 = flip_g12_sign ? -1 : 1;
  MetricTensor g;
  g.g11 = g.g22 = g.g33 = static_cast<double>(diag / d);
  g.g12 = static_cast<double>(sign12 * ((1 + n2 - 2 * t3 * t3) * t3 + 2 * t1 * t2) / d);
  g.g13 = static_cast<double>(((1 + n2 - 2 * t2 * t2) * t2 + 2 * t1 * t3) / d);
  g.g23 = static_cast<double>(((1 + n2 - 2 * t1 * t1) * t1 + 2 * t2 * t3) / d);
  return g;
}

}  // namespace detail

MetricTensor quantum_fisher(const TVector& t) { return detail::quantum_fisher_closed_form(t, false); }

MetricTensor simplex_fisher(const TVector& t) {
  const BellSpectrum bell = bell_spectrum(t);
  if (!(bell.min() >= 1e-12)) throw_singular(t);
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 4; ++k) {
    // d lam_k / d t_i = s_ki / 4
    const Eigen::Vector3d dl = Eigen::Vector3d(kBellSigns[k][0], kBellSigns[k][1], kBellSigns[k][2]) / 4.0;
    g += dl * dl.transpose() / bell.lam[k];
  }
  return MetricTensor::from_matrix(g);
}

MetricTensor wigner_yanase(const TVector& t) {
  const BellSpectrum bell = bell_spectrum(t);
  if (!(bell.min() >= 1e-12)) throw_singular(t);
  // sqrt(rho) = sum_k sqrt(lam_k) |B_k><B_k| with fixed B_k, so
  // d_i sqrt(rho) = sum_k (s_ki / (8 sqrt(lam_k))) |B_k><B_k|.
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (int k = 0; k < 4; ++k) {
    const double inv = 1.0 / (8.0 * std::sqrt(bell.lam[k]));
    const Eigen::Vector3d ds(kBellSigns[k][0] * inv, kBellSigns[k][1] * inv, kBellSigns[k][2] * inv);
    g += 4.0 * ds * ds.transpose();
  }
  return MetricTensor::from_matrix(g);
}

}  // namespace qvol
