#include "qvol/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qvol {

namespace {
using cd = std::complex<double>;
}

double BellSpectrum::min() const { return *std::min_element(lam.begin(), lam.end()); }

Eigen::Vector4d bell_vector(Bell b) {
  const double h = 1.0 / std::sqrt(2.0);
  switch (b) {
    case Bell::kPsiMinus: return {0.0, h, -h, 0.0};
    case Bell::kPhiMinus: return {h, 0.0, 0.0, -h};
    case Bell::kPhiPlus: return {h, 0.0, 0.0, h};
    case Bell::kPsiPlus: return {0.0, h, h, 0.0};
  }
  throw std::invalid_argument("bell_vector: unknown Bell state");
}

DensityMatrix density_from_t(const TVector& t) {
  const double d = (1.0 + t.t33) / 4.0;
  const double e = (1.0 - t.t33) / 4.0;
  const double a = (t.t11 - t.t22) / 4.0;
  const double c = (t.t11 + t.t22) / 4.0;
  DensityMatrix rho;
  // clang-format off
  rho << d, 0, 0, a,
         0, e, c, 0,
         0, c, e, 0,
         a, 0, 0, d;
  // clang-format on
  return rho;
}

Eigen::Matrix4d density_derivative(int i) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  switch (i) {
    case 0:
      m(0, 3) = m(3, 0) = 0.25;
      m(1, 2) = m(2, 1) = 0.25;
      break;
    case 1:
      m(0, 3) = m(3, 0) = -0.25;
      m(1, 2) = m(2, 1) = 0.25;
      break;
    case 2:
      m(0, 0) = m(3, 3) = 0.25;
      m(1, 1) = m(2, 2) = -0.25;
      break;
    default: throw std::out_of_range("density_derivative: index must be 0, 1 or 2");
  }
  return m;
}

BellSpectrum bell_spectrum(const TVector& t) {
  BellSpectrum s;
  for (int k = 0; k < 4; ++k) {
    const auto& sg = kBellSigns[k];
    // Extended precision keeps lambda_k accurate to full relative precision near a face.
    const long double l = 1.0L + sg[0] * static_cast<long double>(t.t11) +
                          sg[1] * static_cast<long double>(t.t22) + sg[2] * static_cast<long double>(t.t33);
    s.lam[k] = static_cast<double>(l / 4.0L);
  }
  return s;
}

double purity(const TVector& t) { return (1.0 + t.norm2()) / 4.0; }

Eigen::Matrix2cd pauli(int mu) {
  Eigen::Matrix2cd s;
  switch (mu) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cd(0, -1), cd(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli: index must be in 0..3");
  }
  return s;
}

Rotation3 su2_to_so3(const SU2& u, double tol) {
  const double unitarity = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm();
  if (!(unitarity <= tol) || !(std::abs(u.determinant() - cd(1.0)) <= tol)) {
    throw std::invalid_argument("su2_to_so3: matrix is not special unitary");
  }
  Rotation3 o;
  for (int mu = 0; mu < 3; ++mu) {
    for (int nu = 0; nu < 3; ++nu) {
      o(mu, nu) = 0.5 * (pauli(mu + 1) * u * pauli(nu + 1) * u.adjoint()).trace().real();
    }
  }
  return o;
}

SU2 haar_su2(Rng& rng) {
  std::normal_distribution<double> normal;
  double q[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : q) {
      x = normal(rng);
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  const cd alpha(q[0] * inv, q[1] * inv);
  const cd beta(q[2] * inv, q[3] * inv);
  SU2 u;
  u << alpha, beta, -std::conj(beta), std::conj(alpha);
  return u;
}

}  // namespace qvol
