#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

#include "qvol/random.hpp"

namespace qvol {

/// Diagonal correlation parameters (t11, t22, t33) of a two-qubit state with
/// maximally mixed marginals. Any real triple is representable; physical states
/// are the points of the tetrahedron (see geometry.hpp).
struct TVector {
  double t11 = 0.0;
  double t22 = 0.0;
  double t33 = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? t11 : (i == 1 ? t22 : t33); }
  constexpr double norm2() const { return t11 * t11 + t22 * t22 + t33 * t33; }

  Eigen::Vector3d vec() const { return {t11, t22, t33}; }
  static TVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

  friend constexpr bool operator==(const TVector&, const TVector&) = default;
};

using DensityMatrix = Eigen::Matrix4cd;
using SU2 = Eigen::Matrix2cd;
using Rotation3 = Eigen::Matrix3d;

/// Bell states in the fixed order used by BellSpectrum.
enum class Bell : int { kPsiMinus = 0, kPhiMinus = 1, kPhiPlus = 2, kPsiPlus = 3 };

/// lam_k = (1 + s_k . t) / 4, with s_k the rows below (order Psi-, Phi-, Phi+, Psi+).
inline constexpr std::array<std::array<double, 3>, 4> kBellSigns{{
    {-1.0, -1.0, -1.0},
    {-1.0, +1.0, +1.0},
    {+1.0, -1.0, +1.0},
    {+1.0, +1.0, -1.0},
}};

/// Eigenvalues of rho_t, one per Bell state, in Bell order (not sorted by size).
struct BellSpectrum {
  std::array<double, 4> lam{};

  double operator[](Bell b) const { return lam[static_cast<int>(b)]; }
  double min() const;
};

/// Bell state |B_k> as a vector in the computational basis |00>,|01>,|10>,|11>.
Eigen::Vector4d bell_vector(Bell b);

DensityMatrix density_from_t(const TVector& t);

/// d rho / d t_ii; constant because rho_t is affine in t.
Eigen::Matrix4d density_derivative(int i);

BellSpectrum bell_spectrum(const TVector& t);

/// Tr(rho_t^2) = (1 + |t|^2) / 4.
double purity(const TVector& t);

/// Pauli matrix sigma_mu, mu in {1,2,3}; mu = 0 gives the identity.
Eigen::Matrix2cd pauli(int mu);

/// O_{mu nu} = 1/2 Tr[sigma_mu U sigma_nu U^dagger]. Throws std::invalid_argument
/// unless U is special unitary to `tol`.
Rotation3 su2_to_so3(const SU2& u, double tol = 1e-10);

/// Haar-random SU(2) element from a normalized Gaussian quaternion.
SU2 haar_su2(Rng& rng);

inline TVector rotate_t(const TVector& t, const Rotation3& o) { return TVector::from(o * t.vec()); }

}  // namespace qvol
