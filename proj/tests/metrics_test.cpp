#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qvol/error.hpp"
#include "qvol/geometry.hpp"
#include "qvol/metrics.hpp"
#include "qvol/validate.hpp"

namespace qvol {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kSixteenPi2 = 16.0 * kPi * kPi;

const QuadratureGrid& default_grid() {
  static const QuadratureGrid g(24, 32);
  return g;
}

// Richardson-extrapolated brute-force oracle: the midpoint rule in theta is
// second order, so combining n and 2n cancels the leading error term.
Eigen::Matrix3d brute_force(const TVector& t, int n_theta, int n_phi) {
  return (4.0 * oracle::brute_force_fisher(t, 2 * n_theta, n_phi) - oracle::brute_force_fisher(t, n_theta, n_phi)) / 3.0;
}

MetricTensor diag(double v) {
  MetricTensor g;
  g.g11 = g.g22 = g.g33 = v;
  return g;
}

// --- quadrature -----------------------------------------------------------

TEST(QuadratureGrid, WeightsNormalized) {
  const QuadratureGrid& g = default_grid();
  double total = 0.0;
  g.for_each_node([&](const PhasePoint&, double w) { total += w; });
  EXPECT_NEAR(total, 1.0, 1e-11);  // 590k-term running sum
  EXPECT_NEAR(g.integrate([](const PhasePoint&) { return 1.0; }), kSixteenPi2, 1e-10);
  EXPECT_EQ(g.size(), 24u * 24u * 32u * 32u);

  double reduced = 0.0;
  for (const auto& tp : g.theta_pairs()) reduced += tp.w;
  EXPECT_NEAR(reduced, 1.0, 1e-13);
  double phi = 0.0;
  for (double w : g.phi_w()) phi += w;
  EXPECT_NEAR(phi, 1.0, 1e-13);
}

TEST(QuadratureGrid, GaussLegendreExactForPolynomialsInCosTheta) {
  const QuadratureGrid g(8, 4);
  const auto x = g.cos_theta_nodes();
  const auto w = g.theta_weights();
  for (int k = 0; k <= 15; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += 2.0 * w[i] * std::pow(x[i], k);
    const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(sum, exact, 1e-14) << "degree " << k;
  }
}

TEST(QuadratureGrid, RejectsTinySizes) { EXPECT_THROW(QuadratureGrid(1, 8), std::invalid_argument); }

// --- Husimi function -------------------------------------------------------

TEST(HusimiQ, Examples) {
  EXPECT_NEAR(husimi_q({0, 0, 0}, {0.3, 1.1, 2.0, 5.0}), 1.0 / kSixteenPi2, 1e-17);
  EXPECT_NEAR(husimi_q({0, 0, 1}, {0, 0, 1.0, 2.0}), 2.0 / kSixteenPi2, 1e-17);
}

TEST(HusimiQ, MatchesCoherentStateExpectation) {
  // (1/4pi^2) <Omega1 Omega2| rho_t |Omega1 Omega2> with the spin coherent states.
  auto coherent = [](double th, double ph) {
    return Eigen::Vector2cd(std::cos(th / 2), std::exp(cd(0, -ph)) * std::sin(th / 2));
  };
  Rng rng = make_stream(20, 0);
  std::uniform_real_distribution<double> th(0, kPi), ph(0, 2 * kPi);
  for (int n = 0; n < 200; ++n) {
    const TVector t = sample_tetrahedron(rng);
    const PhasePoint x{th(rng), th(rng), ph(rng), ph(rng)};
    const Eigen::Vector2cd a = coherent(x.theta1, x.phi1), b = coherent(x.theta2, x.phi2);
    Eigen::Vector4cd ab;
    ab << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    const double expected = (ab.adjoint() * density_from_t(t) * ab)(0, 0).real() / (4 * kPi * kPi);
    ASSERT_NEAR(husimi_q(t, x), expected, 1e-15);
  }
}

TEST(HusimiQ, MatchesProductToSumForm) {
  Rng rng = make_stream(21, 0);
  std::uniform_real_distribution<double> th(0, kPi), ph(0, 2 * kPi);
  for (int n = 0; n < 200; ++n) {
    const TVector t = sample_tetrahedron(rng);
    const PhasePoint x{th(rng), th(rng), ph(rng), ph(rng)};
    const double s = std::sin(x.theta1) * std::sin(x.theta2);
    const double cp = std::cos(x.phi1 + x.phi2), cm = std::cos(x.phi1 - x.phi2);
    const double expanded = 2 * s / (64 * kPi * kPi) * (t.t11 * (cp + cm) - t.t22 * (cp - cm)) +
                           4 / (64 * kPi * kPi) * (t.t33 * std::cos(x.theta1) * std::cos(x.theta2) + 1);
    ASSERT_NEAR(husimi_q(t, x), expanded, 1e-16);
  }
}

TEST(HusimiQ, NormalizedAndPositive) {
  const QuadratureGrid& g = default_grid();
  const TVector t0{0.3, -0.2, 0.5};
  EXPECT_NEAR(g.integrate([&](const PhasePoint& x) { return husimi_q(t0, x); }), 1.0, 1e-12);
  // Q is affine in b(x), so a small grid already integrates it exactly.
  const QuadratureGrid small(6, 8);
  Rng rng = make_stream(22, 0);
  for (int n = 0; n < 100; ++n) {
    const TVector t = sample_interior(rng, 1e-9);
    ASSERT_NEAR(small.integrate([&](const PhasePoint& x) { return husimi_q(t, x); }), 1.0, 1e-10);
  }
  for (int n = 0; n < 5; ++n) {
    const TVector t = sample_interior(rng, 1e-9);
    g.for_each_node([&](const PhasePoint& x, double) { ASSERT_GT(husimi_q(t, x), 0.0); });
  }
}

// --- classical Fisher metric ----------------------------------------------

TEST(ClassicalFisher, OriginIsNinthIdentity) {
  EXPECT_LT(classical_fisher({0, 0, 0}, default_grid()).max_abs_diff(diag(1.0 / 9)), 1e-8);
  // Brute-force oracle: midpoint rule over husimi_q with finite-difference partials.
  const Eigen::Matrix3d bf = brute_force({0, 0, 0}, 32, 16);
  EXPECT_LT((bf - Eigen::Matrix3d::Identity() / 9).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ClassicalFisher, AgreesWithBruteForceAtInteriorPoint) {
  const TVector t{0.3, -0.2, 0.1};
  const Eigen::Matrix3d bf = brute_force(t, 32, 24);
  EXPECT_LT((classical_fisher(t, default_grid()).matrix() - bf).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ClassicalFisher, ParityZeroesG12) {
  EXPECT_LT(std::abs(classical_fisher({0, 0, 0.3}, default_grid()).g12), 1e-9);
}

TEST(ClassicalFisher, SpectralConvergence) {
  const QuadratureGrid fine(48, 64);
  for (const TVector& t : {TVector{0.3, -0.2, 0.5}, TVector{0.2, 0.1, -0.3}, TVector{-0.4, 0.3, 0.2}}) {
    EXPECT_LT(classical_fisher(t, default_grid()).max_abs_diff(classical_fisher(t, fine)), 1e-8);
  }
}

TEST(ClassicalFisher, Errors) {
  try {
    classical_fisher({1, 1, -1}, default_grid());
    FAIL() << "expected near-boundary error";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), DomainError::Kind::kNearBoundary);
  }
  EXPECT_THROW(classical_fisher({0.5, 0.5, -1e-7}, default_grid()), DomainError);
  try {
    classical_fisher({1.2, 1.2, -1.2}, default_grid(), -10.0);
    FAIL() << "expected non-finite integrand error";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), DomainError::Kind::kNonFiniteIntegrand);
  }
}

TEST(ClassicalFisher, PositiveDefiniteInside) {
  Rng rng = make_stream(23, 0);
  for (int n = 0; n < 30; ++n) {
    const TVector t = sample_interior(rng, 1e-3);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(classical_fisher(t, default_grid()).matrix());
    ASSERT_GT(es.eigenvalues()(0), 0.0);
  }
}

TEST(ClassicalFisher, TetrahedralSymmetryOfVolumeDensity) {
  const auto syms = tetrahedral_symmetries();
  ASSERT_EQ(syms.size(), 24u);
  Rng rng = make_stream(24, 0);
  for (int n = 0; n < 50; ++n) {
    const TVector t = sample_interior(rng, 0.05);
    const double ref = classical_fisher(t, default_grid()).sqrt_det();
    for (const Rotation3& m : syms) {
      ASSERT_TRUE(in_tetrahedron(rotate_t(t, m)));
      ASSERT_NEAR(classical_fisher(rotate_t(t, m), default_grid()).sqrt_det(), ref, 1e-7);
    }
  }
}

TEST(ClassicalFisher, ChainRuleCongruence) {
  // Family t -> Q_{O t}: its metric is O^T g(O t) O (components indexed by t).
  Rng rng = make_stream(25, 0);
  for (int n = 0; n < 10; ++n) {
    const Rotation3 o = su2_to_so3(haar_su2(rng));
    const TVector t = TVector::from(0.5 * sample_tetrahedron(rng).vec().normalized() *
                                    std::uniform_real_distribution<double>(0, 1)(rng));
    const Eigen::Matrix3d lhs = oracle::pullback_fisher(t, o, default_grid());
    const Eigen::Matrix3d rhs = o.transpose() * classical_fisher(rotate_t(t, o), default_grid()).matrix() * o;
    ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-7);
    ASSERT_NEAR(std::sqrt(lhs.determinant()), classical_fisher(rotate_t(t, o), default_grid()).sqrt_det(), 1e-7);
  }
}

// --- quantum metrics ------------------------------------------------------

TEST(Delta, Examples) {
  EXPECT_DOUBLE_EQ(delta({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(delta({1, 1, -1}), 0.0);
  EXPECT_DOUBLE_EQ(delta({0, 0, 0.5}), 9.0 / 16.0);
}

TEST(Delta, EqualsScaledSpectrumProduct) {
  Rng rng = make_stream(26, 0);
  for (int n = 0; n < 1000; ++n) {
    const TVector t = sample_tetrahedron(rng);
    const auto l = bell_spectrum(t).lam;
    ASSERT_NEAR(delta(t), 256 * l[0] * l[1] * l[2] * l[3], 1e-14);
    ASSERT_GE(delta(t), 0.0);
  }
}

TEST(SldOperators, OriginGivesPauliProducts) {
  const SLDTriple s = sld_operators({0, 0, 0});
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix2cd p = pauli(i + 1);
    Eigen::Matrix4cd kron;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) kron.block<2, 2>(2 * a, 2 * b) = p(a, b) * p;
    EXPECT_LT((s[i].cast<cd>() - kron).norm(), 1e-15) << "L" << i + 1;
    EXPECT_LT((oracle::solve_sld({0, 0, 0}, i).cast<cd>() - kron).norm(), 1e-12);
  }
}

TEST(SldOperators, SolveTheSldEquation) {
  const TVector t{0.2, -0.1, 0.3};
  const SLDTriple s = sld_operators(t);
  const Eigen::Matrix4d rho = density_from_t(t).real();
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix4d r = density_derivative(i) - 0.5 * (s[i] * rho + rho * s[i]);
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((s[i] - oracle::solve_sld(t, i)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SldOperators, CommuteWithRho) {
  Rng rng = make_stream(27, 0);
  for (int n = 0; n < 100; ++n) {
    const TVector t = sample_interior(rng, 1e-6);
    const SLDTriple s = sld_operators(t);
    const Eigen::Matrix4d rho = density_from_t(t).real();
    for (int i = 0; i < 3; ++i) {
      ASSERT_LT((rho * s[i] - s[i] * rho).cwiseAbs().maxCoeff(), 1e-10);
      ASSERT_LT((s[i] - s[i].transpose()).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(SldOperators, SingularOnBoundary) {
  EXPECT_THROW(sld_operators({1, 1, -1}), DomainError);
  EXPECT_THROW(sld_operators({0, 0, 1}), DomainError);
}

TEST(QuantumFisher, Examples) {
  EXPECT_LT(quantum_fisher({0, 0, 0}).max_abs_diff(diag(1.0)), 1e-15);
  EXPECT_NEAR(quantum_fisher({0, 0, 0.5}).sqrt_det(), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(1.0 / std::sqrt(delta({0, 0, 0.5})), 4.0 / 3.0, 1e-14);
  try {
    quantum_fisher({1, 1, -1});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.kind(), DomainError::Kind::kSingularState);
  }
}

TEST(QuantumFisher, DeterminantIsInverseDelta) {
  Rng rng = make_stream(28, 0);
  for (int n = 0; n < 1000; ++n) {
    const TVector t = sample_interior(rng, 1e-6);
    ASSERT_NEAR(quantum_fisher(t).det() * delta(t), 1.0, 1e-10);
  }
}

TEST(QuantumFisher, ThreeRoutesAgree) {
  Rng rng = make_stream(29, 0);
  for (int n = 0; n < 1000; ++n) {
    const TVector t = sample_interior(rng, 1e-6);
    const MetricTensor closed = quantum_fisher(t);
    const MetricTensor simplex = simplex_fisher(t);
    const MetricTensor sld = fisher_from_sld(sld_operators(t), t);
    ASSERT_LT(closed.max_abs_diff(simplex), 1e-10);
    ASSERT_LT(closed.max_abs_diff(sld), 1e-10);
    ASSERT_LT(simplex.max_abs_diff(sld), 1e-10);
  }
}

TEST(QuantumFisher, PositiveDefiniteInside) {
  Rng rng = make_stream(30, 0);
  for (int n = 0; n < 200; ++n) {
    const TVector t = sample_interior(rng, 1e-3);
    for (const MetricTensor& g : {quantum_fisher(t), wigner_yanase(t)}) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g.matrix());
      ASSERT_GT(es.eigenvalues()(0), 0.0);
    }
  }
}

TEST(QuantumFisher, TetrahedralSymmetry) {
  Rng rng = make_stream(31, 0);
  for (int n = 0; n < 50; ++n) {
    const TVector t = sample_interior(rng, 1e-3);
    const double ref = quantum_fisher(t).sqrt_det();
    for (const Rotation3& m : tetrahedral_symmetries()) {
      ASSERT_NEAR(quantum_fisher(rotate_t(t, m)).sqrt_det() / ref, 1.0, 1e-7);
    }
  }
}

TEST(QuantumFisher, InjectedSignFlipBreaksDeterminant) {
  const TVector t{0.2, 0.1, 0.3};
  EXPECT_GT(std::abs(detail::quantum_fisher_closed_form(t, true).det() * delta(t) - 1.0), 1e-3);
}

TEST(WignerYanase, EqualsHelstrom) {
  EXPECT_LT(wigner_yanase({0, 0, 0}).max_abs_diff(diag(1.0)), 1e-15);
  Rng rng = make_stream(32, 0);
  for (int n = 0; n < 1000; ++n) {
    const TVector t = sample_interior(rng, 1e-6);
    ASSERT_LT(wigner_yanase(t).max_abs_diff(quantum_fisher(t)), 1e-10);
  }
}

TEST(WignerYanase, FiniteDifferenceOfMatrixSquareRoot) {
  const TVector t{0.2, 0.1, -0.3};
  const Eigen::Matrix3d fd = oracle::finite_difference_wy(t, 1e-5);
  EXPECT_LT((wigner_yanase(t).matrix() - fd).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(WignerYanase, SingularOnBoundary) { EXPECT_THROW(wigner_yanase({0, 0, 1}), DomainError); }

TEST(MetricTensor, MatrixRoundTripAndSymmetry) {
  const MetricTensor g{1, 2, 3, 0.1, 0.2, 0.3};
  EXPECT_EQ(MetricTensor::from_matrix(g.matrix()).max_abs_diff(g), 0.0);
  EXPECT_EQ(g(0, 1), g(1, 0));
  EXPECT_EQ(g(2, 1), 0.3);
  EXPECT_NEAR(g.det(), g.matrix().determinant(), 1e-14);
}

}  // namespace
}  // namespace qvol
