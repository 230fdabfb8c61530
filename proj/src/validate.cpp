#include "qvol/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qvol/geometry.hpp"
#include "qvol/metrics.hpp"
#include "qvol/volume.hpp"

namespace qvol {

TVector sample_interior(Rng& rng, double min_face_distance) {
  for (;;) {
    const TVector t = sample_tetrahedron(rng);
    if (face_distance(t) > min_face_distance) return t;
  }
}

std::vector<Rotation3> tetrahedral_symmetries() {
  std::array<int, 3> perm{0, 1, 2};
  std::vector<Rotation3> out;
  do {
    for (int flips = 0; flips < 8; ++flips) {
      if (__builtin_popcount(flips) % 2 != 0) continue;
      Rotation3 m = Rotation3::Zero();
      for (int r = 0; r < 3; ++r) m(r, perm[r]) = (flips >> r) & 1 ? -1.0 : 1.0;
      out.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

struct Suite {
  std::vector<CheckResult> results;

  void add(std::string name, double residual, double threshold) {
    results.push_back({std::move(name), residual, threshold, std::isfinite(residual) && residual <= threshold});
  }
};

}  // namespace

double sigmas(const IntegralEstimate& e, double exact) {
  const double diff = std::abs(e.value - exact);
  if (e.std_error > 0.0) return diff / e.std_error;
  // Zero-variance estimator (constant integrand over the sampled domain).
  return diff <= 1e-12 * std::abs(exact) ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  const int n_points = opts.quick ? 100 : 1000;
  const int n_sym = opts.quick ? 10 : 50;
  const std::uint64_t n_euclid = opts.quick ? 200'000 : 1'000'000;
  const QuadratureGrid grid(opts.n_theta, opts.n_phi);
  Rng rng = make_stream(opts.seed, 0);
  Suite s;

  // state-core
  {
    double spec_err = 0.0, sum_err = 0.0, purity_err = 0.0;
    for (int n = 0; n < n_points; ++n) {
      const TVector t = sample_tetrahedron(rng);
      const BellSpectrum b = bell_spectrum(t);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(density_from_t(t), Eigen::EigenvaluesOnly);
      std::array<double, 4> sorted = b.lam;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0, sq = 0.0;
      for (int k = 0; k < 4; ++k) {
        spec_err = std::max(spec_err, std::abs(sorted[k] - es.eigenvalues()(k)));
        sum += b.lam[k];
        sq += b.lam[k] * b.lam[k];
      }
      sum_err = std::max(sum_err, std::abs(sum - 1.0));
      purity_err = std::max(purity_err, std::abs(purity(t) - sq));
    }
    s.add("bell spectrum = eigenvalues of rho_t", spec_err, 1e-10);
    s.add("bell spectrum sums to 1", sum_err, 1e-14);
    s.add("purity = sum lam^2", purity_err, 1e-12);

    double rot_err = 0.0;
    for (int n = 0; n < 100; ++n) {
      const Rotation3 o = su2_to_so3(haar_su2(rng));
      rot_err = std::max({rot_err, (o * o.transpose() - Rotation3::Identity()).norm(), std::abs(o.determinant() - 1.0)});
    }
    s.add("su2_to_so3 yields proper rotations", rot_err, 1e-10);
  }

  // geometry
  {
    std::uniform_real_distribution<double> cube(-1.0, 1.0);
    int mismatch = 0;
    for (int n = 0; n < (opts.quick ? 10'000 : 100'000); ++n) {
      const TVector t{cube(rng), cube(rng), cube(rng)};
      if (in_octahedron(t) && !in_tetrahedron(t)) ++mismatch;
      if (in_tetrahedron(t) != (bell_spectrum(t).min() >= -1e-14)) ++mismatch;
      const double l1 = std::abs(t.t11) + std::abs(t.t22) + std::abs(t.t33);
      if (in_octahedron(t) != (l1 <= 1.0)) ++mismatch;
    }
    s.add("region inclusion and membership equivalences (violations)", mismatch, 0.0);
  }

  // metrics: classical
  {
    double norm_err = 0.0;
    int non_positive = 0;
    for (int n = 0; n < (opts.quick ? 20 : 100); ++n) {
      const TVector t = sample_interior(rng, 1e-6);
      norm_err = std::max(norm_err, std::abs(grid.integrate([&](const PhasePoint& x) { return husimi_q(t, x); }) - 1.0));
      grid.for_each_node([&](const PhasePoint& x, double) { non_positive += husimi_q(t, x) > 0.0 ? 0 : 1; });
    }
    s.add("Husimi normalization", norm_err, 1e-10);
    s.add("Husimi positivity at interior points (non-positive nodes)", non_positive, 0.0);

    const MetricTensor g0 = classical_fisher({0, 0, 0}, grid);
    MetricTensor ninth;
    ninth.g11 = ninth.g22 = ninth.g33 = 1.0 / 9.0;
    s.add("classical metric at origin = I/9", g0.max_abs_diff(ninth), 1e-8);

    const QuadratureGrid fine(2 * opts.n_theta, 2 * opts.n_phi);
    double conv = 0.0;
    for (int n = 0; n < 3; ++n) {
      const TVector t = TVector::from(0.7 * sample_interior(rng, 0.05).vec());
      conv = std::max(conv, classical_fisher(t, grid).max_abs_diff(classical_fisher(t, fine)));
    }
    s.add("classical metric quadrature convergence", conv, 1e-8);
  }

  // metrics: quantum
  {
    double wy_err = 0.0, det_err = 0.0, simplex_err = 0.0, sld_err = 0.0, residual = 0.0, comm = 0.0;
    for (int n = 0; n < n_points; ++n) {
      const TVector t = sample_interior(rng, 1e-6);
      const MetricTensor gh = quantum_fisher(t);
      wy_err = std::max(wy_err, wigner_yanase(t).max_abs_diff(gh));
      const MetricTensor gd = detail::quantum_fisher_closed_form(t, opts.inject_fault);
      det_err = std::max(det_err, std::abs(gd.det() * delta(t) - 1.0));
      simplex_err = std::max(simplex_err, simplex_fisher(t).max_abs_diff(gh));
      const SLDTriple sld = sld_operators(t);
      sld_err = std::max(sld_err, fisher_from_sld(sld, t).max_abs_diff(gh));
      const Eigen::Matrix4d rho = density_from_t(t).real();
      for (int i = 0; i < 3; ++i) {
        const Eigen::Matrix4d r = density_derivative(i) - 0.5 * (sld[i] * rho + rho * sld[i]);
        residual = std::max(residual, r.cwiseAbs().maxCoeff());
        comm = std::max(comm, (rho * sld[i] - sld[i] * rho).cwiseAbs().maxCoeff());
      }
    }
    s.add("Wigner-Yanase = Helstrom", wy_err, 1e-10);
    s.add("det(g_H) * delta = 1", det_err, 1e-10);
    s.add("Helstrom closed form = Bell-simplex Fisher", simplex_err, 1e-10);
    s.add("Helstrom closed form = SLD trace formula", sld_err, 1e-10);
    s.add("SLD equation residual", residual, 1e-10);
    s.add("[rho, L_i] = 0", comm, 1e-10);
  }

  // discrete symmetries of the volume density
  {
    const auto syms = tetrahedral_symmetries();
    double cl = 0.0, qu = 0.0;
    for (int n = 0; n < n_sym; ++n) {
      const TVector t = sample_interior(rng, 0.05);
      const double c0 = classical_fisher(t, grid).sqrt_det();
      const double q0 = 1.0 / std::sqrt(delta(t));
      for (const Rotation3& m : syms) {
        const TVector u = rotate_t(t, m);
        cl = std::max(cl, std::abs(classical_fisher(u, grid).sqrt_det() - c0));
        qu = std::max(qu, std::abs(quantum_fisher(u).sqrt_det() - q0) / q0);
      }
    }
    s.add("classical sqrt(det g) tetrahedral symmetry", cl, 1e-7);
    s.add("quantum sqrt(det g) tetrahedral symmetry (relative)", qu, 1e-7);
  }

  // volume engine: Euclidean recovery
  {
    VolumeConfig cfg;
    cfg.samples = n_euclid;
    cfg.seed = opts.seed;
    cfg.workers = opts.workers;
    const VolumePair v = integrate_tetrahedron([](const TVector&) { return 1.0; }, cfg);
    s.add("Euclidean volume of tetrahedron (sigmas from 8/3)", sigmas(v.total, kTetrahedronVolume), 4.0);
    s.add("Euclidean volume of octahedron (sigmas from 4/3)", sigmas(v.separable, kOctahedronVolume), 4.0);
  }

  return s.results;
}

}  // namespace qvol
