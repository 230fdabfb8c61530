#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qvol/state.hpp"
#include "qvol/volume.hpp"

namespace qvol {

struct CheckResult {
  std::string name;
  double residual = 0.0;   // measured worst-case deviation
  double threshold = 0.0;  // pass iff residual <= threshold
  bool passed = false;
};

struct ValidateOptions {
  bool quick = false;
  /// Flips the sign of the g12 numerator of the closed-form Helstrom metric in
  /// the determinant check, to demonstrate the suite catches it.
  bool inject_fault = false;
  std::uint64_t seed = 2024;
  unsigned workers = 0;
  int n_theta = 24;
  int n_phi = 32;
};

/// Runs the invariant suite of every module and reports each check.
std::vector<CheckResult> run_validation(const ValidateOptions& opts);

/// |value - exact| in units of the estimate's standard error.
double sigmas(const IntegralEstimate& e, double exact);

/// Uniform tetrahedron sample with face distance above `min_face_distance`.
TVector sample_interior(Rng& rng, double min_face_distance);

/// The 24 signed permutation matrices (even number of sign flips) that map the
/// tetrahedron onto itself.
std::vector<Rotation3> tetrahedral_symmetries();

}  // namespace qvol
