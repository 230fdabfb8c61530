#include "qvol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qvol {

std::string_view to_string(Region r) { return r == Region::kTetrahedron ? "tetra" : "octa"; }

Region parse_region(std::string_view name) {
  if (name == "tetra" || name == "tetrahedron") return Region::kTetrahedron;
  if (name == "octa" || name == "octahedron") return Region::kOctahedron;
  throw std::invalid_argument("unknown region '" + std::string(name) + "' (expected tetra|octa)");
}

bool in_tetrahedron(const TVector& t) {
  const double a = t.t11, b = t.t22, c = t.t33;
  return 1 - a - b - c >= 0 && 1 - a + b + c >= 0 && 1 + a - b + c >= 0 && 1 + a + b - c >= 0;
}

bool in_octahedron(const TVector& t) {
  const double a = t.t11, b = t.t22, c = t.t33;
  return 1 - a - b - c >= 0 && 1 + a - b - c >= 0 && 1 + a + b - c >= 0 && 1 - a + b - c >= 0 &&
         1 - a - b + c >= 0 && 1 + a - b + c >= 0 && 1 + a + b + c >= 0 && 1 - a + b + c >= 0;
}

bool in_region(Region r, const TVector& t) {
  return r == Region::kTetrahedron ? in_tetrahedron(t) : in_octahedron(t);
}

double face_distance(const TVector& t) {
  // Face k is the plane lam_k = 0; |s_k| = sqrt(3).
  return 4.0 * bell_spectrum(t).min() / std::sqrt(3.0);
}

TVector sample_tetrahedron(Rng& rng) {
  static constexpr double kVertices[4][3] = {{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}};
  std::exponential_distribution<double> expo(1.0);
  double w[4];
  double sum = 0.0;
  for (double& x : w) {
    x = expo(rng);
    sum += x;
  }
  double p[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 3; ++i) p[i] += w[k] * kVertices[k][i];
  }
  return {p[0] / sum, p[1] / sum, p[2] / sum};
}

TVector sample_sphere(double r, Rng& rng) {
  std::normal_distribution<double> normal;
  double x, y, z, n;
  do {
    x = normal(rng);
    y = normal(rng);
    z = normal(rng);
    n = std::sqrt(x * x + y * y + z * z);
  } while (n == 0.0);
  const double s = r / n;
  return {x * s, y * s, z * s};
}

double shell_radius(double p) {
  if (!(p >= 0.25 && p <= 1.0)) {
    throw std::invalid_argument("unphysical purity " + std::to_string(p) + ": must lie in [1/4, 1]");
  }
  return std::sqrt(std::max(0.0, 4.0 * p - 1.0));
}

PurityShell PurityShell::from_purity(double p) { return {p, shell_radius(p)}; }

}  // namespace qvol
