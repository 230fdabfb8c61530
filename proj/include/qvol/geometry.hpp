#pragma once

#include <string_view>

#include "qvol/random.hpp"
#include "qvol/state.hpp"

namespace qvol {

/// Tetrahedron: all physical states. Octahedron: the separable ones.
enum class Region { kTetrahedron, kOctahedron };

std::string_view to_string(Region r);
Region parse_region(std::string_view name);  // "tetra"/"tetrahedron", "octa"/"octahedron"

inline constexpr double kTetrahedronVolume = 8.0 / 3.0;
inline constexpr double kOctahedronVolume = 4.0 / 3.0;

/// Closed regions: boundary points are members.
bool in_tetrahedron(const TVector& t);
bool in_octahedron(const TVector& t);
bool in_region(Region r, const TVector& t);

/// Signed Euclidean distance to the nearest tetrahedron face (negative outside).
double face_distance(const TVector& t);

/// Uniform point in the tetrahedron from Dirichlet(1,1,1,1) barycentric weights.
TVector sample_tetrahedron(Rng& rng);

/// Uniform point on the sphere of radius r. The caller owns the 4 pi r^2 area weight.
TVector sample_sphere(double r, Rng& rng);

/// Purity level set P = (1 + r^2)/4.
struct PurityShell {
  double purity;
  double radius;

  static PurityShell from_purity(double p);
};

/// sqrt(4P - 1); throws std::invalid_argument for P outside [1/4, 1].
double shell_radius(double p);

}  // namespace qvol
