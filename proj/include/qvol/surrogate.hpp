#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qvol/metrics.hpp"
#include "qvol/state.hpp"

namespace qvol {

/// sqrt(det g^FR) tabulated on a regular n^3 lattice over [-1, 1]^3, with NaN at
/// lattice points outside the tetrahedron (or within `margin` of a face).
class SurrogateGrid {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  SurrogateGrid(int resolution, int n_theta, int n_phi, double margin, std::vector<double> values);

  int resolution() const { return n_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  double margin() const { return margin_; }
  double spacing() const { return 2.0 / (n_ - 1); }
  std::span<const double> values() const { return values_; }

  /// Row-major with t11 fastest.
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * (j + static_cast<std::size_t>(n_) * k);
  }
  double value(int i, int j, int k) const { return values_[index(i, j, k)]; }
  TVector lattice_point(int i, int j, int k) const;

  /// Trilinear interpolation. Throws DomainError(kSurrogateDomainMismatch) if t is
  /// outside the lattice or a corner with nonzero weight is non-finite.
  double interpolate(const TVector& t) const;

  /// Trilinear interpolation restricted to the finite corners of the cell, with
  /// weights renormalized over them. Equals interpolate() on fully finite cells.
  /// Throws DomainError(kSurrogateDomainMismatch) if no corner with nonzero weight is finite.
  double interpolate_masked(const TVector& t) const;

  void save(const std::filesystem::path& path) const;
  static SurrogateGrid load(const std::filesystem::path& path);

 private:
  struct Cell {
    int i, j, k;
    double fx, fy, fz;
  };
  Cell locate(const TVector& t) const;

  int n_;
  int n_theta_;
  int n_phi_;
  double margin_;
  std::vector<double> values_;
};

struct SurrogateBuildStats {
  std::size_t computed = 0;
  std::size_t skipped = 0;
  double wall_seconds = 0.0;
};

/// Evaluates sqrt(det classical_fisher) at every lattice point whose face
/// distance exceeds `margin`; deterministic for given inputs regardless of `workers`.
/// Requires an odd resolution >= 9.
SurrogateGrid build_surrogate(int resolution, const QuadratureGrid& grid, double margin,
                              unsigned workers = 0, SurrogateBuildStats* stats = nullptr);

}  // namespace qvol
