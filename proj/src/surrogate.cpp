#include "qvol/surrogate.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "qvol/error.hpp"
#include "qvol/geometry.hpp"
#include "qvol/parallel.hpp"

namespace qvol {

namespace {

static_assert(std::endian::native == std::endian::little, "surrogate I/O assumes a little-endian host");
static_assert(std::numeric_limits<double>::is_iec559);

constexpr char kMagic[8] = {'Q', 'V', 'G', 'R', 'I', 'D', '1', '\n'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw IoError("surrogate file " + path.string() + ": truncated header");
  }
  return v;
}

void check_resolution(int n) {
  if (n < 9 || n % 2 == 0) {
    throw std::invalid_argument("surrogate resolution must be odd and >= 9 (got " + std::to_string(n) + ")");
  }
}

}  // namespace

SurrogateGrid::SurrogateGrid(int resolution, int n_theta, int n_phi, double margin,
                             std::vector<double> values)
    : n_(resolution), n_theta_(n_theta), n_phi_(n_phi), margin_(margin), values_(std::move(values)) {
  check_resolution(n_);
  const auto n = static_cast<std::size_t>(n_);
  if (values_.size() != n * n * n) {
    throw std::invalid_argument("surrogate value count does not match resolution^3");
  }
}

TVector SurrogateGrid::lattice_point(int i, int j, int k) const {
  // Integer numerator keeps the lattice exactly symmetric about 0.
  const double m = n_ - 1;
  auto coord = [&](int a) { return (2.0 * a - m) / m; };
  return {coord(i), coord(j), coord(k)};
}

SurrogateGrid::Cell SurrogateGrid::locate(const TVector& t) const {
  for (int a = 0; a < 3; ++a) {
    if (!(t[a] >= -1.0 && t[a] <= 1.0)) {
      throw DomainError(DomainError::Kind::kSurrogateDomainMismatch,
                        "surrogate domain mismatch: point outside [-1,1]^3");
    }
  }
  const double inv_h = (n_ - 1) / 2.0;
  auto split = [&](double x, int& idx, double& frac) {
    double u = (x + 1.0) * inv_h;
    if (const double r = std::round(u); std::abs(u - r) < 1e-12) u = r;  // snap onto lattice planes
    idx = std::min(static_cast<int>(std::floor(u)), n_ - 2);
    frac = u - idx;
  };
  Cell c{};
  split(t.t11, c.i, c.fx);
  split(t.t22, c.j, c.fy);
  split(t.t33, c.k, c.fz);
  return c;
}

double SurrogateGrid::interpolate(const TVector& t) const {
  const Cell c = locate(t);
  double acc = 0.0;
  for (int dz = 0; dz < 2; ++dz) {
    const double wz = dz ? c.fz : 1.0 - c.fz;
    for (int dy = 0; dy < 2; ++dy) {
      const double wy = dy ? c.fy : 1.0 - c.fy;
      for (int dx = 0; dx < 2; ++dx) {
        const double w = (dx ? c.fx : 1.0 - c.fx) * wy * wz;
        if (w == 0.0) continue;
        const double v = value(c.i + dx, c.j + dy, c.k + dz);
        if (!std::isfinite(v)) {
          throw DomainError(DomainError::Kind::kSurrogateDomainMismatch,
                            "surrogate domain mismatch: interpolation cell has a non-finite corner");
        }
        acc += w * v;
      }
    }
  }
  return acc;
}

double SurrogateGrid::interpolate_masked(const TVector& t) const {
  const Cell c = locate(t);
  double acc = 0.0;
  double wsum = 0.0;
  for (int dz = 0; dz < 2; ++dz) {
    const double wz = dz ? c.fz : 1.0 - c.fz;
    for (int dy = 0; dy < 2; ++dy) {
      const double wy = dy ? c.fy : 1.0 - c.fy;
      for (int dx = 0; dx < 2; ++dx) {
        const double w = (dx ? c.fx : 1.0 - c.fx) * wy * wz;
        if (w == 0.0) continue;
        const double v = value(c.i + dx, c.j + dy, c.k + dz);
        if (!std::isfinite(v)) continue;
        acc += w * v;
        wsum += w;
      }
    }
  }
  if (wsum == 0.0) {
    throw DomainError(DomainError::Kind::kSurrogateDomainMismatch,
                      "surrogate domain mismatch: interpolation cell has no finite corner");
  }
  return acc / wsum;
}

void SurrogateGrid::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n_theta_));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(n_phi_));
  put<double>(out, margin_);
  for (double v : values_) put<double>(out, std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN());
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

SurrogateGrid SurrogateGrid::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open surrogate file " + path.string());
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError("surrogate file " + path.string() + ": bad magic");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kFormatVersion) {
    throw IoError("surrogate file " + path.string() + ": unsupported format version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(in, path);
  const auto n_theta = get<std::uint32_t>(in, path);
  const auto n_phi = get<std::uint32_t>(in, path);
  const auto margin = get<double>(in, path);
  if (n < 9 || n % 2 == 0 || n > 4097) {
    throw IoError("surrogate file " + path.string() + ": invalid resolution " + std::to_string(n));
  }
  std::vector<double> values(static_cast<std::size_t>(n) * n * n);
  if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)))) {
    throw IoError("surrogate file " + path.string() + ": truncated value block");
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw IoError("surrogate file " + path.string() + ": trailing bytes after value block");
  }
  return SurrogateGrid(static_cast<int>(n), static_cast<int>(n_theta), static_cast<int>(n_phi), margin,
                       std::move(values));
}

SurrogateGrid build_surrogate(int resolution, const QuadratureGrid& grid, double margin, unsigned workers,
                              SurrogateBuildStats* stats) {
  check_resolution(resolution);
  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<double> values(n * n * n, std::numeric_limits<double>::quiet_NaN());
  SurrogateGrid shape(resolution, grid.n_theta(), grid.n_phi(), margin, values);

  // One work item per t33 slab.
  std::vector<std::size_t> computed(n, 0);
  parallel_for(n, workers, [&](std::size_t k) {
    for (int j = 0; j < resolution; ++j) {
      for (int i = 0; i < resolution; ++i) {
        const TVector t = shape.lattice_point(i, j, static_cast<int>(k));
        if (!(face_distance(t) > margin)) continue;
        values[shape.index(i, j, static_cast<int>(k))] = classical_fisher(t, grid, margin).sqrt_det();
        ++computed[k];
      }
    }
  });

  if (stats != nullptr) {
    stats->computed = 0;
    for (std::size_t c : computed) stats->computed += c;
    stats->skipped = values.size() - stats->computed;
    stats->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return SurrogateGrid(resolution, grid.n_theta(), grid.n_phi(), margin, std::move(values));
}

}  // namespace qvol
