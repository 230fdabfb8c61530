#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "qvol/geometry.hpp"
#include "qvol/metrics.hpp"
#include "qvol/surrogate.hpp"

namespace qvol {

enum class MetricKind { kClassical, kSld, kWy };

std::string_view to_string(MetricKind k);
MetricKind parse_metric_kind(std::string_view name);  // classical | sld | wy

/// Monte Carlo estimate: sample mean times the reference volume (or area) of
/// the sampling domain, with standard error of the same scale.
struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kDefaultVolumeMargin = 1e-8;
inline constexpr std::uint64_t kMinSamples = 1000;

struct VolumeConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  /// Samples within this distance of a tetrahedron face contribute 0.
  double margin = kDefaultVolumeMargin;
  unsigned workers = 0;  // 0: hardware parallelism
  /// Samples per independently seeded chunk. Part of the result's identity:
  /// changing it changes the sample set.
  std::uint64_t chunk_size = 16384;
  /// Classical metric sources; the surrogate wins when both are set.
  const QuadratureGrid* quadrature = nullptr;
  const SurrogateGrid* surrogate = nullptr;
};

using Density = std::function<double(const TVector&)>;

/// sqrt(det g) of the requested metric, 0 inside the margin band. For the
/// classical metric with a surrogate, cells straddling the tetrahedron boundary
/// are interpolated from their finite corners only.
Density volume_density(MetricKind kind, const VolumeConfig& cfg);

/// Total (tetrahedron) and separable (octahedron) estimates computed from one
/// shared sample stream, plus their ratio.
struct VolumePair {
  IntegralEstimate total;
  IntegralEstimate separable;
  double ratio = 0.0;  // NaN when the total vanishes
  double ratio_std_error = 0.0;
};

/// Uniform samples in the tetrahedron; the separable part masks the same samples.
VolumePair integrate_tetrahedron(const Density& f, const VolumeConfig& cfg);

/// Uniform samples on the sphere of radius r, masked by each region, scaled by 4 pi r^2.
VolumePair integrate_sphere(double radius, const Density& f, const VolumeConfig& cfg);

IntegralEstimate volume(Region region, MetricKind kind, const VolumeConfig& cfg);
VolumePair volumes(MetricKind kind, const VolumeConfig& cfg);

/// Volume of the region's intersection with the purity-P sphere.
IntegralEstimate shell_volume(double purity, Region region, MetricKind kind, const VolumeConfig& cfg);

struct RatioPoint {
  double purity = 0.0;
  IntegralEstimate total;
  IntegralEstimate separable;
  double ratio = 0.0;
  bool defined = true;
};
using RatioCurve = std::vector<RatioPoint>;

/// R(P) on a strictly increasing purity grid; both shell volumes at each P share samples.
RatioCurve ratio_curve(MetricKind kind, std::span<const double> purities, const VolumeConfig& cfg);

}  // namespace qvol
