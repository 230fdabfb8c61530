#include "qvol/volume.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qvol/error.hpp"
#include "qvol/parallel.hpp"

namespace qvol {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

/// Running moments of the (total, separable) contribution pair.
struct Moments {
  double n = 0.0;
  double mean_a = 0.0, mean_b = 0.0;
  double m2_a = 0.0, m2_b = 0.0, c_ab = 0.0;

  void add(double a, double b) {
    n += 1.0;
    const double da = a - mean_a;
    const double db = b - mean_b;
    mean_a += da / n;
    mean_b += db / n;
    m2_a += da * (a - mean_a);
    m2_b += db * (b - mean_b);
    c_ab += da * (b - mean_b);
  }

  static Moments merge(const Moments& x, const Moments& y) {
    if (x.n == 0.0) return y;
    if (y.n == 0.0) return x;
    Moments r;
    r.n = x.n + y.n;
    const double da = y.mean_a - x.mean_a;
    const double db = y.mean_b - x.mean_b;
    const double f = x.n * y.n / r.n;
    r.mean_a = x.mean_a + da * y.n / r.n;
    r.mean_b = x.mean_b + db * y.n / r.n;
    r.m2_a = x.m2_a + y.m2_a + da * da * f;
    r.m2_b = x.m2_b + y.m2_b + db * db * f;
    r.c_ab = x.c_ab + y.c_ab + da * db * f;
    return r;
  }
};

/// Fixed-shape pairwise reduction over chunk results.
Moments reduce(const std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(reduce(parts, lo, mid), reduce(parts, mid, hi));
}

template <class Sampler>
VolumePair integrate(Sampler&& sample, double reference, const VolumeConfig& cfg) {
  if (cfg.samples < kMinSamples) {
    throw std::invalid_argument("at least " + std::to_string(kMinSamples) + " samples are required");
  }
  if (cfg.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");

  const std::uint64_t n_chunks = (cfg.samples + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<Moments> parts(n_chunks);
  parallel_for(n_chunks, cfg.workers, [&](std::size_t c) {
    Rng rng = make_stream(cfg.seed, c);
    const std::uint64_t begin = c * cfg.chunk_size;
    const std::uint64_t count = std::min(cfg.chunk_size, cfg.samples - begin);
    Moments m;
    for (std::uint64_t s = 0; s < count; ++s) {
      const auto [a, b] = sample(rng);
      m.add(a, b);
    }
    parts[c] = m;
  });
  const Moments m = reduce(parts, 0, parts.size());

  const double n = m.n;
  const double var_a = m.m2_a / (n - 1.0);
  const double var_b = m.m2_b / (n - 1.0);
  const double cov = m.c_ab / (n - 1.0);

  VolumePair out;
  out.total = {m.mean_a * reference, std::sqrt(var_a / n) * reference, cfg.samples, cfg.seed};
  out.separable = {m.mean_b * reference, std::sqrt(var_b / n) * reference, cfg.samples, cfg.seed};
  if (m.mean_b == 0.0) {
    out.ratio = 0.0;
    out.ratio_std_error = 0.0;
  } else if (m.mean_a == 0.0) {
    out.ratio = std::numeric_limits<double>::quiet_NaN();
    out.ratio_std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double r = m.mean_b / m.mean_a;
    out.ratio = r;
    const double v = (var_b - 2.0 * r * cov + r * r * var_a) / (n * m.mean_a * m.mean_a);
    out.ratio_std_error = std::sqrt(std::max(0.0, v));
  }
  return out;
}

IntegralEstimate zero_estimate(const VolumeConfig& cfg) { return {0.0, 0.0, cfg.samples, cfg.seed}; }

}  // namespace

std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::kClassical: return "classical";
    case MetricKind::kSld: return "sld";
    case MetricKind::kWy: return "wy";
  }
  return "?";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "classical" || name == "fr") return MetricKind::kClassical;
  if (name == "sld" || name == "helstrom") return MetricKind::kSld;
  if (name == "wy" || name == "wigner-yanase") return MetricKind::kWy;
  throw std::invalid_argument("unknown metric kind '" + std::string(name) + "' (expected classical|sld|wy)");
}

Density volume_density(MetricKind kind, const VolumeConfig& cfg) {
  const double margin = cfg.margin;
  switch (kind) {
    case MetricKind::kSld:
      return [margin](const TVector& t) {
        if (!(face_distance(t) > margin)) return 0.0;
        const double d = delta(t);
        if (!(d >= 1e-24)) {
          throw DomainError(DomainError::Kind::kSingularState, "singular state inside volume integrand");
        }
        return 1.0 / std::sqrt(d);
      };
    case MetricKind::kWy:
      return [margin](const TVector& t) {
        if (!(face_distance(t) > margin)) return 0.0;
        return wigner_yanase(t).sqrt_det();
      };
    case MetricKind::kClassical:
      if (cfg.surrogate != nullptr) {
        const SurrogateGrid* grid = cfg.surrogate;
        return [margin, grid](const TVector& t) {
          if (!(face_distance(t) > margin)) return 0.0;
          return grid->interpolate_masked(t);
        };
      }
      if (cfg.quadrature != nullptr) {
        const QuadratureGrid* quad = cfg.quadrature;
        return [margin, quad](const TVector& t) {
          if (!(face_distance(t) > margin)) return 0.0;
          return classical_fisher(t, *quad, margin).sqrt_det();
        };
      }
      throw std::invalid_argument("classical metric needs a surrogate grid or quadrature sizes");
  }
  throw std::invalid_argument("unknown metric kind");
}

VolumePair integrate_tetrahedron(const Density& f, const VolumeConfig& cfg) {
  return integrate(
      [&f](Rng& rng) {
        const TVector t = sample_tetrahedron(rng);
        const double v = f(t);
        return std::pair{v, in_octahedron(t) ? v : 0.0};
      },
      kTetrahedronVolume, cfg);
}

VolumePair integrate_sphere(double radius, const Density& f, const VolumeConfig& cfg) {
  if (!(radius >= 0.0)) throw std::invalid_argument("sphere radius must be non-negative");
  return integrate(
      [&f, radius](Rng& rng) {
        const TVector t = sample_sphere(radius, rng);
        if (!in_tetrahedron(t)) return std::pair{0.0, 0.0};
        const double v = f(t);
        return std::pair{v, in_octahedron(t) ? v : 0.0};
      },
      4.0 * std::numbers::pi * radius * radius, cfg);
}

VolumePair volumes(MetricKind kind, const VolumeConfig& cfg) {
  return integrate_tetrahedron(volume_density(kind, cfg), cfg);
}

IntegralEstimate volume(Region region, MetricKind kind, const VolumeConfig& cfg) {
  const VolumePair p = volumes(kind, cfg);
  return region == Region::kTetrahedron ? p.total : p.separable;
}

IntegralEstimate shell_volume(double purity, Region region, MetricKind kind, const VolumeConfig& cfg) {
  const double r = shell_radius(purity);
  if (cfg.samples < kMinSamples) {
    throw std::invalid_argument("at least " + std::to_string(kMinSamples) + " samples are required");
  }
  // Empty intersections: circumradius 1 for the octahedron, sqrt(3) for the tetrahedron.
  if ((region == Region::kOctahedron && r > 1.0) || (region == Region::kTetrahedron && r > kSqrt3)) {
    return zero_estimate(cfg);
  }
  const VolumePair p = integrate_sphere(r, volume_density(kind, cfg), cfg);
  return region == Region::kTetrahedron ? p.total : p.separable;
}

RatioCurve ratio_curve(MetricKind kind, std::span<const double> purities, const VolumeConfig& cfg) {
  if (purities.empty()) throw std::invalid_argument("purity grid is empty");
  for (std::size_t i = 0; i < purities.size(); ++i) {
    shell_radius(purities[i]);  // range check
    if (i > 0 && !(purities[i] > purities[i - 1])) {
      throw std::invalid_argument("purity grid must be strictly increasing");
    }
  }
  const Density f = volume_density(kind, cfg);
  RatioCurve curve;
  curve.reserve(purities.size());
  for (double p : purities) {
    const double r = shell_radius(p);
    RatioPoint pt;
    pt.purity = p;
    if (r > kSqrt3) {
      pt.total = pt.separable = zero_estimate(cfg);
      pt.ratio = 0.0;
    } else {
      const VolumePair v = integrate_sphere(r, f, cfg);
      pt.total = v.total;
      pt.separable = v.separable;
      pt.ratio = v.ratio;
      pt.defined = !std::isnan(v.ratio);
    }
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace qvol
