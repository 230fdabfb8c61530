#include "qvol/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvol/error.hpp"
#include "qvol/geometry.hpp"
#include "qvol/metrics.hpp"
#include "qvol/surrogate.hpp"
#include "qvol/validate.hpp"

namespace qvol::cli {

namespace {

using nlohmann::json;

/// Bad flag value or inconsistent options.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double parse_real(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid number for " + what + ": '" + s + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& s, const std::string& what) {
  const double v = parse_real(s, what);
  if (v < 0 || v != std::floor(v) || v > 9.0e18) {
    throw UsageError(what + " must be a non-negative integer (got '" + s + "')");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    out.push_back(parse_real(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos), what));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw UsageError(what + " expects " + std::to_string(expected) + " comma-separated values (got '" + s + "')");
  }
  return out;
}

std::array<double, 3> parse_t(const std::string& s) {
  const auto v = parse_list(s, 3, "--t");
  return {v[0], v[1], v[2]};
}

unsigned threads_from_env() {
  const char* env = std::getenv("QVOL_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  return static_cast<unsigned>(parse_count(env, "QVOL_THREADS"));
}

/// Writes to --out when set, else to the given stream.
void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (cfg.out.empty()) {
    body(out);
    return;
  }
  std::ofstream f(cfg.out, std::ios::trunc);
  if (!f) throw IoError("cannot open " + cfg.out + " for writing");
  body(f);
  f.flush();
  if (!f) throw IoError("write failed for " + cfg.out);
}

json estimate_json(const IntegralEstimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"n_samples", e.n_samples}, {"seed", e.seed}};
}

json metric_json(const MetricTensor& g) {
  return {{"g11", g.g11}, {"g22", g.g22}, {"g33", g.g33}, {"g12", g.g12}, {"g13", g.g13}, {"g23", g.g23}};
}

std::string resolved_format(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

SurrogateGrid load_surrogate(const RunConfig& cfg) { return SurrogateGrid::load(cfg.surrogate); }

VolumeConfig volume_config(const RunConfig& cfg) {
  VolumeConfig v;
  v.samples = cfg.samples;
  v.seed = cfg.seed;
  v.margin = cfg.margin.value_or(kDefaultVolumeMargin);
  v.workers = cfg.workers;
  return v;
}

// ---------------------------------------------------------------------------
// commands

int cmd_metric(const RunConfig& cfg, std::ostream& out) {
  const MetricKind kind = parse_metric_kind(cfg.kind);
  const TVector t{cfg.t[0], cfg.t[1], cfg.t[2]};
  MetricTensor g;
  switch (kind) {
    case MetricKind::kClassical:
      g = classical_fisher(t, QuadratureGrid(cfg.n_theta, cfg.n_phi), cfg.margin.value_or(kDefaultFisherMargin));
      break;
    case MetricKind::kSld: g = quantum_fisher(t); break;
    case MetricKind::kWy: g = wigner_yanase(t); break;
  }
  resolved_format(cfg, "json");
  const json j{{"t", cfg.t}, {"kind", to_string(kind)}, {"g", metric_json(g)}, {"sqrt_det", g.sqrt_det()},
               {"config", cfg}};
  emit(cfg, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kExitOk;
}

int cmd_volume(const RunConfig& cfg, std::ostream& out) {
  const MetricKind kind = parse_metric_kind(cfg.kind);
  const Region region = parse_region(cfg.region);
  VolumeConfig v = volume_config(cfg);
  std::optional<SurrogateGrid> sur;
  std::optional<QuadratureGrid> quad;
  if (kind == MetricKind::kClassical) {
    if (!cfg.surrogate.empty()) {
      sur.emplace(load_surrogate(cfg));
      v.surrogate = &*sur;
    } else {
      quad.emplace(cfg.n_theta, cfg.n_phi);
      v.quadrature = &*quad;
    }
  }
  const VolumePair p = volumes(kind, v);
  const IntegralEstimate& e = region == Region::kTetrahedron ? p.total : p.separable;
  const std::string fmt = resolved_format(cfg, "json");
  emit(cfg, out, [&](std::ostream& os) {
    if (fmt == "csv") {
      os << "# config: " << json(cfg).dump() << '\n';
      os << "value,std_error,n_samples,seed\n";
      os << format_number(e.value) << ',' << format_number(e.std_error) << ',' << e.n_samples << ',' << e.seed
         << '\n';
      return;
    }
    json j = estimate_json(e);
    j["region"] = to_string(region);
    j["metric"] = to_string(kind);
    j["config"] = cfg;
    os << j.dump(2) << '\n';
  });
  return kExitOk;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out) {
  const MetricKind kind = parse_metric_kind(cfg.kind);
  const std::vector<double> ps = purity_grid(cfg.pmin, cfg.pmax, cfg.steps);
  VolumeConfig v = volume_config(cfg);
  std::optional<SurrogateGrid> sur;
  std::optional<QuadratureGrid> quad;
  if (kind == MetricKind::kClassical) {
    if (!cfg.surrogate.empty()) {
      sur.emplace(load_surrogate(cfg));
      v.surrogate = &*sur;
    } else {
      quad.emplace(cfg.n_theta, cfg.n_phi);
      v.quadrature = &*quad;
    }
  }
  const RatioCurve curve = ratio_curve(kind, ps, v);
  const std::string fmt = resolved_format(cfg, "csv");
  emit(cfg, out, [&](std::ostream& os) {
    if (fmt == "csv") {
      write_curve_csv(os, curve, cfg);
      return;
    }
    json pts = json::array();
    for (const RatioPoint& p : curve) {
      pts.push_back({{"P", p.purity},
                     {"V", p.total.value},
                     {"V_stderr", p.total.std_error},
                     {"Vs", p.separable.value},
                     {"Vs_stderr", p.separable.std_error},
                     {"R", p.defined ? json(p.ratio) : json(nullptr)}});
    }
    os << json{{"metric", to_string(kind)}, {"points", pts}, {"config", cfg}}.dump(2) << '\n';
  });
  return kExitOk;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw UsageError("grid requires --out PATH");
  const QuadratureGrid quad(cfg.n_theta, cfg.n_phi);
  SurrogateBuildStats stats;
  const SurrogateGrid grid =
      build_surrogate(cfg.resolution, quad, cfg.margin.value_or(kDefaultFisherMargin), cfg.workers, &stats);
  grid.save(cfg.out);
  const json j{{"out", cfg.out},
               {"resolution", grid.resolution()},
               {"nodes_computed", stats.computed},
               {"nodes_skipped", stats.skipped},
               {"wall_seconds", stats.wall_seconds},
               {"config", cfg}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, bool inject_fault, std::ostream& out) {
  ValidateOptions opts;
  opts.quick = cfg.quick;
  opts.inject_fault = inject_fault;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  opts.n_theta = cfg.n_theta;
  opts.n_phi = cfg.n_phi;
  const auto results = run_validation(opts);
  bool ok = true;
  const std::string fmt = resolved_format(cfg, "csv");
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back({{"name", r.name}, {"residual", r.residual}, {"threshold", r.threshold}, {"passed", r.passed}});
      ok = ok && r.passed;
    }
    out << json{{"checks", arr}, {"passed", ok}, {"config", cfg}}.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": residual=" << format_number(r.residual)
          << " threshold=" << format_number(r.threshold) << '\n';
      ok = ok && r.passed;
    }
    out << (ok ? "all checks passed" : "validation FAILED") << '\n';
  }
  return ok ? kExitOk : kExitValidationFailed;
}

// ---------------------------------------------------------------------------
// option plumbing

struct Raw {
  std::string kind, region, t, samples, seed, quad, surrogate, pmin, pmax, steps, margin, resolution, threads,
      out, format, config;
  bool quick = false;
  bool inject_fault = false;
};

using Setter = std::function<void(RunConfig&, const Raw&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m{
      {"--kind", [](RunConfig& c, const Raw& r) { c.kind = std::string(to_string(parse_metric_kind(r.kind))); }},
      {"--region", [](RunConfig& c, const Raw& r) { c.region = std::string(to_string(parse_region(r.region))); }},
      {"--t", [](RunConfig& c, const Raw& r) { c.t = parse_t(r.t); }},
      {"--samples", [](RunConfig& c, const Raw& r) { c.samples = parse_count(r.samples, "--samples"); }},
      {"--seed", [](RunConfig& c, const Raw& r) { c.seed = parse_count(r.seed, "--seed"); }},
      {"--quad",
       [](RunConfig& c, const Raw& r) {
         const auto q = parse_list(r.quad, 2, "--quad");
         if (q[0] != std::floor(q[0]) || q[1] != std::floor(q[1]) || q[0] < 2 || q[1] < 2) {
           throw UsageError("--quad expects two integers >= 2");
         }
         c.n_theta = static_cast<int>(q[0]);
         c.n_phi = static_cast<int>(q[1]);
       }},
      {"--surrogate", [](RunConfig& c, const Raw& r) { c.surrogate = r.surrogate; }},
      {"--pmin", [](RunConfig& c, const Raw& r) { c.pmin = parse_real(r.pmin, "--pmin"); }},
      {"--pmax", [](RunConfig& c, const Raw& r) { c.pmax = parse_real(r.pmax, "--pmax"); }},
      {"--steps", [](RunConfig& c, const Raw& r) { c.steps = static_cast<int>(parse_count(r.steps, "--steps")); }},
      {"--margin",
       [](RunConfig& c, const Raw& r) {
         const double m = parse_real(r.margin, "--margin");
         if (m < 0) throw UsageError("--margin must be non-negative");
         c.margin = m;
       }},
      {"--resolution",
       [](RunConfig& c, const Raw& r) { c.resolution = static_cast<int>(parse_count(r.resolution, "--resolution")); }},
      {"--threads",
       [](RunConfig& c, const Raw& r) { c.workers = static_cast<unsigned>(parse_count(r.threads, "--threads")); }},
      {"--out", [](RunConfig& c, const Raw& r) { c.out = r.out; }},
      {"--format", [](RunConfig& c, const Raw& r) { c.format = r.format; }},
      {"--quick", [](RunConfig& c, const Raw& r) { c.quick = r.quick; }},
  };
  return m;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  // CSV artifacts carry the config on their first line.
  if (text.rfind("# config: ", 0) == 0) text = text.substr(10, text.find('\n') - 10);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("config " + path + " is not valid JSON: " + e.what());
  }
  if (j.contains("config")) j = j.at("config");
  try {
    RunConfig cfg = j.get<RunConfig>();
    cfg.out.clear();  // replaying never overwrites the source artifact; pass --out again
    return cfg;
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

}  // namespace

std::vector<double> purity_grid(double pmin, double pmax, int steps) {
  if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
  if (steps == 1) return {pmin};
  if (!(pmax > pmin)) throw std::invalid_argument("--pmax must exceed --pmin");
  std::vector<double> ps(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) ps[i] = pmin + (pmax - pmin) * i / (steps - 1);
  ps.back() = pmax;
  return ps;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_curve_csv(std::ostream& os, const RatioCurve& curve, const RunConfig& cfg) {
  os << "# config: " << json(cfg).dump() << '\n';
  os << "P,V,V_stderr,Vs,Vs_stderr,R\n";
  for (const RatioPoint& p : curve) {
    os << format_number(p.purity) << ',' << format_number(p.total.value) << ','
       << format_number(p.total.std_error) << ',' << format_number(p.separable.value) << ','
       << format_number(p.separable.std_error) << ','
       << (p.defined ? format_number(p.ratio) : std::string("nan")) << '\n';
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qvol: information-geometric volumes of two-qubit states with maximally mixed marginals"};
  app.require_subcommand(1, 1);
  Raw raw;

  auto add = [&](CLI::App* sc, const std::string& flags, std::string& target, const std::string& help) {
    sc->add_option(flags, target, help);
  };
  auto kind = [&](CLI::App* sc) { add(sc, "--kind,--metric", raw.kind, "classical | sld | wy"); };
  auto sampling = [&](CLI::App* sc) {
    add(sc, "--samples", raw.samples, "Monte Carlo samples (scientific notation accepted)");
    add(sc, "--seed", raw.seed, "random seed");
    add(sc, "--surrogate", raw.surrogate, "QVGRID1 surrogate for the classical metric");
  };
  auto common = [&](CLI::App* sc) {
    add(sc, "--quad", raw.quad, "quadrature sizes n_theta,n_phi");
    add(sc, "--margin", raw.margin, "interior margin (distance to tetrahedron faces)");
    add(sc, "--threads", raw.threads, "worker threads (overrides QVOL_THREADS)");
    add(sc, "--out", raw.out, "output path");
    add(sc, "--config", raw.config, "replay the config embedded in a previous artifact");
  };

  CLI::App* metric = app.add_subcommand("metric", "evaluate a metric tensor at a point");
  kind(metric);
  add(metric, "--t", raw.t, "point t11,t22,t33");
  add(metric, "--format", raw.format, "json");
  common(metric);

  CLI::App* volume = app.add_subcommand("volume", "Monte Carlo volume of a region");
  kind(volume);
  add(volume, "--region", raw.region, "tetra | octa");
  add(volume, "--format", raw.format, "json | csv");
  sampling(volume);
  common(volume);

  CLI::App* curve = app.add_subcommand("curve", "separable-volume ratio versus purity");
  kind(curve);
  sampling(curve);
  add(curve, "--pmin", raw.pmin, "smallest purity");
  add(curve, "--pmax", raw.pmax, "largest purity");
  add(curve, "--steps", raw.steps, "number of purity points");
  add(curve, "--format", raw.format, "csv | json");
  common(curve);

  CLI::App* grid = app.add_subcommand("grid", "build the classical-metric surrogate lattice");
  add(grid, "--resolution", raw.resolution, "odd lattice size per axis, >= 9");
  common(grid);

  CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->add_flag("--quick", raw.quick, "reduced sample counts");
  add(validate, "--seed", raw.seed, "random seed");
  add(validate, "--format", raw.format, "csv (text report) | json");
  validate->add_flag("--inject-fault", raw.inject_fault, "test hook: corrupt the Helstrom closed form")
      ->group("");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sc = app.get_subcommands().front();
  try {
    RunConfig cfg;
    if (!raw.config.empty()) {
      cfg = load_config(raw.config);
      if (!cfg.command.empty() && cfg.command != sc->get_name()) {
        throw UsageError("config was written by '" + cfg.command + "', not '" + sc->get_name() + "'");
      }
    }
    cfg.command = sc->get_name();
    for (const auto& [name, set] : setters()) {
      CLI::Option* opt = nullptr;
      try {
        opt = sc->get_option(name);
      } catch (const CLI::OptionNotFound&) {
        continue;
      }
      if (opt->count() > 0) set(cfg, raw);
    }
    if (sc->get_option("--threads")->count() == 0 && cfg.workers == 0) cfg.workers = threads_from_env();

    if (cfg.command == "metric") return cmd_metric(cfg, out);
    if (cfg.command == "volume") return cmd_volume(cfg, out);
    if (cfg.command == "curve") return cmd_curve(cfg, out);
    if (cfg.command == "grid") return cmd_grid(cfg, out);
    return cmd_validate(cfg, raw.inject_fault, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qvol::cli
