#include "qvol/run_config.hpp"

namespace qvol {

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{
      {"command", c.command},
      {"kind", c.kind},
      {"region", c.region},
      {"t", c.t},
      {"samples", c.samples},
      {"seed", c.seed},
      {"quad", {c.n_theta, c.n_phi}},
      {"surrogate", c.surrogate},
      {"pmin", c.pmin},
      {"pmax", c.pmax},
      {"steps", c.steps},
      {"margin", c.margin ? nlohmann::json(*c.margin) : nlohmann::json(nullptr)},
      {"resolution", c.resolution},
      {"workers", c.workers},
      {"out", c.out},
      {"format", c.format},
      {"quick", c.quick},
  };
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  RunConfig d;
  c.command = j.value("command", d.command);
  c.kind = j.value("kind", d.kind);
  c.region = j.value("region", d.region);
  c.t = j.value("t", d.t);
  c.samples = j.value("samples", d.samples);
  c.seed = j.value("seed", d.seed);
  if (j.contains("quad")) {
    const auto q = j.at("quad").get<std::array<int, 2>>();
    c.n_theta = q[0];
    c.n_phi = q[1];
  } else {
    c.n_theta = d.n_theta;
    c.n_phi = d.n_phi;
  }
  c.surrogate = j.value("surrogate", d.surrogate);
  c.pmin = j.value("pmin", d.pmin);
  c.pmax = j.value("pmax", d.pmax);
  c.steps = j.value("steps", d.steps);
  if (j.contains("margin") && !j.at("margin").is_null()) {
    c.margin = j.at("margin").get<double>();
  } else {
    c.margin.reset();
  }
  c.resolution = j.value("resolution", d.resolution);
  c.workers = j.value("workers", d.workers);
  c.out = j.value("out", d.out);
  c.format = j.value("format", d.format);
  c.quick = j.value("quick", d.quick);
}

}  // namespace qvol
