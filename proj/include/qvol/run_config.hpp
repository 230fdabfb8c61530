#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace qvol {

/// Everything a CLI invocation depends on. Embedded in every output artifact so
/// that a run can be replayed from its own output (`--config`).
struct RunConfig {
  std::string command;
  std::string kind = "sld";
  std::string region = "tetra";
  std::array<double, 3> t{0.0, 0.0, 0.0};
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 7;
  int n_theta = 24;
  int n_phi = 32;
  std::string surrogate;
  double pmin = 0.25;
  double pmax = 1.0;
  int steps = 25;
  std::optional<double> margin;  // unset: the command's default
  int resolution = 33;
  unsigned workers = 0;  // not part of the result identity
  std::string out;
  std::string format;  // unset: json for most commands, csv for curve
  bool quick = false;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

}  // namespace qvol
