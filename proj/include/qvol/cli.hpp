#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qvol/run_config.hpp"
#include "qvol/volume.hpp"

namespace qvol::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitIo = 4,
};

/// Entry point of the `qvol` tool; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `steps` evenly spaced purities from pmin to pmax inclusive.
std::vector<double> purity_grid(double pmin, double pmax, int steps);

/// Locale-independent shortest round-trip formatting ("nan" for NaN).
std::string format_number(double v);

/// "# config: {...}" line, then header P,V,V_stderr,Vs,Vs_stderr,R and one row per point.
void write_curve_csv(std::ostream& os, const RatioCurve& curve, const RunConfig& cfg);

}  // namespace qvol::cli
