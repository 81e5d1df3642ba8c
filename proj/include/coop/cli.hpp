#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coop/json_io.hpp"
#include "coop/model.hpp"
#include "coop/sweep.hpp"

namespace coop {

enum class Mode { Analyze, Simulate, Sweep, Hopf, Reproduce };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view name);

struct AnalyzeOptions {
  /// Also run stability_probe on every equilibrium.
  bool probe = false;
  double radius = 1e-3;

  bool operator==(const AnalyzeOptions&) const = default;
};

struct SimulateOptions {
  /// Scaled coordinates (u, v), also for a raw parameter block.
  State initial{0.4, 0.1};
  double t_max = 5000.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  std::int64_t max_steps = 100'000'000;
  bool cycle = false;
  double burn_in = 0.5;

  bool operator==(const SimulateOptions&) const = default;
};

struct SweepOptions {
  SweepParameter parameter = SweepParameter::Q;
  double lo = 0.0;
  double hi = 0.0;
  int points = 2;
  bool probe = false;
  AttractorProbe attractor;
  unsigned threads = 0;

  bool operator==(const SweepOptions&) const = default;
};

struct HopfOptions {
  /// Solve for q_h from (b, p); otherwise q must be given and lie on q_h.
  bool locate = true;

  bool operator==(const HopfOptions&) const = default;
};

struct RunConfig {
  Mode mode = Mode::Analyze;
  /// Exactly one is set, except for reproduce where the target fixes them.
  std::optional<ScaledParams> scaled;
  std::optional<RawParams> raw;
  AnalyzeOptions analyze;
  SimulateOptions simulate;
  SweepOptions sweep;
  HopfOptions hopf;
  /// reproduce target: fig1 or fig2.
  std::string target;
  std::string output_dir = ".";
  /// Subset of json, csv, svg, table; empty means everything the mode emits.
  std::vector<std::string> formats;
  std::uint64_t seed = 0;

  bool wants(std::string_view format) const;

  bool operator==(const RunConfig&) const = default;
};

void to_json(Json& j, const RunConfig& c);
void from_json(const Json& j, RunConfig& c);

/// Throws InvalidParameter. Does not touch the file system.
void validate(const RunConfig& c);

extern const std::vector<std::string> kReproduceTargets;

/// Preset configuration of a reproduce target; throws InvalidParameter
/// listing the valid targets.
RunConfig reproduce_config(const std::string& target);

/// Process exit code for an exception escaping a command: 2 invalid input,
/// 3 numerical failure, 4 assumption violation.
int exit_code_for(const std::exception& e);

/// Runs one invocation. Output files go to the configured directory, which
/// the COOPPRED_OUTPUT_DIR environment variable overrides unless --out is
/// given. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coop
