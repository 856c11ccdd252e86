#pragma once

// Subcommand bodies behind the command-line front end. The front end parses
// flags into these argument structs; each body returns a process exit code.
//
// Exit codes: 0 success; 1 failed identity checks; 2 configuration problems
// (parse errors, invalid fields, unwritable outputs); 3 numerical failures
// inside a run, naming the run.

#include "stsbo/config.hpp"
#include "stsbo/grid.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace stsbo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Environment variable consulted for the output directory when neither the
// config file nor an override moved it off the built-in default.
inline constexpr const char* kOutDirEnvVar = "STSBO_OUT_DIR";

struct RunArgs {
  std::string config_path;             // empty: built-in defaults
  std::vector<std::string> overrides;  // key=value pairs, applied in order
  int jobs = 1;
  bool ba_dump = false;  // dump the first compression's iterates per sts run
};

int cmd_run(const RunArgs& args);

struct SynthArgs {
  std::string out_path = "objective.csv";
  double t_f = kDefaultChargeTime;
  double i3_max = std::numeric_limits<double>::infinity();
  double axis_lo = 2.2;
  double axis_hi = 6.0;
  double axis_step = 0.2;
};

int cmd_synth(const SynthArgs& args);

struct CheckArgs {
  int envs = 50;
  std::uint64_t seed = 1;
  bool perturb = false;  // negative control: corrupt one conditional entry
};

int cmd_check(const CheckArgs& args);

struct ReportArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string dir;  // directory holding *_trace.csv files; empty: the config's out_dir
};

int cmd_report(const ReportArgs& args);

}  // namespace stsbo
