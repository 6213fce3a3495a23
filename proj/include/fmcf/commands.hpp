#pragma once

// Command layer behind the CLI. Exit codes: 0 pass, 1 error, 2 inconclusive
// (hypothesis not verified, or a cross-check suite failed).

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fmcf/config.hpp"
#include "fmcf/serialization.hpp"

namespace fmcf {

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = "out";
  bool skip_oracle = false;
  bool quiet = false;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

int cmd_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_speed(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_wave(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_crosscheck(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);

/// Loads the config, dispatches, and maps every exception to exit code 1.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err);

/// The pass/fail thresholds used by crosscheck.
struct CrossCheckThresholds {
  double speed_agreement = 1e-2;
  double profile_agreement = 2e-2;
  double perimeter_global = 5e-3;
  double perimeter_generalized = 5e-2;
  double boundary_zero_cells = 2.0;  // in units of h
  double comparison_slack = 1e-4;    // per unit time
  double lyapunov_rel = 1e-8;
  double lyapunov_floor = -1e-6;
};

}  // namespace fmcf
