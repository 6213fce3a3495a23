#pragma once

// Strict JSON run configuration. Unknown keys, wrong types and wave vectors of
// the wrong length are rejected before any grid is allocated.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "fmcf/errors.hpp"
#include "fmcf/forcing.hpp"

namespace fmcf {

struct CommandParams {
  double final_time = 1.0;                // "T"
  double sigma = 0.2;                     // "sigma"
  double tol_c = 1e-3;                    // "tol_c"
  double tol_obj = 1e-7;                  // "tol_obj"
  double tau = 1e-3;                      // "tau"
  std::uint64_t seed = 0;                 // "seed"
  std::size_t snapshot_stride = 0;        // "snapshot_stride"
  std::optional<double> speed;            // "speed": number, or "auto" (unset) for the variational speed
  bool speed_auto = false;
  std::optional<int> evolve_resolution;   // "evolve_resolution"
  int oracle_steps = 4096;                // "oracle_steps"
};

struct RunConfig {
  int dimension;
  int resolution;
  Forcing forcing;
  CommandParams command;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace fmcf
