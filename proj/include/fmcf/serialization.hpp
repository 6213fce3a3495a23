#pragma once

// Deterministic text artifacts: 17-significant-digit CSV and ordered JSON.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fmcf/flow_evolution.hpp"
#include "fmcf/forcing.hpp"
#include "fmcf/shooting_oracle.hpp"
#include "fmcf/torus_grid.hpp"
#include "fmcf/wave_variational.hpp"

namespace fmcf {

using Json = nlohmann::ordered_json;

/// Shortest form is not used on purpose: every float is printed with 17
/// significant digits, "-inf" / "inf" / "nan" for non-finite values.
std::string format_double(double x);
/// Inverse of format_double; throws ContractError on junk.
double parse_double(const std::string& s);

/// Columns: index, x (, y), value. Sentinel nodes print as -inf.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field_csv(const std::filesystem::path& path, const PeriodicGrid& grid);

/// Columns: t, M, F_c, wt_sup.
void write_trace_csv(const std::filesystem::path& path, const EvolutionTrace& trace);
/// One row per record: t followed by every node value.
void write_snapshots_csv(const std::filesystem::path& path, const EvolutionTrace& trace);

Json forcing_to_json(const Forcing& g);
Json report_to_json(const ConditionReport& r);
Json wave_header_json(const WaveSolution& sol, const Forcing& g);
Json oracle_to_json(const OracleResult& r);

/// Writes <stem>.json and <stem>_profile.csv.
void save_wave(const std::filesystem::path& dir, const std::string& stem, const WaveSolution& sol, const Forcing& g);

struct LoadedWave {
  WaveSolution solution;
  double stored_residual;
  double recomputed_residual;
};

/// Reads the pair written by save_wave and recomputes the residual from the
/// loaded profile.
LoadedWave load_wave(const std::filesystem::path& dir, const std::string& stem, const Forcing& g);

void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace fmcf
