#include "fmcf/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fmcf/errors.hpp"

namespace fmcf {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ContractError("not a number: '" + s + "'");
  return x;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  auto out = open_out(path);
  const auto& grid = f.grid();
  out << (grid.dimension() == 1 ? "index,x,value\n" : "index,x,y,value\n");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto y = grid.position(i);
    out << i << ',' << format_double(y[0]) << ',';
    if (grid.dimension() == 2) out << format_double(y[1]) << ',';
    out << format_double(f.value(i)) << '\n';
  }
}

ScalarField read_field_csv(const std::filesystem::path& path, const PeriodicGrid& grid) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> values(grid.size(), 0.0);
  std::vector<std::uint8_t> sentinel(grid.size(), 0);
  std::vector<std::uint8_t> seen(grid.size(), 0);
  const std::size_t width = grid.dimension() == 1 ? 3 : 4;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != width) throw ContractError("malformed field row: " + line);
    const auto idx = static_cast<std::size_t>(parse_double(cells[0]));
    if (idx >= grid.size() || seen[idx]) throw ContractError("bad node index in " + path.string());
    seen[idx] = 1;
    const double v = parse_double(cells.back());
    if (std::isinf(v) && v < 0)
      sentinel[idx] = 1;
    else
      values[idx] = v;
  }
  for (auto s : seen)
    if (!s) throw ContractError("missing node in " + path.string());
  return ScalarField(grid, std::move(values), std::move(sentinel));
}

void write_trace_csv(const std::filesystem::path& path, const EvolutionTrace& trace) {
  auto out = open_out(path);
  out << "t,M,F_c,wt_sup\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    out << format_double(trace.times[k]) << ',' << format_double(trace.max_drift[k]) << ','
        << format_double(trace.lyapunov[k]) << ',' << format_double(trace.wt_sup[k]) << '\n';
}

void write_snapshots_csv(const std::filesystem::path& path, const EvolutionTrace& trace) {
  auto out = open_out(path);
  out << "t";
  if (!trace.snapshots.empty())
    for (std::size_t i = 0; i < trace.snapshots.front().size(); ++i) out << ",w" << i;
  out << '\n';
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    out << format_double(trace.times[k]);
    for (double v : trace.snapshots[k].raw()) out << ',' << format_double(v);
    out << '\n';
  }
}

Json forcing_to_json(const Forcing& g) {
  Json modes = Json::array();
  for (const auto& m : g.modes()) {
    Json k = Json::array();
    for (int a = 0; a < g.dimension(); ++a) k.push_back(m.k[a]);
    modes.push_back(Json{{"k", k}, {"cos", m.cos_coeff}, {"sin", m.sin_coeff}});
  }
  return Json{{"a0", g.mean()}, {"modes", modes}};
}

Json report_to_json(const ConditionReport& r) {
  Json j;
  if (r.gcondition) {
    const auto& w = *r.gcondition;
    j["gcondition"] = {{"witness_found", true},
                       {"whole_torus", w.whole_torus},
                       {"lambda", number_or_null(w.lambda)},
                       {"integral", w.integral},
                       {"perimeter", w.perimeter},
                       {"measure", w.set.measure()}};
  } else {
    j["gcondition"] = {{"witness_found", false}, {"note", "no witness in the superlevel family"}};
  }
  const auto& c = r.classical;
  j["classical"] = {{"hypothesis_violated", c.hypothesis_violated},
                    {"branches", {c.branch[0], c.branch[1], c.branch[2], c.branch[3]}},
                    {"verdict", c.verdict()},
                    {"min_g", c.min_g},
                    {"max_g", c.max_g},
                    {"oscillation", c.oscillation},
                    {"C_n", c.c_n},
                    {"threshold", c.threshold},
                    {"branch3_bound", number_or_null(c.branch3_bound)}};
  j["ls_condition"] = {{"holds", r.ls.holds},
                       {"constant_sign", r.ls.constant_sign},
                       {"theta", number_or_null(r.ls.theta)},
                       {"best_margin", r.ls.best_margin}};
  if (r.cls)
    j["cls_condition"] = {{"holds", r.cls->holds}, {"mean_minus_min", r.cls->value}};
  else
    j["cls_condition"] = nullptr;
  if (r.stationary)
    j["stationary_condition"] = {{"plausible", r.stationary->plausible},
                                 {"best_ratio", r.stationary->best_ratio},
                                 {"family_restricted", r.stationary->family_restricted}};
  else
    j["stationary_condition"] = nullptr;
  return j;
}

Json wave_header_json(const WaveSolution& sol, const Forcing& g) {
  const auto& grid = sol.support.grid();
  Json j{{"dimension", grid.dimension()},
         {"resolution", grid.resolution()},
         {"speed", sol.speed},
         {"profile_residual", sol.profile_residual},
         {"perimeter_gap", sol.perimeter_gap},
         {"support_nodes", sol.support.count()},
         {"support_measure", sol.support.measure()},
         {"support_perimeter", perimeter_indicator(sol.support)}};
  int comps = 0;
  label_components(sol.support, &comps);
  j["support_components"] = comps;
  if (grid.dimension() == 1 && !sol.support.full()) {
    const BoundaryZeroReport z = support_boundary_zeros(sol, g);
    j["support_endpoints"] = z.endpoints;
    j["forcing_zeros"] = z.zeros;
    j["max_endpoint_zero_distance"] = z.max_distance;
  }
  j["forcing"] = forcing_to_json(g);
  return j;
}

Json oracle_to_json(const OracleResult& r) {
  return Json{{"status", to_string(r.status)},
              {"c", r.c},
              {"q0", r.q0},
              {"residual_periodicity", r.residual_periodicity},
              {"residual_mean_slope", r.residual_mean_slope},
              {"iterations", r.iterations},
              {"steps", r.steps}};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void save_wave(const std::filesystem::path& dir, const std::string& stem, const WaveSolution& sol, const Forcing& g) {
  write_json(dir / (stem + ".json"), wave_header_json(sol, g));
  write_field_csv(dir / (stem + "_profile.csv"), sol.profile);
}

LoadedWave load_wave(const std::filesystem::path& dir, const std::string& stem, const Forcing& g) {
  std::ifstream in(dir / (stem + ".json"));
  if (!in) throw Error("cannot open " + (dir / (stem + ".json")).string());
  const Json j = Json::parse(in);
  const PeriodicGrid grid(j.at("dimension").get<int>(), j.at("resolution").get<int>());
  ScalarField profile = read_field_csv(dir / (stem + "_profile.csv"), grid);
  std::vector<std::uint8_t> inside(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) inside[i] = profile.is_sentinel(i) ? 0 : 1;
  WaveSolution sol{j.at("speed").get<double>(), profile, SupportMask(grid, inside),
                   j.at("profile_residual").get<double>(), j.at("perimeter_gap").get<double>()};
  const double recomputed = profile_residual(sol.profile, sol.speed, sample(g, grid));
  return {sol, sol.profile_residual, recomputed};
}

}  // namespace fmcf
