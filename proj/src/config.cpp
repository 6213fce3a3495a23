#include "fmcf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fmcf {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  return obj.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

long integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<long>();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  only_keys(root, {"dimension", "resolution", "forcing", "command"}, "config");
  const long dim = integer(need(root, "dimension", "config"), "dimension");
  const long n = integer(need(root, "resolution", "config"), "resolution");
  if (dim != 1 && dim != 2) throw ConfigError("unsupported dimension " + std::to_string(dim));
  if (n < 4) throw ConfigError("resolution must be at least 4");

  const json& f = need(root, "forcing", "config");
  only_keys(f, {"a0", "modes"}, "forcing");
  const double a0 = number(need(f, "a0", "forcing"), "forcing.a0");
  std::vector<FourierMode> modes;
  if (f.contains("modes")) {
    if (!f.at("modes").is_array()) throw ConfigError("forcing.modes must be an array");
    for (const auto& m : f.at("modes")) {
      only_keys(m, {"k", "cos", "sin"}, "forcing mode");
      const json& k = need(m, "k", "forcing mode");
      if (!k.is_array()) throw ConfigError("mode k must be an array");
      if (static_cast<long>(k.size()) != dim)
        throw ConfigError("mode wave vector has " + std::to_string(k.size()) + " entries but dimension is " +
                          std::to_string(dim));
      FourierMode fm;
      for (std::size_t a = 0; a < k.size(); ++a) fm.k[a] = static_cast<int>(integer(k[a], "mode k entry"));
      if (fm.k[0] == 0 && fm.k[1] == 0) throw ConfigError("mode wave vector must be nonzero");
      fm.cos_coeff = m.contains("cos") ? number(m.at("cos"), "mode cos") : 0.0;
      fm.sin_coeff = m.contains("sin") ? number(m.at("sin"), "mode sin") : 0.0;
      modes.push_back(fm);
    }
  }

  CommandParams p;
  if (root.contains("command")) {
    const json& c = root.at("command");
    only_keys(c,
              {"T", "sigma", "tol_c", "tol_obj", "tau", "seed", "snapshot_stride", "speed", "evolve_resolution",
               "oracle_steps"},
              "command");
    if (c.contains("T")) p.final_time = number(c.at("T"), "command.T");
    if (c.contains("sigma")) p.sigma = number(c.at("sigma"), "command.sigma");
    if (c.contains("tol_c")) p.tol_c = number(c.at("tol_c"), "command.tol_c");
    if (c.contains("tol_obj")) p.tol_obj = number(c.at("tol_obj"), "command.tol_obj");
    if (c.contains("tau")) p.tau = number(c.at("tau"), "command.tau");
    if (c.contains("seed")) p.seed = static_cast<std::uint64_t>(integer(c.at("seed"), "command.seed"));
    if (c.contains("snapshot_stride"))
      p.snapshot_stride = static_cast<std::size_t>(integer(c.at("snapshot_stride"), "command.snapshot_stride"));
    if (c.contains("speed")) {
      const json& s = c.at("speed");
      if (s.is_string() && s.get<std::string>() == "auto")
        p.speed_auto = true;
      else
        p.speed = number(s, "command.speed (number or \"auto\")");
    }
    if (c.contains("evolve_resolution"))
      p.evolve_resolution = static_cast<int>(integer(c.at("evolve_resolution"), "command.evolve_resolution"));
    if (c.contains("oracle_steps")) p.oracle_steps = static_cast<int>(integer(c.at("oracle_steps"), "command.oracle_steps"));
  }
  if (!(p.final_time > 0.0)) throw ConfigError("command.T must be positive");
  if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw ConfigError("command.sigma must lie in (0, 1)");
  if (!(p.tol_c > 0.0) || !(p.tol_obj > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(p.tau > 0.0 && p.tau < 1.0)) throw ConfigError("command.tau must lie in (0, 1)");
  if (p.evolve_resolution && *p.evolve_resolution < 4) throw ConfigError("command.evolve_resolution must be >= 4");
  if (p.oracle_steps < 1000) throw ConfigError("command.oracle_steps must be >= 1000");

  return RunConfig{static_cast<int>(dim), static_cast<int>(n), Forcing(static_cast<int>(dim), a0, modes), p};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fmcf
