#include "fmcf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "fmcf/errors.hpp"
#include "fmcf/flow_evolution.hpp"
#include "fmcf/shooting_oracle.hpp"
#include "fmcf/wave_variational.hpp"

namespace fmcf {

namespace {

struct Logger {
  std::ostream& os;
  bool quiet;
  template <class T>
  Logger& operator<<(const T& x) {
    if (!quiet) os << x;
    return *this;
  }
};

PeriodicGrid main_grid(const RunConfig& cfg) { return PeriodicGrid(cfg.dimension, cfg.resolution); }

PeriodicGrid evolve_grid(const RunConfig& cfg) {
  return PeriodicGrid(cfg.dimension, cfg.command.evolve_resolution.value_or(cfg.resolution));
}

Json speed_json(const SpeedResult& s, const ForcingStats& st) {
  return Json{{"speed", s.speed},
              {"lower", s.lower},
              {"upper", s.upper},
              {"bisections", s.bisections},
              {"mu_at_speed", s.sample.mu},
              {"solver_gap", s.sample.solver_gap},
              {"newton_steps", s.sample.newton_steps},
              {"mean_g", st.mean},
              {"max_g", st.max}};
}

// Half the spread of (a - b) over nodes where b is finite: the sup distance
// after the best constant shift.
double matched_distance(const ScalarField& a, const ScalarField& b) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.is_sentinel(i) || b.is_sentinel(i)) continue;
    const double d = a.raw()[i] - b.raw()[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return 0.5 * (hi - lo);
}

double min_of(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v)
    if (!std::isnan(x)) m = std::min(m, x);
  return m;
}

}  // namespace

int cmd_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  Logger out{log, opt.quiet};
  const PeriodicGrid grid = main_grid(cfg);
  const ConditionReport r = check_all(cfg.forcing, grid);
  const int code = r.gcondition ? kExitPass : kExitInconclusive;
  Json j{{"command", "check"},
         {"dimension", cfg.dimension},
         {"resolution", cfg.resolution},
         {"forcing", forcing_to_json(cfg.forcing)},
         {"report", report_to_json(r)},
         {"exit_code", code}};
  write_json(opt.out_dir / "check.json", j);
  out << "gcondition witness: " << (r.gcondition ? "found" : "none in family") << "\n";
  out << "classical branches: " << r.classical.branch[0] << r.classical.branch[1] << r.classical.branch[2]
      << r.classical.branch[3] << (r.classical.hypothesis_violated ? " (mean <= 0)" : "") << "\n";
  return code;
}

int cmd_speed(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  Logger out{log, opt.quiet};
  const PeriodicGrid grid = main_grid(cfg);
  SpeedResult s = [&] {
    try {
      return wave_speed(cfg.forcing, grid, cfg.command.tol_c, cfg.command.tol_obj);
    } catch (const HypothesisError& e) {
      write_json(opt.out_dir / "speed.json", Json{{"command", "speed"}, {"refused", e.what()}});
      throw;
    }
  }();
  Json j = speed_json(s, stats(cfg.forcing, grid));
  j["command"] = "speed";
  write_json(opt.out_dir / "speed.json", j);
  write_field_csv(opt.out_dir / "speed_minimizer.csv", s.sample.minimizer);
  out << "speed " << format_double(s.speed) << " bracket [" << format_double(s.lower) << ", "
      << format_double(s.upper) << "]\n";
  return kExitPass;
}

int cmd_wave(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  Logger out{log, opt.quiet};
  const PeriodicGrid grid = main_grid(cfg);
  const SpeedResult s = wave_speed(cfg.forcing, grid, cfg.command.tol_c, cfg.command.tol_obj);
  const WaveSolution sol = extract_profile(s.sample, s.speed, cfg.command.tau, cfg.forcing);
  save_wave(opt.out_dir, "wave", sol, cfg.forcing);
  const LoadedWave back = load_wave(opt.out_dir, "wave", cfg.forcing);
  const bool stable = back.recomputed_residual == back.stored_residual && back.solution.speed == sol.speed;
  write_json(opt.out_dir / "wave_roundtrip.json",
             Json{{"stored_residual", back.stored_residual},
                  {"recomputed_residual", back.recomputed_residual},
                  {"bit_stable", stable}});
  out << "speed " << format_double(sol.speed) << " residual " << format_double(sol.profile_residual)
      << " support " << sol.support.count() << "/" << grid.size() << " round-trip "
      << (stable ? "bit-stable" : "MISMATCH") << "\n";
  return stable ? kExitPass : kExitError;
}

int cmd_evolve(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  Logger out{log, opt.quiet};
  const PeriodicGrid grid = evolve_grid(cfg);
  double speed = cfg.command.speed.value_or(0.0);
  if (cfg.command.speed_auto) speed = wave_speed(cfg.forcing, grid, cfg.command.tol_c, cfg.command.tol_obj).speed;
  EvolutionParams p{speed, cfg.command.final_time, cfg.command.sigma, cfg.command.snapshot_stride};
  const ScalarField u0 = ScalarField::constant(grid, 0.0);
  const EvolutionTrace trace = evolve(u0, cfg.forcing, p);
  write_trace_csv(opt.out_dir / "trace.csv", trace);
  write_snapshots_csv(opt.out_dir / "snapshots.csv", trace);
  Json j{{"command", "evolve"},
         {"resolution", grid.resolution()},
         {"speed_shift", speed},
         {"T", cfg.command.final_time},
         {"dt", trace.dt},
         {"steps", trace.steps},
         {"records", trace.times.size()},
         {"final_M", trace.max_drift.back()}};
  if (speed > 0.0) {
    const LogBoundReport lb = check_log_bound(trace, speed, 0.0);
    j["lyapunov_worst_increase"] = lyapunov_worst_increase(trace);
    j["lyapunov_min"] = min_of(trace.lyapunov);
    j["log_bound_sup_excess"] = lb.sup_excess;
    j["log_bound_min_above_u0"] = lb.min_above_u0;
  }
  write_json(opt.out_dir / "evolve.json", j);
  out << "evolved to T=" << format_double(cfg.command.final_time) << " in " << trace.steps << " steps, M(T) = "
      << format_double(trace.max_drift.back()) << "\n";
  return kExitPass;
}

int cmd_crosscheck(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  Logger out{log, opt.quiet};
  const CrossCheckThresholds th;
  const PeriodicGrid grid = main_grid(cfg);
  const ForcingStats st = stats(cfg.forcing, grid);
  Json suites = Json::object();
  bool all_pass = true;
  auto suite = [&](const std::string& name, bool pass, Json evidence) {
    evidence["pass"] = pass;
    suites[name] = evidence;
    all_pass = all_pass && pass;
    out << (pass ? "PASS " : "FAIL ") << name << "\n";
  };
  auto skipped = [&](const std::string& name, const std::string& why) {
    suites[name] = Json{{"skipped", why}};
    out << "SKIP " << name << " (" << why << ")\n";
  };

  const SpeedResult s = wave_speed(cfg.forcing, grid, cfg.command.tol_c, cfg.command.tol_obj);
  const WaveSolution sol = extract_profile(s.sample, s.speed, cfg.command.tau, cfg.forcing);
  save_wave(opt.out_dir, "crosscheck_wave", sol, cfg.forcing);
  Json report{{"command", "crosscheck"}, {"c_variational", s.speed}};

  suite("speed_bracket", s.speed >= st.mean - cfg.command.tol_c && s.speed <= st.max + cfg.command.tol_c,
        Json{{"speed", s.speed}, {"mean_g", st.mean}, {"max_g", st.max}});

  const bool global = sol.support.full();
  suite("perimeter_identity", sol.perimeter_gap <= (global ? th.perimeter_global : th.perimeter_generalized),
        Json{{"relative_error", sol.perimeter_gap}, {"global_support", global}});

  if (cfg.dimension == 1 && !global) {
    const BoundaryZeroReport z = support_boundary_zeros(sol, cfg.forcing);
    suite("support_boundary_zeros", z.max_distance <= th.boundary_zero_cells * grid.spacing(),
          Json{{"max_distance", z.max_distance}, {"limit", th.boundary_zero_cells * grid.spacing()},
               {"components", z.components}});
  } else {
    skipped("support_boundary_zeros", global ? "vacuous: support is the whole torus" : "dimension 2");
  }

  if (cfg.dimension != 1 || opt.skip_oracle) {
    skipped("oracle", opt.skip_oracle ? "--skip-oracle" : "no oracle in dimension 2");
  } else {
    const OracleResult orc = solve_classical_wave_1d(cfg.forcing, 1e-12, cfg.command.oracle_steps);
    report["oracle"] = oracle_to_json(orc);
    if (orc.status == OracleStatus::converged) {
      report["c_oracle"] = orc.c;
      report["delta_c"] = std::abs(orc.c - s.speed);
      const double dist = matched_distance(sol.profile, oracle_profile(orc, grid));
      report["profile_distance"] = dist;
      suite("oracle_speed", std::abs(orc.c - s.speed) <= th.speed_agreement,
            Json{{"c_oracle", orc.c}, {"delta_c", std::abs(orc.c - s.speed)}});
      suite("oracle_profile", dist <= th.profile_agreement, Json{{"distance", dist}});
    } else {
      const ClassicalReport cr = check_classical_conditions(cfg.forcing, grid, isoperimetric_constant(1));
      // A classical wave is guaranteed when the sufficient conditions hold.
      suite("oracle_classical", !cr.verdict(), Json{{"status", to_string(orc.status)}, {"classical_verdict", cr.verdict()}});
    }
  }

  const PeriodicGrid egrid = evolve_grid(cfg);
  const bool same_grid = egrid == grid;
  const SpeedResult es = same_grid ? s : wave_speed(cfg.forcing, egrid, cfg.command.tol_c, cfg.command.tol_obj);
  const WaveSolution esol =
      same_grid ? sol : extract_profile(es.sample, es.speed, cfg.command.tau, cfg.forcing);
  EvolutionParams p{es.speed, cfg.command.final_time, cfg.command.sigma, cfg.command.snapshot_stride};
  const EvolutionTrace trace = evolve(ScalarField::constant(egrid, 0.0), cfg.forcing, p);
  write_trace_csv(opt.out_dir / "crosscheck_trace.csv", trace);

  const double worst_f = lyapunov_worst_increase(trace, th.lyapunov_rel);
  const double min_f = min_of(trace.lyapunov);
  suite("lyapunov", worst_f <= 0.0 && min_f >= th.lyapunov_floor,
        Json{{"worst_increase", worst_f}, {"min_F", min_f}});
  const LowerBoundReport lb = check_lower_bound(trace, esol.profile, th.comparison_slack);
  suite("comparison_lower", lb.lower.holds,
        Json{{"worst_violation", lb.lower.worst_violation}, {"min_change", lb.lower.min_change}});
  if (lb.global_profile)
    suite("comparison_upper", lb.upper.holds, Json{{"worst_violation", lb.upper.worst_violation}});
  else
    skipped("comparison_upper", "profile is not global");
  const LogBoundReport lg = check_log_bound(trace, es.speed, 0.0);
  suite("log_bound", lg.finite && lg.min_above_u0 >= -1e-6,
        Json{{"sup_excess", lg.sup_excess}, {"min_above_u0", lg.min_above_u0}});
  const double terminal = matched_distance(trace.snapshots.back(), esol.profile);
  report["evolution_terminal_distance"] = terminal;
  report["evolution_resolution"] = egrid.resolution();
  report["suites"] = suites;
  report["all_pass"] = all_pass;
  write_json(opt.out_dir / "crosscheck.json", report);
  out << "terminal distance to profile " << format_double(terminal) << "\n";
  return all_pass ? kExitPass : kExitInconclusive;
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(opt.config);
    if (name == "check") return cmd_check(cfg, opt, log);
    if (name == "speed") return cmd_speed(cfg, opt, log);
    if (name == "wave") return cmd_wave(cfg, opt, log);
    if (name == "evolve") return cmd_evolve(cfg, opt, log);
    if (name == "crosscheck") return cmd_crosscheck(cfg, opt, log);
    err << "error: unknown command '" << name << "'\n";
    return kExitError;
  } catch (const HypothesisError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace fmcf
