#pragma once

// Explicit time stepping for the forced graph flow in its shifted form
//   w_t = tr[(I - p (x) p / (1 + |p|^2)) D^2 w] + g sqrt(1 + |p|^2) - c,  p = Dw,
// plus the long-time diagnostics evaluated along a run.

#include <cstddef>
#include <vector>

#include "fmcf/forcing.hpp"
#include "fmcf/torus_grid.hpp"
#include "fmcf/wave_variational.hpp"

namespace fmcf {

struct EvolutionParams {
  double speed_shift = 0.0;     // c
  double final_time = 1.0;      // T
  double cfl_safety = 0.2;      // sigma
  std::size_t snapshot_stride = 0;  // 0 picks about 200 records
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> max_drift;  // M(t) = max w(t)
  std::vector<double> lyapunov;   // F_c(w(t)), NaN when c = 0
  std::vector<double> wt_sup;     // |w(t + dt) - w(t)|_inf / dt
  std::vector<ScalarField> snapshots;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// dt = sigma h^2 / (2 n + h^2 max|g|).
double stable_time_step(const PeriodicGrid& grid, const ScalarField& g, double sigma);

/// One forward Euler step. Second differences are centred; the slope inside
/// the quasilinear coefficient is centred; the slope inside g sqrt(1 + |p|^2)
/// is centred unless the local cell Peclet number |g| |p| sqrt(1+|p|^2) h
/// exceeds 2, in which case the Godunov upwind slope is used. Throws
/// BlowUpError(step_index) on a non-finite or overflowing update.
ScalarField step_explicit(const ScalarField& w, const ScalarField& g, double c, double dt, std::size_t step_index = 0);

EvolutionTrace evolve(const ScalarField& u0, const Forcing& g, const EvolutionParams& params);

/// h^n sum sqrt(e^{2 c w_i} + |D+ e^{c w}|_i^2 / c^2) - g_i e^{c w_i} / c, i.e. G_c(e^{c w} / c).
/// Sentinel nodes carry e^{c w} = 0. Requires c > 0.
double functional_Fc(const ScalarField& w, const ScalarField& g, double c);

struct MonotoneReport {
  std::vector<double> series;
  double worst_violation;  // max over s < t of series(s) - series(t) - slack (t - s), for "nondecreasing"
  double min_change;       // min over t of series(t) - series(0)
  bool holds;
};

struct LowerBoundReport {
  MonotoneReport lower;  // m(t) = min over support (w - psi), should not decrease
  MonotoneReport upper;  // M~(t) = max over support (w - psi), should not increase
  bool global_profile;   // upper bound only asserted for E = Q
};

/// Slack is per unit time.
LowerBoundReport check_lower_bound(const EvolutionTrace& trace, const ScalarField& psi, double slack = 1e-4);

struct LogBoundReport {
  double sup_excess;     // sup over t in [1, T] of M(t) - log(1 + t) / c
  double min_above_u0;   // min over t of M(t) - min u0
  bool finite;
};

/// The sup runs over the recorded times plus t = 1, where M is interpolated linearly.
LogBoundReport check_log_bound(const EvolutionTrace& trace, double speed, double u0_min);

/// max over consecutive trace samples of F(t_{k+1}) - F(t_k) - rel (1 + |F(t_k)|); <= 0 means nonincreasing.
double lyapunov_worst_increase(const EvolutionTrace& trace, double rel = 1e-8);

}  // namespace fmcf
