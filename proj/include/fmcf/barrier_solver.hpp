#pragma once

// Log-barrier Newton solver for
//
//   minimize  J(P) = h^n sum_i |K_i P|,   K_i P = (c P_i, D+ P_i)
//   subject to  P >= 0,  h^n <g, P> = 1.
//
// The affine constraint is kept exactly through a bordered KKT system. After
// each barrier stage a dual point y_i = K_i P / |K_i P| is formed; it yields
// the certified lower bound max{lambda : K^T y >= lambda g}, so J(P) - lambda
// bounds the suboptimality from above.

#include <cstddef>
#include <vector>

#include "fmcf/torus_grid.hpp"

namespace fmcf::detail {

struct BarrierOptions {
  double tol_gap = 1e-7;
  double mu_floor = 1e-13;   // smallest barrier weight tried
  int max_newton = 20000;    // total Newton steps across all stages
};

struct BarrierResult {
  std::vector<double> psi;  // feasible: psi > 0 and h^n <g, psi> = 1 to roundoff
  double objective;         // J(psi)
  double lower_bound;       // certified, -inf when the dual point is infeasible
  double gap;               // objective - lower_bound
  int newton_steps;
  bool converged;
};

BarrierResult solve_barrier(const PeriodicGrid& grid, const std::vector<double>& g, double c,
                            const BarrierOptions& opts);

/// h^n sum_i |K_i P| for arbitrary P (no sign requirement).
double weighted_tv(const PeriodicGrid& grid, const std::vector<double>& p, double c);

}  // namespace fmcf::detail
