#pragma once

// Variational characterization of the traveling wave: the functional G_c, its
// constrained minimum mu_c, the speed c* where mu_c changes sign, and the
// (possibly generalized) profile recovered from the minimizer.

#include <optional>
#include <vector>

#include "fmcf/forcing.hpp"
#include "fmcf/torus_grid.hpp"

namespace fmcf {

struct MuSample {
  double c;
  double mu;          // G_c of the minimizer (an upper bound on the discrete minimum)
  ScalarField minimizer;
  double solver_gap;  // certified: true discrete minimum lies in [mu - gap, mu]
  int newton_steps;
};

struct WaveSolution {
  double speed;
  ScalarField profile;  // sentinel outside the support, max over support is 0
  SupportMask support;
  double profile_residual;
  double perimeter_gap;
};

/// h^n sum sqrt(c^2 P^2 + |D+ P|^2) - g P. Rejects entries below -1e-14 and c <= 0.
double eval_Gc(const ScalarField& psi, const ScalarField& g, double c);

/// Minimizes G_c over {P >= 0, integral(g P) = 1}. Throws ContractError when g <= 0
/// at every node, SolverError (with the best gap) when tol_obj is not certified.
MuSample minimize_constrained(const Forcing& g, double c, const PeriodicGrid& grid, double tol_obj = 1e-7);

struct SpeedResult {
  double speed;   // bracket midpoint
  double lower;   // mu certified negative (or the initial lower end)
  double upper;   // mu certified positive (or the initial upper end)
  MuSample sample;
  int bisections;
};

/// Bisection for the root of c -> mu_c on [max(mean g, eps0), max g + eps0],
/// eps0 = 1e-6, until the bracket is narrower than tol_c. Throws HypothesisError
/// if no gcondition witness exists and BracketError if the ends agree in sign.
SpeedResult wave_speed(const Forcing& g, const PeriodicGrid& grid, double tol_c = 1e-3, double tol_obj = 1e-7);

/// Profile from a minimizer. Throws EmptySupportError when nothing survives
/// the threshold tau * max P.
WaveSolution extract_profile(const MuSample& sample, double speed, double tau, const Forcing& g);

/// Sup over nodes i with i and its axis neighbours in the support of
/// |c^2 P/r - div-(D+P / r) - g|, r = sqrt(c^2 P^2 + |D+P|^2), P = exp(c psi).
/// The expression is the discrete profile equation in divergence form.
double profile_residual(const ScalarField& profile, double speed, const ScalarField& g);

/// |Per(E) - integral over E of (g - c / sqrt(1 + |D+ psi|^2))| / (1 + Per(E)).
/// Facets into the sentinel region contribute nothing to the second term.
double check_perimeter_identity(const WaveSolution& sol, const Forcing& g);

struct BoundaryZeroReport {
  bool vacuous;                    // support is the whole torus
  std::vector<double> endpoints;   // facet midpoints of the support boundary
  std::vector<double> zeros;       // zeros of g in [0, 1)
  double max_distance;             // periodic distance to the nearest zero
  int components;
};

/// Dimension 1 only.
BoundaryZeroReport support_boundary_zeros(const WaveSolution& sol, const Forcing& g);

/// Zeros of a 1D forcing located by sign changes on a fine grid and bisection.
std::vector<double> forcing_zeros_1d(const Forcing& g);

}  // namespace fmcf
