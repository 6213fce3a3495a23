#pragma once

// Independent 1D oracle for classical waves. With q = psi' / sqrt(1 + psi'^2)
// the profile equation becomes
//   q' = c sqrt(1 - q^2) - g,   psi' = q / sqrt(1 - q^2),
// and a periodic profile needs q(1) = q(0) and psi(1) = psi(0).

#include <string>
#include <vector>

#include "fmcf/forcing.hpp"
#include "fmcf/torus_grid.hpp"

namespace fmcf {

inline constexpr double kSaturationGuard = 1e-9;

struct ShootingTrajectory {
  bool saturated;      // |q| reached 1 - guard; the remaining fields are partial
  double saturation_y; // where it happened, NaN otherwise
  double q_end;        // q(1)
  double psi_end;      // psi(1) = integral of q / sqrt(1 - q^2)
  std::vector<double> q;    // steps + 1 samples at y = k / steps
  std::vector<double> psi;
};

/// Classic RK4 with fixed step 1/steps on (q, psi). Requires |q0| < 1, steps >= 1000.
ShootingTrajectory integrate_q(double c, double q0, const Forcing& g, int steps);

enum class OracleStatus { converged, slope_saturation, newton_stagnation };

std::string to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status;
  double c;
  double q0;
  double residual_periodicity;  // q(1) - q0
  double residual_mean_slope;   // psi(1) - psi(0)
  int iterations;
  int steps;
  ShootingTrajectory trajectory;
};

/// Damped Newton on (c, q0) with a forward-difference Jacobian (relative step
/// 1e-6, at most 20 halvings, 100 iterations). Starts at (mean g, 0) and
/// falls back to a few other guesses when that start saturates or stalls.
OracleResult solve_classical_wave_1d(const Forcing& g, double tol = 1e-12, int steps = 4096);

/// Profile at the nodes of a 1D grid by cubic Hermite interpolation of the
/// trajectory, shifted so that its maximum is 0. Requires a converged result.
ScalarField oracle_profile(const OracleResult& r, const PeriodicGrid& grid);

}  // namespace fmcf
