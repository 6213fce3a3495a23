#include "fmcf/shooting_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fmcf/errors.hpp"

namespace fmcf {

namespace {

struct Residual {
  bool ok;
  double r0, r1;
  double norm() const { return std::hypot(r0, r1); }
};

Residual residual(double c, double q0, const Forcing& g, int steps) {
  if (!(std::abs(q0) < 1.0 - kSaturationGuard)) return {false, 0.0, 0.0};
  const ShootingTrajectory t = integrate_q(c, q0, g, steps);
  if (t.saturated) return {false, 0.0, 0.0};
  return {true, t.q_end - q0, t.psi_end};
}

OracleResult newton_from(double c, double q0, const Forcing& g, double tol, int steps) {
  OracleResult out{OracleStatus::newton_stagnation, c, q0, 0.0, 0.0, 0, steps, {}};
  Residual r = residual(c, q0, g, steps);
  if (!r.ok) {
    out.status = OracleStatus::slope_saturation;
    return out;
  }
  for (int it = 0; it < 100; ++it) {
    out.iterations = it;
    out.c = c;
    out.q0 = q0;
    out.residual_periodicity = r.r0;
    out.residual_mean_slope = r.r1;
    if (r.norm() <= tol) {
      out.status = OracleStatus::converged;
      return out;
    }
    std::array<double, 2> x{c, q0};
    double jac[2][2];
    for (int j = 0; j < 2; ++j) {
      std::array<double, 2> xp = x;
      const double d = 1e-6 * std::max(1.0, std::abs(x[j]));
      xp[j] += d;
      const Residual rp = residual(xp[0], xp[1], g, steps);
      if (!rp.ok) {
        out.status = OracleStatus::slope_saturation;
        return out;
      }
      jac[0][j] = (rp.r0 - r.r0) / d;
      jac[1][j] = (rp.r1 - r.r1) / d;
    }
    const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if (det == 0.0 || !std::isfinite(det)) return out;
    const double dc = -(jac[1][1] * r.r0 - jac[0][1] * r.r1) / det;
    const double dq = -(-jac[1][0] * r.r0 + jac[0][0] * r.r1) / det;
    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= 20; ++k, alpha *= 0.5) {
      const Residual rn = residual(c + alpha * dc, q0 + alpha * dq, g, steps);
      if (rn.ok && rn.norm() < r.norm()) {
        c += alpha * dc;
        q0 += alpha * dq;
        r = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) return out;
  }
  out.c = c;
  out.q0 = q0;
  out.residual_periodicity = r.r0;
  out.residual_mean_slope = r.r1;
  out.iterations = 100;
  if (r.norm() <= tol) out.status = OracleStatus::converged;
  return out;
}

}  // namespace

std::string to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::converged:
      return "converged";
    case OracleStatus::slope_saturation:
      return "slope_saturation";
    case OracleStatus::newton_stagnation:
      return "newton_stagnation";
  }
  return "unknown";
}

ShootingTrajectory integrate_q(double c, double q0, const Forcing& g, int steps) {
  if (g.dimension() != 1) throw ContractError("shooting requires a 1D forcing");
  if (!(std::abs(q0) < 1.0)) throw ContractError("|q0| must be below 1");
  if (steps < 1000) throw ContractError("at least 1000 steps required");
  const double h = 1.0 / steps;
  ShootingTrajectory t{false, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, {}, {}};
  t.q.reserve(static_cast<std::size_t>(steps) + 1);
  t.psi.reserve(static_cast<std::size_t>(steps) + 1);
  double q = q0, psi = 0.0;
  t.q.push_back(q);
  t.psi.push_back(psi);
  bool bad = false;
  auto rhs = [&](double y, double qq, double& dq, double& dpsi) {
    if (!(std::abs(qq) < 1.0 - kSaturationGuard)) {
      bad = true;
      dq = dpsi = 0.0;
      return;
    }
    const double s = std::sqrt(1.0 - qq * qq);
    dq = c * s - g.value(y);
    dpsi = qq / s;
  };
  for (int k = 0; k < steps; ++k) {
    const double y = k * h;
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(y, q, a1, b1);
    rhs(y + 0.5 * h, q + 0.5 * h * a1, a2, b2);
    rhs(y + 0.5 * h, q + 0.5 * h * a2, a3, b3);
    rhs(y + h, q + h * a3, a4, b4);
    q += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    psi += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    if (bad || !(std::abs(q) < 1.0 - kSaturationGuard)) {
      t.saturated = true;
      t.saturation_y = y;
      return t;
    }
    t.q.push_back(q);
    t.psi.push_back(psi);
  }
  t.q_end = q;
  t.psi_end = psi;
  return t;
}

OracleResult solve_classical_wave_1d(const Forcing& g, double tol, int steps) {
  if (g.dimension() != 1) throw ContractError("the shooting oracle is 1D only");
  const ForcingStats s = stats(g, PeriodicGrid(1, 256));
  const double guesses[][2] = {{s.mean, 0.0}, {0.5 * (s.mean + s.max), 0.0}, {s.max, 0.0}};
  OracleResult first{};
  bool have_first = false;
  bool any_non_saturated = false;
  for (const auto& x0 : guesses) {
    if (!(x0[0] > 0.0)) continue;
    OracleResult r = newton_from(x0[0], x0[1], g, tol, steps);
    if (!have_first) {
      first = r;
      have_first = true;
    }
    if (r.status != OracleStatus::slope_saturation) any_non_saturated = true;
    if (r.status == OracleStatus::converged) {
      r.trajectory = integrate_q(r.c, r.q0, g, steps);
      return r;
    }
  }
  if (!have_first) first = OracleResult{OracleStatus::slope_saturation, s.mean, 0.0, 0.0, 0.0, 0, steps, {}};
  first.status = any_non_saturated ? OracleStatus::newton_stagnation : OracleStatus::slope_saturation;
  return first;
}

ScalarField oracle_profile(const OracleResult& r, const PeriodicGrid& grid) {
  if (r.status != OracleStatus::converged) throw ContractError("oracle did not converge");
  if (grid.dimension() != 1) throw ContractError("oracle profiles are 1D");
  const auto& q = r.trajectory.q;
  const auto& psi = r.trajectory.psi;
  const int steps = static_cast<int>(q.size()) - 1;
  const double h = 1.0 / steps;
  auto slope = [&](int k) { return q[k] / std::sqrt(1.0 - q[k] * q[k]); };
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.position(i)[0];
    int k = std::min(static_cast<int>(std::floor(y * steps)), steps - 1);
    const double t = (y - k * h) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    out[i] = h00 * psi[k] + h10 * h * slope(k) + h01 * psi[k + 1] + h11 * h * slope(k + 1);
  }
  const double mx = *std::max_element(out.begin(), out.end());
  for (double& v : out) v -= mx;
  return ScalarField(grid, std::move(out));
}

}  // namespace fmcf
