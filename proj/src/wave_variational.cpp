#include "fmcf/wave_variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcf/barrier_solver.hpp"
#include "fmcf/errors.hpp"

namespace fmcf {

namespace {

constexpr double kEps0 = 1e-6;

// Sign of mu_c with a dead-band of two solver gaps. 0 means "unresolved".
struct SignedSample {
  int sign;
  MuSample sample;
};

SignedSample signed_mu(const Forcing& g, double c, const PeriodicGrid& grid, double tol_obj) {
  MuSample s = minimize_constrained(g, c, grid, tol_obj);
  auto classify = [](const MuSample& x) {
    if (x.mu < -2.0 * x.solver_gap) return -1;
    if (x.mu > 2.0 * x.solver_gap) return 1;
    return 0;
  };
  int sign = classify(s);
  if (sign == 0) {
    try {
      MuSample finer = minimize_constrained(g, c, grid, tol_obj / 10.0);
      s = std::move(finer);
      sign = classify(s);
    } catch (const SolverError&) {
      // keep the coarser sample
    }
  }
  return {sign, std::move(s)};
}

}  // namespace

double eval_Gc(const ScalarField& psi, const ScalarField& g, double c) {
  if (!(c > 0.0)) throw ContractError("G_c requires c > 0");
  psi.require_finite();
  g.require_finite();
  if (!(psi.grid() == g.grid())) throw ContractError("grid mismatch");
  const auto& grid = psi.grid();
  const auto p = psi.raw();
  const auto gv = g.raw();
  const double inv_h = 1.0 / grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (p[i] < -1e-14) throw ContractError("G_c requires a nonnegative argument");
    double s = c * c * p[i] * p[i];
    for (int a = 0; a < grid.dimension(); ++a) {
      const double d = (p[grid.shift(i, a, 1)] - p[i]) * inv_h;
      s += d * d;
    }
    sum += std::sqrt(s) - gv[i] * p[i];
  }
  return grid.cell_volume() * sum;
}

MuSample minimize_constrained(const Forcing& g, double c, const PeriodicGrid& grid, double tol_obj) {
  if (!(c > 0.0)) throw ContractError("minimize_constrained requires c > 0");
  if (!(tol_obj > 0.0)) throw ContractError("tol_obj must be positive");
  const ScalarField gs = sample(g, grid);
  std::vector<double> gv(gs.raw().begin(), gs.raw().end());
  if (std::none_of(gv.begin(), gv.end(), [](double x) { return x > 0.0; }))
    throw ContractError("infeasible: g <= 0 at every node");
  detail::BarrierOptions opts;
  opts.tol_gap = tol_obj;
  detail::BarrierResult r = detail::solve_barrier(grid, gv, c, opts);
  if (!r.converged) throw SolverError("constrained minimization did not certify tol_obj", r.gap);
  double constraint = 0.0;
  for (std::size_t i = 0; i < gv.size(); ++i) constraint += gv[i] * r.psi[i];
  constraint *= grid.cell_volume();
  const double mu = r.objective - constraint;
  return MuSample{c, mu, ScalarField(grid, std::move(r.psi)), r.gap, r.newton_steps};
}

SpeedResult wave_speed(const Forcing& g, const PeriodicGrid& grid, double tol_c, double tol_obj) {
  if (!(tol_c > 0.0)) throw ContractError("tol_c must be positive");
  if (!check_gcondition(g, grid))
    throw HypothesisError("hypothesis gcondition not verified, proceeding refused");
  const ForcingStats s = stats(g, grid);
  if (g.is_constant()) {
    MuSample at = minimize_constrained(g, s.max, grid, tol_obj);
    return {s.max, s.max, s.max, std::move(at), 0};
  }
  double lo = std::max(s.mean, kEps0);
  double hi = s.max + kEps0;

  SignedSample top = signed_mu(g, hi, grid, tol_obj);
  if (top.sign <= 0) {
    hi += kEps0;
    top = signed_mu(g, hi, grid, tol_obj);
  }
  SignedSample bottom = signed_mu(g, lo, grid, tol_obj);
  if (bottom.sign >= 0 && lo > kEps0) {
    lo = std::max(lo - kEps0, kEps0);
    bottom = signed_mu(g, lo, grid, tol_obj);
  }
  if (top.sign <= 0 || bottom.sign >= 0) throw BracketError(bottom.sample.mu, top.sample.mu);

  int steps = 0;
  while (hi - lo > tol_c) {
    const double mid = 0.5 * (lo + hi);
    const SignedSample at = signed_mu(g, mid, grid, tol_obj);
    ++steps;
    // Unresolved after refinement: fall back to the sign of the estimate.
    const int sign = at.sign != 0 ? at.sign : (at.sample.mu < 0.0 ? -1 : 1);
    if (sign < 0)
      lo = mid;
    else
      hi = mid;
  }
  const double speed = 0.5 * (lo + hi);
  MuSample final_sample = minimize_constrained(g, speed, grid, tol_obj);
  return {speed, lo, hi, std::move(final_sample), steps};
}

double profile_residual(const ScalarField& profile, double speed, const ScalarField& g) {
  const auto& grid = profile.grid();
  if (!(grid == g.grid())) throw ContractError("grid mismatch");
  const std::size_t m = grid.size();
  const int dim = grid.dimension();
  const double inv_h = 1.0 / grid.spacing();
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = profile.is_sentinel(i) ? 0.0 : std::exp(speed * profile.raw()[i]);
  std::vector<double> r(m);
  std::array<std::vector<double>, 2> flux;
  for (int a = 0; a < dim; ++a) flux[a].resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = speed * speed * p[i] * p[i];
    for (int a = 0; a < dim; ++a) {
      const double d = (p[grid.shift(i, a, 1)] - p[i]) * inv_h;
      flux[a][i] = d;
      s += d * d;
    }
    r[i] = std::sqrt(s);
    for (int a = 0; a < dim; ++a) flux[a][i] = r[i] > 0.0 ? flux[a][i] / r[i] : 0.0;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (profile.is_sentinel(i)) continue;
    bool interior = true;
    for (int a = 0; a < dim && interior; ++a)
      interior = !profile.is_sentinel(grid.shift(i, a, 1)) && !profile.is_sentinel(grid.shift(i, a, -1));
    if (!interior) continue;
    double res = speed * speed * p[i] / r[i] - g.raw()[i];
    for (int a = 0; a < dim; ++a) res -= (flux[a][i] - flux[a][grid.shift(i, a, -1)]) * inv_h;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

WaveSolution extract_profile(const MuSample& sample, double speed, double tau, const Forcing& g) {
  if (!(speed > 0.0)) throw ContractError("speed must be positive");
  if (!(tau > 0.0 && tau < 1.0)) throw ContractError("tau must lie in (0, 1)");
  const auto& grid = sample.minimizer.grid();
  const auto p = sample.minimizer.raw();
  const double pmax = *std::max_element(p.begin(), p.end());
  if (!(pmax > 0.0)) throw EmptySupportError();
  std::vector<std::uint8_t> inside(grid.size()), sentinel(grid.size());
  std::vector<double> psi(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    inside[i] = p[i] > tau * pmax ? 1 : 0;
    sentinel[i] = inside[i] ? 0 : 1;
    if (inside[i]) psi[i] = std::log(p[i] / pmax) / speed;
  }
  SupportMask support(grid, inside);
  if (support.empty()) throw EmptySupportError();
  ScalarField profile(grid, std::move(psi), std::move(sentinel));
  WaveSolution sol{speed, profile, support, 0.0, 0.0};
  sol.profile_residual = profile_residual(profile, speed, fmcf::sample(g, grid));
  sol.perimeter_gap = check_perimeter_identity(sol, g);
  return sol;
}

double check_perimeter_identity(const WaveSolution& sol, const Forcing& g) {
  const auto& grid = sol.profile.grid();
  if (sol.support.empty()) throw EmptySupportError();
  const ScalarField gs = sample(g, grid);
  const double inv_h = 1.0 / grid.spacing();
  double integral = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (sol.profile.is_sentinel(i)) continue;
    double term = gs.raw()[i];
    bool finite = true;
    double s = 1.0;
    for (int a = 0; a < grid.dimension(); ++a) {
      const std::size_t j = grid.shift(i, a, 1);
      if (sol.profile.is_sentinel(j)) {
        finite = false;
        break;
      }
      const double d = (sol.profile.raw()[j] - sol.profile.raw()[i]) * inv_h;
      s += d * d;
    }
    if (finite) term -= sol.speed / std::sqrt(s);
    integral += term;
  }
  integral *= grid.cell_volume();
  const double per = perimeter_indicator(sol.support);
  return std::abs(per - integral) / (1.0 + per);
}

std::vector<double> forcing_zeros_1d(const Forcing& g) {
  if (g.dimension() != 1) throw ContractError("forcing_zeros_1d requires dimension 1");
  constexpr int kSamples = 1 << 16;
  std::vector<double> zeros;
  for (int k = 0; k < kSamples; ++k) {
    double a = static_cast<double>(k) / kSamples;
    double b = static_cast<double>(k + 1) / kSamples;
    double fa = g.value(a);
    const double fb = g.value(b);
    if (fa == 0.0) {
      zeros.push_back(a);
      continue;
    }
    if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = g.value(mid);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    zeros.push_back(0.5 * (a + b));
  }
  return zeros;
}

BoundaryZeroReport support_boundary_zeros(const WaveSolution& sol, const Forcing& g) {
  const auto& grid = sol.support.grid();
  if (grid.dimension() != 1 || g.dimension() != 1) throw ContractError("support_boundary_zeros requires dimension 1");
  BoundaryZeroReport r{};
  label_components(sol.support, &r.components);
  if (sol.support.full()) {
    r.vacuous = true;
    r.max_distance = 0.0;
    return r;
  }
  if (sol.support.empty()) throw EmptySupportError();
  const double h = grid.spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.shift(i, 0, 1);
    if (sol.support.inside(i) != sol.support.inside(j)) {
      double y = (static_cast<double>(i) + 0.5) * h;
      if (y >= 1.0) y -= 1.0;
      r.endpoints.push_back(y);
    }
  }
  r.zeros = forcing_zeros_1d(g);
  r.max_distance = 0.0;
  for (double e : r.endpoints) {
    double best = std::numeric_limits<double>::infinity();
    for (double z : r.zeros) {
      double d = std::abs(e - z);
      d = std::min(d, 1.0 - d);
      best = std::min(best, d);
    }
    r.max_distance = std::max(r.max_distance, best);
  }
  return r;
}

}  // namespace fmcf
