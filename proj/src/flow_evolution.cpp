#include "fmcf/flow_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmcf/errors.hpp"

namespace fmcf {

namespace {

constexpr double kOverflow = 1e150;

// Forcing factor sqrt(1 + |p|^2) with the Peclet switch, given pp = |p_centred|^2.
// The centred slope is kept while |g| |p| sqrt(1 + |p|^2) h <= 2; beyond that
// the Godunov upwind slope is used per axis.
inline double forcing_factor(double g, double pp, const double* dm, const double* dp, int dim, double h2) {
  if (g * g * pp * (1.0 + pp) * h2 <= 4.0) return std::sqrt(1.0 + pp);
  double up = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double v = g > 0.0 ? std::max(std::max(dp[a], -dm[a]), 0.0) : std::max(std::max(dm[a], -dp[a]), 0.0);
    up += v * v;
  }
  return std::sqrt(1.0 + up);
}

class Stepper {
 public:
  Stepper(const PeriodicGrid& grid, std::vector<double> g, double c)
      : grid_(grid), g_(std::move(g)), c_(c), n_(grid.resolution()), h_(grid.spacing()) {}

  // out = w + dt * rhs(w). Returns max |out - w| / dt.
  double step(const std::vector<double>& w, std::vector<double>& out, double dt, std::size_t index) const {
    return grid_.dimension() == 1 ? step1(w, out, dt, index) : step2(w, out, dt, index);
  }

 private:
  double step1(const std::vector<double>& w, std::vector<double>& out, double dt, std::size_t index) const {
    const int n = n_;
    const double h = h_, h2 = h * h, inv_h = 1.0 / h, inv_2h = 0.5 / h, inv_h2 = 1.0 / h2;
    double rate = 0.0, guard = 0.0;
    auto node = [&](int i, double wl, double wc, double wr) {
      const double pc = (wr - wl) * inv_2h;
      const double pp = pc * pc;
      const double dm = (wc - wl) * inv_h;
      const double dp = (wr - wc) * inv_h;
      const double r = (wr - 2.0 * wc + wl) * inv_h2 / (1.0 + pp) + g_[i] * forcing_factor(g_[i], pp, &dm, &dp, 1, h2) - c_;
      out[i] = wc + dt * r;
      rate = std::max(rate, std::abs(r));
      guard += r;
    };
    node(0, w[n - 1], w[0], w[1]);
    for (int i = 1; i < n - 1; ++i) node(i, w[i - 1], w[i], w[i + 1]);
    node(n - 1, w[n - 2], w[n - 1], w[0]);
    // guard turns NaN or inf if any node did; std::max alone would drop a NaN.
    if (!std::isfinite(guard) || !(rate * dt < kOverflow) || !(std::abs(out[0]) < kOverflow)) throw BlowUpError(index);
    return rate;
  }

  double step2(const std::vector<double>& w, std::vector<double>& out, double dt, std::size_t index) const {
    const int n = n_;
    const double h = h_, h2 = h * h, inv_h = 1.0 / h, inv_2h = 0.5 / h, inv_h2 = 1.0 / h2, inv_4h2 = 0.25 / h2;
    double rate = 0.0, guard = 0.0;
    for (int j = 0; j < n; ++j) {
      const int jm = j == 0 ? n - 1 : j - 1, jp = j == n - 1 ? 0 : j + 1;
      for (int i = 0; i < n; ++i) {
        const int im = i == 0 ? n - 1 : i - 1, ip = i == n - 1 ? 0 : i + 1;
        const double wc = w[i + n * j];
        const double wxm = w[im + n * j], wxp = w[ip + n * j];
        const double wym = w[i + n * jm], wyp = w[i + n * jp];
        const double pc[2] = {(wxp - wxm) * inv_2h, (wyp - wym) * inv_2h};
        const double dm[2] = {(wc - wxm) * inv_h, (wc - wym) * inv_h};
        const double dp[2] = {(wxp - wc) * inv_h, (wyp - wc) * inv_h};
        const double wxx = (wxp - 2.0 * wc + wxm) * inv_h2;
        const double wyy = (wyp - 2.0 * wc + wym) * inv_h2;
        const double wxy = (w[ip + n * jp] - w[ip + n * jm] - w[im + n * jp] + w[im + n * jm]) * inv_4h2;
        const double denom = 1.0 + pc[0] * pc[0] + pc[1] * pc[1];
        const double diff =
            wxx + wyy - (pc[0] * pc[0] * wxx + 2.0 * pc[0] * pc[1] * wxy + pc[1] * pc[1] * wyy) / denom;
        const std::size_t k = static_cast<std::size_t>(i + n * j);
        const double f = g_[k] * forcing_factor(g_[k], denom - 1.0, dm, dp, 2, h2);
        const double r = diff + f - c_;
        out[k] = wc + dt * r;
        rate = std::max(rate, std::abs(r));
        guard += r;
      }
    }
    // guard turns NaN or inf if any node did; std::max alone would drop a NaN.
    if (!std::isfinite(guard) || !(rate * dt < kOverflow) || !(std::abs(out[0]) < kOverflow)) throw BlowUpError(index);
    return rate;
  }

  PeriodicGrid grid_;
  std::vector<double> g_;
  double c_;
  int n_;
  double h_;
};

// Running-max form of max over s < t of a(s) - a(t) - slack (t - s).
double worst_decrease(const std::vector<double>& t, const std::vector<double>& a, double slack) {
  double best_prefix = -std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) worst = std::max(worst, best_prefix - (a[k] + slack * t[k]));
    best_prefix = std::max(best_prefix, a[k] + slack * t[k]);
  }
  return a.size() < 2 ? 0.0 : worst;
}

}  // namespace

double stable_time_step(const PeriodicGrid& grid, const ScalarField& g, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ContractError("cfl_safety must lie in (0, 1)");
  double gmax = 0.0;
  for (double x : g.raw()) gmax = std::max(gmax, std::abs(x));
  const double h2 = grid.spacing() * grid.spacing();
  return sigma * h2 / (2.0 * grid.dimension() + h2 * gmax);
}

ScalarField step_explicit(const ScalarField& w, const ScalarField& g, double c, double dt, std::size_t step_index) {
  if (!(dt > 0.0)) throw ContractError("dt must be positive");
  w.require_finite();
  g.require_finite();
  if (!(w.grid() == g.grid())) throw ContractError("grid mismatch");
  const Stepper stepper(w.grid(), std::vector<double>(g.raw().begin(), g.raw().end()), c);
  std::vector<double> in(w.raw().begin(), w.raw().end()), out(in.size());
  stepper.step(in, out, dt, step_index);
  return ScalarField(w.grid(), std::move(out));
}

double functional_Fc(const ScalarField& w, const ScalarField& g, double c) {
  if (!(c > 0.0)) throw ContractError("F_c requires c > 0");
  if (!(w.grid() == g.grid())) throw ContractError("grid mismatch");
  g.require_finite();
  const auto& grid = w.grid();
  const std::size_t m = grid.size();
  double wmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    if (!w.is_sentinel(i)) wmax = std::max(wmax, w.raw()[i]);
  if (!std::isfinite(wmax)) return 0.0;
  std::vector<double> e(m);
  for (std::size_t i = 0; i < m; ++i) e[i] = w.is_sentinel(i) ? 0.0 : std::exp(c * (w.raw()[i] - wmax));
  const double inv_ch = 1.0 / (c * grid.spacing());
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = e[i] * e[i];
    for (int a = 0; a < grid.dimension(); ++a) {
      const double d = (e[grid.shift(i, a, 1)] - e[i]) * inv_ch;
      s += d * d;
    }
    sum += std::sqrt(s) - g.raw()[i] * e[i] / c;
  }
  return std::exp(c * wmax) * grid.cell_volume() * sum;
}

EvolutionTrace evolve(const ScalarField& u0, const Forcing& g, const EvolutionParams& params) {
  u0.require_finite();
  if (!(params.final_time > 0.0)) throw ContractError("final_time must be positive");
  const PeriodicGrid& grid = u0.grid();
  const ScalarField gs = sample(g, grid);
  const double dt0 = stable_time_step(grid, gs, params.cfl_safety);
  const auto nsteps = static_cast<std::size_t>(std::ceil(params.final_time / dt0));
  const double dt = params.final_time / static_cast<double>(nsteps);
  const std::size_t stride = params.snapshot_stride > 0 ? params.snapshot_stride : std::max<std::size_t>(1, nsteps / 200);
  const double c = params.speed_shift;
  const Stepper stepper(grid, std::vector<double>(gs.raw().begin(), gs.raw().end()), c);

  EvolutionTrace trace;
  trace.dt = dt;
  trace.steps = nsteps;
  std::vector<double> w(u0.raw().begin(), u0.raw().end()), next(w.size());
  for (std::size_t k = 0;; ++k) {
    const bool record = k % stride == 0 || k == nsteps;
    const double rate = stepper.step(w, next, dt, k);
    if (record) {
      ScalarField snap(grid, w);
      trace.times.push_back(k == nsteps ? params.final_time : static_cast<double>(k) * dt);
      trace.max_drift.push_back(*std::max_element(w.begin(), w.end()));
      trace.lyapunov.push_back(c > 0.0 ? functional_Fc(snap, gs, c) : std::numeric_limits<double>::quiet_NaN());
      trace.wt_sup.push_back(rate);
      trace.snapshots.push_back(std::move(snap));
    }
    if (k == nsteps) break;
    w.swap(next);
  }
  return trace;
}

LowerBoundReport check_lower_bound(const EvolutionTrace& trace, const ScalarField& psi, double slack) {
  std::size_t inside = 0;
  for (std::size_t i = 0; i < psi.size(); ++i) inside += psi.is_sentinel(i) ? 0 : 1;
  if (inside == 0) throw EmptySupportError();
  LowerBoundReport r{};
  r.global_profile = !psi.has_sentinels();
  for (const auto& snap : trace.snapshots) {
    if (!(snap.grid() == psi.grid())) throw ContractError("profile and trace grids differ");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      if (psi.is_sentinel(i)) continue;
      const double d = snap.raw()[i] - psi.raw()[i];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    r.lower.series.push_back(lo);
    r.upper.series.push_back(hi);
  }
  std::vector<double> neg(r.upper.series.size());
  for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -r.upper.series[k];
  r.lower.worst_violation = worst_decrease(trace.times, r.lower.series, slack);
  r.upper.worst_violation = worst_decrease(trace.times, neg, slack);
  r.lower.min_change = std::numeric_limits<double>::infinity();
  r.upper.min_change = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < neg.size(); ++k) {
    r.lower.min_change = std::min(r.lower.min_change, r.lower.series[k] - r.lower.series[0]);
    r.upper.min_change = std::min(r.upper.min_change, r.upper.series[0] - r.upper.series[k]);
  }
  r.lower.holds = r.lower.worst_violation <= 0.0;
  r.upper.holds = r.upper.worst_violation <= 0.0;
  return r;
}

LogBoundReport check_log_bound(const EvolutionTrace& trace, double speed, double u0_min) {
  if (!(speed > 0.0)) throw ContractError("speed must be positive");
  LogBoundReport r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true};
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double t = trace.times[k];
    const double m = trace.max_drift[k];
    r.min_above_u0 = std::min(r.min_above_u0, m - u0_min);
    if (t >= 1.0) r.sup_excess = std::max(r.sup_excess, m - std::log1p(t) / speed);
    // Window start, linearly interpolated between the bracketing records.
    if (k > 0 && trace.times[k - 1] < 1.0 && t > 1.0) {
      const double t0 = trace.times[k - 1];
      const double m1 = trace.max_drift[k - 1] + (m - trace.max_drift[k - 1]) * (1.0 - t0) / (t - t0);
      r.sup_excess = std::max(r.sup_excess, m1 - std::log1p(1.0) / speed);
    }
  }
  r.finite = std::isfinite(r.sup_excess) && std::isfinite(r.min_above_u0);
  return r;
}

double lyapunov_worst_increase(const EvolutionTrace& trace, double rel) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < trace.lyapunov.size(); ++k) {
    const double f0 = trace.lyapunov[k], f1 = trace.lyapunov[k + 1];
    worst = std::max(worst, f1 - f0 - rel * (1.0 + std::abs(f0)));
  }
  return worst;
}

}  // namespace fmcf
