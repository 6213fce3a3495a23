// Acceptance runs. Prints one PASS/FAIL line per criterion (plus a few
// supplementary lines) and exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fmcf/flow_evolution.hpp"
#include "fmcf/forcing.hpp"
#include "fmcf/shooting_oracle.hpp"
#include "fmcf/torus_grid.hpp"
#include "fmcf/wave_variational.hpp"

using namespace fmcf;

namespace {

// Pinned tolerances.
constexpr double kConstSpeedTol = 1e-3;
constexpr double kConstResidualTol = 1e-8;
constexpr double kConstDriftTol = 1e-6;
constexpr double kOracleSpeedTol = 1e-2;
constexpr double kOracleProfileTol = 2e-2;
constexpr double kLyapunovRel = 1e-8;
constexpr double kLyapunovFloor = -1e-6;
constexpr double kConvergenceTol20 = 5e-2;
constexpr double kConvergenceTol40 = 2.5e-2;
constexpr double kComparisonSlack = 1e-4;
constexpr double kBoundaryCells = 2.0;
constexpr double kPerimeterRel = 5e-2;
constexpr double kLogSupChange = 0.10;
constexpr double kAdjointTol = 1e-12;
constexpr double kHomogeneityTol = 1e-12;
constexpr double kChangeOfVarTol = 1e-10;
constexpr double kShiftTol = 1e-12;

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void supplementary(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s supplementary %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Forcing cos1d(double a0, double amp) { return Forcing(1, a0, {{{1, 0}, amp, 0.0}}); }

// min over k of sup |a - b - k| on nodes finite in both.
double matched_distance(const ScalarField& a, const ScalarField& b) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.is_sentinel(i) || b.is_sentinel(i)) continue;
    const double d = a[i] - b[i];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return 0.5 * (hi - lo);
}

double sup_abs(const std::vector<double>& v, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

template <class Fn>
void timed(const std::string& label, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    report(label, false, std::string("threw: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("      (%s took %.1f s)\n", label.c_str(), s);
}

void criterion1() {
  const PeriodicGrid grid(1, 256);
  const Forcing g = Forcing::constant(1, 1.0);
  const SpeedResult s = wave_speed(g, grid);
  const WaveSolution w = extract_profile(s.sample, s.speed, 1e-3, g);
  double flat = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) flat = std::max(flat, std::abs(w.profile[i]));
  const EvolutionTrace tr = evolve(ScalarField::constant(grid, 0.0), g, {1.0, 10.0, 0.2, 0});
  const double drift = sup_abs(tr.max_drift);
  const bool pass = std::abs(s.speed - 1.0) <= kConstSpeedTol && w.support.full() &&
                    flat <= kConstResidualTol && w.profile_residual <= kConstResidualTol && drift <= kConstDriftTol;
  report("1", pass,
         "speed " + fmt(s.speed) + ", sup|psi| " + fmt(flat) + ", residual " + fmt(w.profile_residual) +
             ", sup|M| on [0,10] " + fmt(drift));
}

struct ClassicalSetup {
  Forcing g;
  PeriodicGrid grid;
  SpeedResult speed;
  WaveSolution wave;
};

ClassicalSetup classical() {
  const Forcing g = cos1d(1.0, 0.5);
  const PeriodicGrid grid(1, 512);
  SpeedResult s = wave_speed(g, grid, 1e-6);
  WaveSolution w = extract_profile(s.sample, s.speed, 1e-3, g);
  return {g, grid, std::move(s), std::move(w)};
}

void criterion2(const ClassicalSetup& c) {
  const OracleResult orc = solve_classical_wave_1d(c.g);
  if (orc.status != OracleStatus::converged) {
    report("2", false, "oracle did not converge: " + to_string(orc.status));
    return;
  }
  const double dc = std::abs(orc.c - c.speed.speed);
  const double dist = matched_distance(c.wave.profile, oracle_profile(orc, c.grid));
  auto inside = [](double x) { return x >= 1.0 - 1e-6 && x <= 1.5 + 1e-6; };
  const bool pass = dc <= kOracleSpeedTol && dist <= kOracleProfileTol && inside(orc.c) && inside(c.speed.speed);
  report("2", pass,
         "c_var " + fmt(c.speed.speed) + ", c_oracle " + fmt(orc.c) + ", |dc| " + fmt(dc) + ", profile distance " +
             fmt(dist));
}

void criterion3(const ClassicalSetup& c) {
  const double cb = c.speed.speed;
  std::vector<MuSample> s;
  for (double f : {0.5, 0.75, 1.0, 1.25, 1.5}) s.push_back(minimize_constrained(c.g, f * cb, c.grid));
  bool increasing = true;
  for (std::size_t k = 1; k < s.size(); ++k) increasing = increasing && s[k].mu > s[k - 1].mu;
  bool signs = true;
  for (std::size_t k : {0u, 1u}) signs = signs && s[k].mu < -s[k].solver_gap;
  for (std::size_t k : {3u, 4u}) signs = signs && s[k].mu > s[k].solver_gap;
  std::string d = "mu =";
  for (const auto& m : s) d += " " + fmt(m.mu);
  d += ", max gap " + fmt(std::max({s[0].solver_gap, s[1].solver_gap, s[2].solver_gap, s[3].solver_gap, s[4].solver_gap}));
  report("3", increasing && signs, d);
}

// Forcing (2) on N = 256, speed resolved well below the evolution error.
using EvolutionSetup = ClassicalSetup;

EvolutionSetup evolution_setup() {
  const Forcing g = cos1d(1.0, 0.5);
  const PeriodicGrid grid(1, 256);
  SpeedResult s = wave_speed(g, grid, 1e-8, 1e-9);
  WaveSolution w = extract_profile(s.sample, s.speed, 1e-3, g);
  return {g, grid, std::move(s), std::move(w)};
}

void criterion4(const EvolutionSetup& e) {
  // Every Euler step is checked, not only recorded samples.
  const double c = e.speed.speed;
  const ScalarField gs = sample(e.g, e.grid);
  const double T = 2.0;
  const double dt0 = stable_time_step(e.grid, gs, 0.2);
  const auto n = static_cast<std::size_t>(std::ceil(T / dt0));
  const double dt = T / static_cast<double>(n);
  ScalarField w = ScalarField::constant(e.grid, 0.0);
  double f = functional_Fc(w, gs, c);
  double worst = -std::numeric_limits<double>::infinity();
  double fmin = f;
  for (std::size_t k = 0; k < n; ++k) {
    w = step_explicit(w, gs, c, dt, k);
    const double fn = functional_Fc(w, gs, c);
    worst = std::max(worst, fn - f - kLyapunovRel * (1.0 + std::abs(f)));
    fmin = std::min(fmin, fn);
    f = fn;
  }
  report("4", worst <= 0.0 && fmin >= kLyapunovFloor,
         std::to_string(n) + " steps to T=2, worst per-step excess " + fmt(worst) + ", min F " + fmt(fmin) +
             ", F(T) " + fmt(f));
}

void criterion5_6(const EvolutionSetup& e) {
  const double c = e.speed.speed;
  const EvolutionTrace t20 = evolve(ScalarField::constant(e.grid, 0.0), e.g, {c, 20.0, 0.2, 0});
  const EvolutionTrace t40 = evolve(ScalarField::constant(e.grid, 0.0), e.g, {c, 40.0, 0.2, 0});
  const double e20 = matched_distance(t20.snapshots.back(), e.wave.profile);
  const double e40 = matched_distance(t40.snapshots.back(), e.wave.profile);
  report("5", e20 <= kConvergenceTol20 && e40 <= kConvergenceTol40,
         "error at T=20 " + fmt(e20) + ", at T=40 " + fmt(e40) + ", ratio " + fmt(e40 / e20));

  const LowerBoundReport lb = check_lower_bound(t40, e.wave.profile, kComparisonSlack);
  report("6", lb.global_profile && lb.lower.holds && lb.upper.holds,
         "m(t) worst violation " + fmt(lb.lower.worst_violation) + ", M~(t) worst violation " +
             fmt(lb.upper.worst_violation) + " over [0,40]");
}

void criterion7() {
  const Forcing g = cos1d(0.5, 3.0);
  const PeriodicGrid grid(1, 512);
  const OracleResult orc = solve_classical_wave_1d(g);
  const SpeedResult s = wave_speed(g, grid, 1e-6);
  const WaveSolution w = extract_profile(s.sample, s.speed, 1e-3, g);
  const bool proper = !w.support.full();
  bool endpoints_ok = true;
  bool perimeter_ok = true;
  std::string support_detail = "E = Q";
  if (proper) {
    const BoundaryZeroReport z = support_boundary_zeros(w, g);
    endpoints_ok = z.max_distance <= kBoundaryCells * grid.spacing();
    perimeter_ok = w.perimeter_gap <= kPerimeterRel;
    support_detail = "E proper, endpoint distance " + fmt(z.max_distance);
  }

  // Long-time log bound, evolved on a coarser grid with its own speed.
  const PeriodicGrid eg(1, 128);
  const SpeedResult es = wave_speed(g, eg, 1e-6);
  auto log_sup = [&](double T) {
    const EvolutionTrace tr = evolve(ScalarField::constant(eg, 0.0), g, {es.speed, T, 0.2, 0});
    return check_log_bound(tr, es.speed, 0.0);
  };
  const LogBoundReport l100 = log_sup(100.0);
  const LogBoundReport l200 = log_sup(200.0);
  const double change = std::abs(l200.sup_excess - l100.sup_excess) / std::abs(l100.sup_excess);
  const bool log_ok = l100.finite && l200.finite && change <= kLogSupChange;
  const bool saturated = orc.status == OracleStatus::slope_saturation;

  report("7", saturated && endpoints_ok && perimeter_ok && log_ok,
         "oracle " + to_string(orc.status) + (orc.status == OracleStatus::converged ? " at c " + fmt(orc.c) : "") +
             " (expected slope_saturation), c_var " + fmt(s.speed) + ", " + support_detail + ", perimeter rel " +
             fmt(w.perimeter_gap) + ", log sup T=100 " + fmt(l100.sup_excess) + " T=200 " + fmt(l200.sup_excess) +
             " change " + fmt(change));
  supplementary("7a", endpoints_ok && perimeter_ok && log_ok,
                "generalized-wave checks of criterion 7 without the oracle clause");
}

// Same checks on a forcing whose support is a proper subset at this resolution.
void criterion7_proper_support() {
  const Forcing g = cos1d(0.5, 8.0);
  const PeriodicGrid grid(1, 512);
  const OracleResult orc = solve_classical_wave_1d(g);
  const SpeedResult s = wave_speed(g, grid, 1e-6);
  const WaveSolution w = extract_profile(s.sample, s.speed, 1e-3, g);
  const bool proper = !w.support.full();
  const BoundaryZeroReport z = support_boundary_zeros(w, g);
  supplementary("7b",
                orc.status == OracleStatus::slope_saturation && proper &&
                    z.max_distance <= kBoundaryCells * grid.spacing() && w.perimeter_gap <= kPerimeterRel,
                "g = 8cos + 0.5: oracle " + to_string(orc.status) + ", support " + fmt(w.support.measure()) +
                    " in " + std::to_string(z.components) + " component(s), endpoint distance " +
                    fmt(z.max_distance) + " (limit " + fmt(kBoundaryCells * grid.spacing()) + "), perimeter rel " +
                    fmt(w.perimeter_gap));
}

void criterion8() {
  const PeriodicGrid grid(1, 512);
  struct Row {
    const char* name;
    double a0, amp;
  };
  const Row rows[] = {{"1 + 0.5cos", 1.0, 0.5}, {"cos + 0.3", 0.3, 1.0}, {"3cos + 0.5", 0.5, 3.0}};
  const double cn = 2.0, thr = cn * 2.0;
  bool pass = true;
  std::ostringstream d;
  for (const Row& r : rows) {
    // Independent evaluation from the analytic extrema a0 -+ amp.
    const double mn = r.a0 - r.amp, mx = r.a0 + r.amp, osc = mx - mn;
    const bool pos = mn > 0.0;
    const double b3 = mx / (mx / cn - 1.0);
    const std::array<bool, 4> expect{mn <= 0.0 && osc < thr, pos && mx < thr, pos && mx >= thr && osc < b3, pos};
    const ConditionReport rep = check_all(cos1d(r.a0, r.amp), grid);
    const bool ok = rep.classical.branch == expect && !rep.classical.hypothesis_violated;
    pass = pass && ok;
    d << r.name << " [";
    for (bool b : rep.classical.branch) d << (b ? 'T' : 'F');
    d << "]" << (ok ? "" : " mismatch") << "; ";
  }
  pass = pass && check_classical_conditions(cos1d(1.0, 0.5), grid, isoperimetric_constant(1)).branch[3];
  pass = pass && check_classical_conditions(cos1d(0.3, 1.0), grid, isoperimetric_constant(1)).branch[0];
  const auto r3 = check_classical_conditions(cos1d(0.5, 3.0), grid, isoperimetric_constant(1));
  pass = pass && !r3.branch[0] && !r3.branch[1] && !r3.branch[2] && !r3.branch[3];
  const bool no_witness = !check_gcondition(cos1d(0.0, 1.0), grid).has_value();
  d << "cos: " << (no_witness ? "no witness" : "witness found");
  report("8", pass && no_witness, d.str());
}

void criterion9() {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 2.0), lam(0.1, 10.0);
  double adj = 0.0, hom = 0.0, cov = 0.0, shift = 0.0;
  for (int dim : {1, 2}) {
    const PeriodicGrid grid(dim, 64);
    auto rand_vec = [&](auto& dist) {
      std::vector<double> v(grid.size());
      for (double& x : v) x = dist(rng);
      return v;
    };
    const ScalarField gs = sample(Forcing(dim, 0.8, {{{1, dim - 1}, 0.6, 0.3}}), grid);
    for (int t = 0; t < 10; ++t) {
      const ScalarField f(grid, rand_vec(u));
      std::array<std::vector<double>, 2> comps;
      for (int a = 0; a < dim; ++a) comps[a] = rand_vec(u);
      const VectorField v(grid, comps);
      const double lhs = dot(divergence(v), f), rhs = dot(v, gradient(f));
      adj = std::max(adj, std::abs(lhs + rhs) / (std::sqrt(dot(f, f) * dot(v, v)) * 2.0 / grid.spacing()));

      const std::vector<double> p = rand_vec(pos);
      const double l = lam(rng);
      std::vector<double> q(p);
      for (double& x : q) x *= l;
      const double c = 0.5 + std::abs(u(rng));
      const double g1 = eval_Gc(ScalarField(grid, p), gs, c);
      hom = std::max(hom, std::abs(eval_Gc(ScalarField(grid, q), gs, c) - l * g1) / std::max(1.0, std::abs(l * g1)));

      std::vector<double> w = rand_vec(u), e(grid.size());
      for (std::size_t i = 0; i < w.size(); ++i) e[i] = std::exp(c * w[i]) / c;
      const double fc = functional_Fc(ScalarField(grid, w), gs, c);
      const double gc = eval_Gc(ScalarField(grid, e), gs, c);
      cov = std::max(cov, std::abs(fc - gc) / std::max(1.0, std::abs(gc)));
    }
    std::vector<double> w0(grid.size());
    for (double& x : w0) x = 0.2 * u(rng);
    std::vector<double> w1(w0);
    for (double& x : w1) x += 0.75;
    ScalarField a(grid, w0), b(grid, w1);
    const double dt = stable_time_step(grid, gs, 0.2);
    for (std::size_t k = 0; k < 100; ++k) {
      a = step_explicit(a, gs, 1.0, dt, k);
      b = step_explicit(b, gs, 1.0, dt, k);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) shift = std::max(shift, std::abs(b[i] - a[i] - 0.75));
  }
  report("9", adj <= kAdjointTol && hom <= kHomogeneityTol && cov <= kChangeOfVarTol && shift <= kShiftTol,
         "adjointness " + fmt(adj) + ", homogeneity " + fmt(hom) + ", change of variables " + fmt(cov) +
             ", shift equivariance " + fmt(shift));
}

void criterion10() {
  // cos(2 pi y1) cos(2 pi y2) = (cos(2 pi (y1 + y2)) + cos(2 pi (y1 - y2))) / 2.
  const Forcing g(2, 1.0, {{{1, 1}, 0.1, 0.0}, {{1, -1}, 0.1, 0.0}});
  const PeriodicGrid grid(2, 64);
  const SpeedResult s = wave_speed(g, grid);
  const double cb = s.speed;
  const MuSample lo = minimize_constrained(g, 0.5 * cb, grid);
  const MuSample hi = minimize_constrained(g, 1.15 * cb, grid);
  const bool mono = lo.mu < s.sample.mu && s.sample.mu < hi.mu;
  const EvolutionTrace tr = evolve(ScalarField::constant(grid, 0.0), g, {cb, 5.0, 0.2, 0});
  // A drift c t would exceed this bound for any |c - c_true| above max|g| / 5.
  const double bound = 1.2;
  const double msup = sup_abs(tr.max_drift);
  bool finite = true;
  for (double m : tr.max_drift) finite = finite && std::isfinite(m);
  report("10", cb >= 1.0 && cb <= 1.2 && mono && finite && msup <= bound,
         "speed " + fmt(cb) + ", mu at (0.5, 1, 1.15) c* = " + fmt(lo.mu) + " " + fmt(s.sample.mu) + " " +
             fmt(hi.mu) + ", sup|M| on [0,5] " + fmt(msup) + ", M(5) " + fmt(tr.max_drift.back()));
}

}  // namespace

int main() {
  timed("1", criterion1);
  std::optional<ClassicalSetup> cs;
  timed("2", [&] {
    cs.emplace(classical());
    criterion2(*cs);
  });
  if (cs)
    timed("3", [&] { criterion3(*cs); });
  else
    report("3", false, "setup failed");
  std::optional<EvolutionSetup> es;
  timed("4", [&] {
    es.emplace(evolution_setup());
    criterion4(*es);
  });
  if (es)
    timed("5", [&] { criterion5_6(*es); });
  else
    report("5", false, "setup failed");
  timed("7", criterion7);
  timed("7b", criterion7_proper_support);
  timed("8", criterion8);
  timed("9", criterion9);
  timed("10", criterion10);
  std::printf("%d failing line(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
