#include "fmcf/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fmcf/errors.hpp"

namespace fmcf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kLambdaSamples = 201;

int max_refined_resolution(int dimension) { return dimension == 1 ? (1 << 16) : 2048; }

struct Extremes {
  double min, max, sup_grad;
};

Extremes sampled_extremes(const Forcing& g, const PeriodicGrid& grid) {
  Extremes e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto y = grid.position(k);
    const double v = g.value(y);
    const auto d = g.gradient(y);
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
    e.sup_grad = std::max(e.sup_grad, std::hypot(d[0], d[1]));
  }
  return e;
}

// Superlevel-set scan shared by the two set-quantified checkers.
template <class Visit>
void scan_superlevel(const ScalarField& gs, const ScalarField& weight, Visit&& visit) {
  const auto v = gs.raw();
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  if (!(hi > lo)) return;
  const auto& grid = gs.grid();
  std::vector<std::uint8_t> in(grid.size());
  for (int s = 0; s < kLambdaSamples; ++s) {
    const double lambda = lo + (hi - lo) * s / kLambdaSamples;
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      in[k] = v[k] > lambda ? 1 : 0;
      if (in[k]) sum += weight.raw()[k];
    }
    SupportMask mask(grid, in);
    if (mask.empty() || mask.full()) continue;
    if (visit(lambda, grid.cell_volume() * sum, mask)) return;
  }
}

}  // namespace

Forcing::Forcing(int dimension, double a0, std::vector<FourierMode> modes)
    : dimension_(dimension), a0_(a0), modes_(std::move(modes)) {
  if (dimension != 1 && dimension != 2) throw ContractError("unsupported dimension " + std::to_string(dimension));
  if (!std::isfinite(a0)) throw ContractError("forcing mean is not finite");
  for (auto& m : modes_) {
    if (dimension == 1 && m.k[1] != 0) throw ContractError("mode wave vector has wrong dimension");
    if (m.k[0] == 0 && m.k[1] == 0) throw ContractError("mode wave vector must be nonzero");
    if (!std::isfinite(m.cos_coeff) || !std::isfinite(m.sin_coeff)) throw ContractError("mode coefficient not finite");
  }
}

bool Forcing::is_constant() const {
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const FourierMode& m) { return m.cos_coeff == 0.0 && m.sin_coeff == 0.0; });
}

double Forcing::value(std::array<double, 2> y) const {
  double v = a0_;
  for (const auto& m : modes_) {
    const double phase = kTwoPi * (m.k[0] * y[0] + m.k[1] * y[1]);
    v += m.cos_coeff * std::cos(phase) + m.sin_coeff * std::sin(phase);
  }
  return v;
}

std::array<double, 2> Forcing::gradient(std::array<double, 2> y) const {
  std::array<double, 2> d{0.0, 0.0};
  for (const auto& m : modes_) {
    const double phase = kTwoPi * (m.k[0] * y[0] + m.k[1] * y[1]);
    const double s = kTwoPi * (-m.cos_coeff * std::sin(phase) + m.sin_coeff * std::cos(phase));
    d[0] += s * m.k[0];
    d[1] += s * m.k[1];
  }
  return d;
}

ScalarField sample(const Forcing& g, const PeriodicGrid& grid) {
  if (g.dimension() != grid.dimension()) throw ContractError("forcing and grid dimensions differ");
  return ScalarField::from_function(grid, [&](std::array<double, 2> y) { return g.value(y); });
}

ForcingStats stats(const Forcing& g, const PeriodicGrid& grid) {
  if (g.dimension() != grid.dimension()) throw ContractError("forcing and grid dimensions differ");
  int n = grid.resolution();
  Extremes cur = sampled_extremes(g, grid);
  const int cap = std::max(n, max_refined_resolution(g.dimension()));
  while (2 * n <= cap) {
    const Extremes next = sampled_extremes(g, PeriodicGrid(g.dimension(), 2 * n));
    n *= 2;
    const double change = std::max({std::abs(next.min - cur.min), std::abs(next.max - cur.max),
                                    std::abs(next.sup_grad - cur.sup_grad)});
    cur = next;
    if (change < 1e-6) break;
  }
  return {g.mean(), cur.min, cur.max, cur.max - cur.min, cur.sup_grad, n};
}

IsoperimetricConstant isoperimetric_constant(int dimension) {
  if (dimension == 1) return {1, 2.0};
  if (dimension == 2) return {2, 2.0 * std::numbers::sqrt2};
  throw ContractError("unsupported dimension " + std::to_string(dimension));
}

std::optional<GConditionWitness> check_gcondition(const Forcing& g, const PeriodicGrid& grid) {
  const ScalarField gs = sample(g, grid);
  const double total = integrate(gs);
  if (total > 0.0) {
    SupportMask all(grid, std::vector<std::uint8_t>(grid.size(), 1));
    return GConditionWitness{all, total, 0.0, std::numeric_limits<double>::quiet_NaN(), true};
  }
  std::optional<GConditionWitness> found;
  scan_superlevel(gs, gs, [&](double lambda, double integral, const SupportMask& mask) {
    const double per = perimeter_indicator(mask);
    if (integral > per) {
      found = GConditionWitness{mask, integral, per, lambda, false};
      return true;
    }
    return false;
  });
  return found;
}

ClassicalReport check_classical_conditions(const Forcing& g, const PeriodicGrid& grid,
                                           const IsoperimetricConstant& c) {
  if (c.dimension != g.dimension()) throw ContractError("isoperimetric constant has wrong dimension");
  const ForcingStats s = stats(g, grid);
  const int n = g.dimension();
  ClassicalReport r{};
  r.hypothesis_violated = !(s.mean > 0.0);
  r.min_g = s.min;
  r.max_g = s.max;
  r.oscillation = s.oscillation;
  r.c_n = c.value;
  r.threshold = c.value * std::pow(2.0, 1.0 / n);
  const double excess = std::pow(s.max / c.value, n) - 1.0;
  r.branch3_bound = excess > 0.0 ? s.max / excess : std::numeric_limits<double>::infinity();
  const bool positive = s.min > 0.0;
  r.branch[0] = s.min <= 0.0 && s.oscillation < r.threshold;
  r.branch[1] = positive && s.max < r.threshold;
  r.branch[2] = positive && s.max >= r.threshold && s.oscillation < r.branch3_bound;
  r.branch[3] = n == 1 && positive;
  return r;
}

LSReport check_ls_condition(const Forcing& g, const PeriodicGrid& grid) {
  if (g.dimension() != grid.dimension()) throw ContractError("forcing and grid dimensions differ");
  const int n = g.dimension();
  const double w = static_cast<double>((n - 1) * (n - 1));
  std::vector<double> g2(grid.size()), dg(grid.size());
  bool all_pos = true, all_neg = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto y = grid.position(k);
    const double v = g.value(y);
    const auto d = g.gradient(y);
    all_pos = all_pos && v > 0.0;
    all_neg = all_neg && v < 0.0;
    g2[k] = v * v;
    dg[k] = w * std::hypot(d[0], d[1]);
  }
  LSReport r{false, all_pos || all_neg, std::numeric_limits<double>::quiet_NaN(),
             -std::numeric_limits<double>::infinity()};
  for (int i = 1; i <= 99; ++i) {
    const double theta = i / 100.0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) m = std::min(m, theta * g2[k] - dg[k]);
    r.best_margin = std::max(r.best_margin, m);
    if (r.constant_sign && m > 0.0 && !r.holds) {
      r.holds = true;
      r.theta = theta;
    }
  }
  return r;
}

CLSReport check_cls_condition(const Forcing& g) {
  if (g.dimension() != 1) throw ContractError("the CLS condition is defined for dimension 1 only");
  const ForcingStats s = stats(g, PeriodicGrid(1, 256));
  const double v = s.mean - s.min;
  return {v >= 0.0 && v < 2.0, v};
}

StationaryReport check_stationary_condition(const Forcing& g, const PeriodicGrid& grid) {
  if (!(std::abs(g.mean()) < 1e-10)) throw ContractError("stationary condition requires a zero-mean forcing");
  const ScalarField gs = sample(g, grid);
  std::vector<double> neg(gs.raw().begin(), gs.raw().end());
  for (double& x : neg) x = -x;
  const ScalarField ms(grid, std::move(neg));
  double best = 0.0;
  auto visit = [&](double, double integral, const SupportMask& mask) {
    best = std::max(best, integral / perimeter_indicator(mask));
    return false;
  };
  scan_superlevel(gs, gs, visit);  // {g > lambda}
  scan_superlevel(ms, gs, visit);  // {-g > lambda}, integral still of g
  return {best < 1.0, best, true};
}

ConditionReport check_all(const Forcing& g, const PeriodicGrid& grid) {
  ConditionReport r{check_gcondition(g, grid),
                    check_classical_conditions(g, grid, isoperimetric_constant(g.dimension())),
                    check_ls_condition(g, grid),
                    std::nullopt,
                    std::nullopt};
  if (g.dimension() == 1) r.cls = check_cls_condition(g);
  if (std::abs(g.mean()) < 1e-10) r.stationary = check_stationary_condition(g, grid);
  return r;
}

}  // namespace fmcf
