#pragma once

// Periodic forcing g given by a finite Fourier sum, and the checkers for the
// hypotheses on g that the existence theory relies on.

#include <array>
#include <optional>
#include <vector>

#include "fmcf/torus_grid.hpp"

namespace fmcf {

struct FourierMode {
  std::array<int, 2> k{0, 0};  // wave vector, unused axis 0
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// g(y) = a0 + sum_m [cos_m cos(2 pi k_m . y) + sin_m sin(2 pi k_m . y)].
class Forcing {
 public:
  Forcing(int dimension, double a0, std::vector<FourierMode> modes = {});

  static Forcing constant(int dimension, double a) { return Forcing(dimension, a); }

  int dimension() const { return dimension_; }
  double mean() const { return a0_; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  bool is_constant() const;

  double value(std::array<double, 2> y) const;
  double value(double y) const { return value({y, 0.0}); }
  std::array<double, 2> gradient(std::array<double, 2> y) const;

 private:
  int dimension_;
  double a0_;
  std::vector<FourierMode> modes_;
};

ScalarField sample(const Forcing& g, const PeriodicGrid& grid);

struct ForcingStats {
  double mean;
  double min;
  double max;
  double oscillation;
  double sup_grad;
  int resolution_used;  // finest N reached by the refinement loop
};

/// Mean is exact; extrema and sup|Dg| are sampled starting from grid's N and
/// doubling until every quantity changes by less than 1e-6.
ForcingStats stats(const Forcing& g, const PeriodicGrid& grid);

struct IsoperimetricConstant {
  int dimension;
  double value;
};

/// C_1 = 2. C_2 = 2 sqrt(2): on the torus with |E| <= 1/2, a straight strip of
/// area 1/2 (Per = 2) gives Per/|E|^(1/2) = 2 sqrt 2, which beats every disc
/// (2 sqrt(pi) ~ 3.545, independent of the area).
IsoperimetricConstant isoperimetric_constant(int dimension);

struct GConditionWitness {
  SupportMask set;
  double integral;   // discrete integral of g over the set
  double perimeter;  // perimeter_indicator of the set
  double lambda;     // superlevel threshold, NaN for the whole torus
  bool whole_torus;
};

/// Searches Q and the superlevel sets {g > lambda}, lambda on 201 equally spaced
/// values in [min g, max g), for a set with integral(g) > Per. Returns the first
/// hit or nothing. Nothing means "no witness in this family".
std::optional<GConditionWitness> check_gcondition(const Forcing& g, const PeriodicGrid& grid);

struct ClassicalReport {
  bool hypothesis_violated;  // mean(g) <= 0
  std::array<bool, 4> branch;
  double min_g, max_g, oscillation;
  double c_n;
  double threshold;       // C_n 2^(1/n)
  double branch3_bound;   // max g / ((max g / C_n)^n - 1), +inf when undefined
  bool verdict() const { return !hypothesis_violated && (branch[0] || branch[1] || branch[2] || branch[3]); }
};

ClassicalReport check_classical_conditions(const Forcing& g, const PeriodicGrid& grid, const IsoperimetricConstant& c);

struct LSReport {
  bool holds;
  bool constant_sign;
  double theta;        // first theta that works, NaN if none
  double best_margin;  // max over theta of min over nodes
};

LSReport check_ls_condition(const Forcing& g, const PeriodicGrid& grid);

struct CLSReport {
  bool holds;
  double value;  // mean(g) - min g
};

/// Dimension 1 only.
CLSReport check_cls_condition(const Forcing& g);

struct StationaryReport {
  bool plausible;
  double best_ratio;  // sup over the family of integral(g) / Per
  bool family_restricted = true;
};

/// Requires |mean(g)| < 1e-10. Scans superlevel sets of g and of -g.
StationaryReport check_stationary_condition(const Forcing& g, const PeriodicGrid& grid);

struct ConditionReport {
  std::optional<GConditionWitness> gcondition;
  ClassicalReport classical;
  LSReport ls;
  std::optional<CLSReport> cls;                // n = 1 only
  std::optional<StationaryReport> stationary;  // zero-mean forcings only
};

ConditionReport check_all(const Forcing& g, const PeriodicGrid& grid);

}  // namespace fmcf
