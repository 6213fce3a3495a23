#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fmcf/errors.hpp"
#include "fmcf/forcing.hpp"

using namespace fmcf;

namespace {
constexpr double kPi = std::numbers::pi;

Forcing cos1d(double a0, double amp) { return Forcing(1, a0, {{{1, 0}, amp, 0.0}}); }
}  // namespace

TEST_CASE("sampling") {
  const PeriodicGrid g4(1, 4);
  const auto one = sample(Forcing::constant(1, 1.0), g4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(one[i] == 1.0);
  const auto c = sample(cos1d(0.0, 1.0), g4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(std::abs(c[1]) < 1e-15);
  CHECK(c[2] == doctest::Approx(-1.0));
  CHECK(std::abs(c[3]) < 1e-15);
  const PeriodicGrid g(1, 64);
  CHECK(std::abs(integrate(sample(cos1d(0.5, 3.0), g)) - 0.5) < 1e-12);
}

TEST_CASE("forcing statistics") {
  const PeriodicGrid g(1, 64);
  auto s = stats(cos1d(1.0, 0.5), g);
  CHECK(s.mean == 1.0);
  CHECK(s.min == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(s.max == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(s.oscillation == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s.sup_grad == doctest::Approx(kPi).epsilon(1e-5));

  s = stats(Forcing::constant(1, 2.5), g);
  CHECK(s.min == 2.5);
  CHECK(s.max == 2.5);
  CHECK(s.oscillation == 0.0);
  CHECK(s.sup_grad == 0.0);

  s = stats(cos1d(0.5, 3.0), g);
  CHECK(s.min == doctest::Approx(-2.5).epsilon(1e-6));
  CHECK(s.max == doctest::Approx(3.5).epsilon(1e-6));
  CHECK(s.oscillation == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(s.sup_grad == doctest::Approx(6 * kPi).epsilon(1e-5));
}

TEST_CASE("isoperimetric constants") {
  CHECK(isoperimetric_constant(1).value == 2.0);
  CHECK(isoperimetric_constant(2).value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(isoperimetric_constant(3), ContractError);
}

TEST_CASE("gcondition witness search") {
  const PeriodicGrid g(1, 512);
  auto w = check_gcondition(Forcing::constant(1, 1.0), g);
  REQUIRE(w);
  CHECK(w->whole_torus);
  CHECK(w->perimeter == 0.0);
  CHECK(w->integral == doctest::Approx(1.0));

  CHECK_FALSE(check_gcondition(cos1d(0.0, 1.0), g).has_value());

  w = check_gcondition(cos1d(0.5, 3.0), g);
  REQUIRE(w);
  CHECK(w->whole_torus);
  CHECK(w->integral == doctest::Approx(0.5).epsilon(1e-12));

  // Zero mean but a tall bump: the superlevel set beats its two jumps.
  w = check_gcondition(cos1d(0.0, 8.0), g);
  REQUIRE(w);
  CHECK_FALSE(w->whole_torus);
  CHECK(w->integral > w->perimeter);
}

TEST_CASE("classical branch table") {
  const PeriodicGrid g(1, 512);
  const auto c1 = isoperimetric_constant(1);

  auto r = check_classical_conditions(cos1d(1.0, 0.5), g, c1);
  CHECK(r.branch[3]);
  CHECK(r.verdict());

  r = check_classical_conditions(cos1d(0.3, 1.0), g, c1);
  CHECK(r.branch[0]);
  CHECK(r.min_g == doctest::Approx(-0.7).epsilon(1e-6));
  CHECK(r.threshold == 4.0);
  CHECK_FALSE(r.branch[3]);

  r = check_classical_conditions(cos1d(0.5, 3.0), g, c1);
  for (bool b : r.branch) CHECK_FALSE(b);
  CHECK_FALSE(r.verdict());

  r = check_classical_conditions(cos1d(-0.5, 0.2), g, c1);
  CHECK(r.hypothesis_violated);
  CHECK_FALSE(r.verdict());
}

TEST_CASE("branch four follows the sign of the sampled minimum") {
  const auto c1 = isoperimetric_constant(1);
  for (double a0 : {0.99, 1.0, 1.01}) {
    const PeriodicGrid g(1, 64);
    const auto r = check_classical_conditions(cos1d(a0, 1.0), g, c1);
    CHECK(r.branch[3] == (r.min_g > 0.0));
  }
}

TEST_CASE("LS condition") {
  const PeriodicGrid g1(1, 128);
  CHECK(check_ls_condition(cos1d(1.0, 0.5), g1).holds);
  const PeriodicGrid g2(2, 64);
  const auto r = check_ls_condition(Forcing::constant(2, 1.0), g2);
  CHECK(r.holds);
  CHECK(r.theta == doctest::Approx(0.01));
  CHECK_FALSE(check_ls_condition(Forcing(2, 0.1, {{{1, 0}, 0.05, 0.0}}), g2).holds);
}

TEST_CASE("CLS condition") {
  CHECK(check_cls_condition(cos1d(1.0, 0.5)).holds);
  CHECK(check_cls_condition(cos1d(1.0, 0.5)).value == doctest::Approx(0.5));
  CHECK_FALSE(check_cls_condition(cos1d(0.5, 3.0)).holds);
  CHECK(check_cls_condition(Forcing::constant(1, 2.0)).holds);
}

TEST_CASE("stationary condition") {
  const PeriodicGrid g(1, 512);
  auto r = check_stationary_condition(cos1d(0.0, 0.1), g);
  CHECK(r.plausible);
  CHECK(r.best_ratio <= 1.0 / (10.0 * kPi) + 1e-3);
  // Amplitude 4 gives best ratio 2/pi, still plausible; amplitude 8 gives 4/pi.
  CHECK(check_stationary_condition(cos1d(0.0, 4.0), g).plausible);
  r = check_stationary_condition(cos1d(0.0, 8.0), g);
  CHECK_FALSE(r.plausible);
  CHECK(r.best_ratio == doctest::Approx(4.0 / kPi).epsilon(1e-3));
  CHECK(check_stationary_condition(Forcing::constant(1, 0.0), g).plausible);
  CHECK_THROWS_AS(check_stationary_condition(cos1d(0.1, 1.0), g), ContractError);
}

TEST_CASE("checkers are deterministic") {
  const PeriodicGrid g(1, 256);
  const auto f = cos1d(0.3, 1.0);
  const auto a = check_all(f, g);
  const auto b = check_all(f, g);
  CHECK(a.classical.branch == b.classical.branch);
  CHECK(a.ls.best_margin == b.ls.best_margin);
  CHECK(a.gcondition.has_value() == b.gcondition.has_value());
  CHECK_FALSE(a.stationary.has_value());
  CHECK(a.cls.has_value());
}
