#include <doctest.h>

#include <cmath>

#include "fmcf/errors.hpp"
#include "fmcf/shooting_oracle.hpp"

using namespace fmcf;

namespace {
Forcing cos1d(double a0, double amp) { return Forcing(1, a0, {{{1, 0}, amp, 0.0}}); }
}  // namespace

TEST_CASE("constant forcing trajectory is flat") {
  const auto t = integrate_q(1.3, 0.0, Forcing::constant(1, 1.3), 1000);
  CHECK_FALSE(t.saturated);
  CHECK(t.q_end == 0.0);
  CHECK(t.psi_end == 0.0);
  for (double q : t.q) CHECK(q == 0.0);
}

TEST_CASE("off-root start is not periodic") {
  const auto t = integrate_q(1.0, 0.1, Forcing::constant(1, 1.0), 1000);
  CHECK_FALSE(t.saturated);
  CHECK(std::abs(t.q_end - 0.1) > 1e-3);
}

TEST_CASE("too fast a speed drifts away") {
  const auto t = integrate_q(2.0, 0.0, cos1d(1.0, 0.5), 4096);
  CHECK((t.saturated || std::abs(t.q_end) > 1e-2 || std::abs(t.psi_end) > 1e-2));
}

TEST_CASE("integration contract") {
  const auto g = Forcing::constant(1, 1.0);
  CHECK_THROWS_AS(integrate_q(1.0, 1.0, g, 1000), ContractError);
  CHECK_THROWS_AS(integrate_q(1.0, 0.0, g, 999), ContractError);
}

TEST_CASE("constant forcing root is exact") {
  const auto r = solve_classical_wave_1d(Forcing::constant(1, 0.8));
  REQUIRE(r.status == OracleStatus::converged);
  CHECK(r.c == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(std::abs(r.q0) <= 1e-13);
  CHECK(std::abs(r.residual_periodicity) <= 1e-13);
  CHECK(std::abs(r.residual_mean_slope) <= 1e-13);
  const auto psi = oracle_profile(r, PeriodicGrid(1, 32));
  for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(psi[i]) <= 1e-12);
}

TEST_CASE("classical wave for a positive forcing") {
  const auto r = solve_classical_wave_1d(cos1d(1.0, 0.5));
  REQUIRE(r.status == OracleStatus::converged);
  CHECK(r.c >= 1.0);
  CHECK(r.c <= 1.5);
  CHECK(std::abs(r.residual_periodicity) <= 1e-10);
  CHECK(std::abs(r.residual_mean_slope) <= 1e-10);
}

TEST_CASE("step halving changes the speed by at most 1e-8") {
  const auto a = solve_classical_wave_1d(cos1d(1.0, 0.5), 1e-12, 4096);
  const auto b = solve_classical_wave_1d(cos1d(1.0, 0.5), 1e-12, 8192);
  REQUIRE(a.status == OracleStatus::converged);
  REQUIRE(b.status == OracleStatus::converged);
  CHECK(std::abs(a.c - b.c) <= 1e-8);
}

TEST_CASE("even forcing gives an odd slope") {
  // cos(2 pi y) is even about y = 1/2.
  const auto r = solve_classical_wave_1d(cos1d(1.0, 0.5));
  REQUIRE(r.status == OracleStatus::converged);
  const auto& q = r.trajectory.q;
  const std::size_t n = q.size() - 1;
  double worst = 0.0;
  for (std::size_t k = 0; k <= n; ++k) worst = std::max(worst, std::abs(q[k] + q[n - k]));
  CHECK(worst <= 1e-8);
}

TEST_CASE("large oscillation saturates the slope") {
  const auto r = solve_classical_wave_1d(cos1d(0.5, 8.0));
  CHECK(r.status == OracleStatus::slope_saturation);
  CHECK(to_string(r.status) == "slope_saturation");
}
