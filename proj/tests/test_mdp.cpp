#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "relayline/mdp.hpp"

using namespace relayline;

namespace {

MdpConfig coarse_config(double Lambda, double xi) {
  MdpConfig cfg;
  cfg.Lambda = Lambda;
  cfg.xi = xi;
  cfg.state_step = 0.05;
  cfg.action_step = 0.005;
  return cfg;
}

// Composite Simpson quadrature of the expected stage cost: the walking
// integral integrated numerically instead of in closed form.
double stage_cost_quadrature(double s, double a, const MdpConfig& cfg,
                             const std::vector<double>& J) {
  const int n = 20000;  // even
  double integral = 0.0;
  if (a > 0.0) {
    const double h = a / n;
    auto f = [&](double z) {
      return std::exp(-z) * s * std::expm1(cfg.Lambda * z);
    };
    double acc = f(0.0) + f(a);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    integral = acc * h / 3.0;
  }
  const double tail =
      std::exp(-a) * (s * std::expm1(cfg.Lambda * a) + cfg.xi +
                      J[transition_index(s, a, cfg)]);
  return integral + tail;
}

}  // namespace

TEST_CASE("config validation rejects bad grids and parameters") {
  MdpConfig ok;
  ok.Lambda = 0.5;
  ok.xi = 0.01;
  CHECK_NOTHROW(ok.validate());

  MdpConfig bad = ok;
  bad.state_step = 0.03;  // 1/0.03 is not an integer
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.state_step = 0.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.Lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.xi = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.action_step = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.iter_cap = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("the state grid covers (0,1] with an exact top") {
  MdpConfig cfg;  // default state_step 0.01
  CHECK(cfg.state_count() == 100);
  CHECK(cfg.grid_state(0) == 0.01);
  CHECK(cfg.grid_state(33) == 0.34);
  CHECK(cfg.grid_state(49) == 0.5);
  CHECK(cfg.grid_state(99) == 1.0);
  CHECK_THROWS_AS(cfg.grid_state(-1), std::out_of_range);
  CHECK_THROWS_AS(cfg.grid_state(100), std::out_of_range);
}

TEST_CASE("the action cap defaults to max(25, 5/Lambda)") {
  MdpConfig cfg;
  cfg.Lambda = 0.1;
  CHECK(cfg.resolved_a_max() == 50.0);
  cfg.Lambda = 5.0;
  CHECK(cfg.resolved_a_max() == 25.0);
  cfg.a_max = 7.0;
  CHECK(cfg.resolved_a_max() == 7.0);
}

TEST_CASE("normalization divides the decay rate by the length rate") {
  const auto cfg = MdpConfig::normalized(2.0, 4.0);
  CHECK(cfg.Lambda == 0.5);
  CHECK_THROWS_AS(MdpConfig::normalized(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("transitions round the next state up to the grid") {
  MdpConfig cfg;
  cfg.Lambda = 0.01;
  cfg.xi = 0.001;
  // Walking nothing from a fresh relay halves the state exactly.
  CHECK(transition_index(1.0, 0.0, cfg) == 49);
  // 0.5 -> 1/3, rounded up to 0.34.
  CHECK(transition_index(0.5, 0.0, cfg) == 33);
  // 0.34 after a walk of 8.418 lands just below 0.27.
  CHECK(transition_index(0.34, 8.418, cfg) == 26);
  // Tiny states self-loop under a = 0 because of the ceiling.
  CHECK(transition_index(0.01, 0.0, cfg) == 0);

  MdpConfig fast;
  fast.Lambda = 0.5;
  CHECK(transition_index(1.0, 25.0, fast) == 99);  // saturates at s' ~ 1

  CHECK_THROWS_AS(transition_index(0.0, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(transition_index(1.5, 1.0, cfg), std::invalid_argument);
  CHECK_THROWS_AS(transition_index(0.5, -0.1, cfg), std::invalid_argument);
}

TEST_CASE("closed-form stage cost matches quadrature") {
  for (double Lambda : {0.3, 1.0, 2.0}) {
    MdpConfig cfg = coarse_config(Lambda, 0.02);
    std::vector<double> J(cfg.state_count());
    for (int i = 0; i < cfg.state_count(); ++i) J[i] = 0.02 * i;
    for (double s : {0.2, 1.0}) {
      for (double a : {0.0, 0.7, 3.0}) {
        CAPTURE(Lambda);
        CAPTURE(s);
        CAPTURE(a);
        CHECK(stage_cost_expectation(s, a, cfg, J) ==
              doctest::Approx(stage_cost_quadrature(s, a, cfg, J))
                  .epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("the stage cost is continuous across Lambda = 1") {
  std::vector<double> J(20);
  for (int i = 0; i < 20; ++i) J[i] = 0.02 * i;
  MdpConfig at = coarse_config(1.0, 0.02);
  MdpConfig below = coarse_config(1.0 - 1e-9, 0.02);
  MdpConfig above = coarse_config(1.0 + 1e-9, 0.02);
  const double c0 = stage_cost_expectation(0.3, 0.7, at, J);
  CHECK(std::abs(stage_cost_expectation(0.3, 0.7, below, J) - c0) < 1e-6);
  CHECK(std::abs(stage_cost_expectation(0.3, 0.7, above, J) - c0) < 1e-6);
}

TEST_CASE("both backup forms agree below the critical decay rate") {
  MdpConfig cfg = coarse_config(0.5, 0.05);
  cfg.action_step = 0.01;
  std::vector<double> J(cfg.state_count(), 0.0);
  for (int sweep = 0; sweep < 3; ++sweep) J = bellman_backup(J, cfg);
  const auto a = bellman_backup(J, cfg, nullptr, nullptr, BackupForm::Integral);
  const auto b = bellman_backup(J, cfg, nullptr, nullptr, BackupForm::Theta);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
  // The theta form is undefined at or above the critical rate.
  MdpConfig super = coarse_config(2.0, 0.05);
  std::vector<double> J2(super.state_count(), 0.0);
  CHECK_THROWS_AS(
      bellman_backup(J2, super, nullptr, nullptr, BackupForm::Theta),
      std::invalid_argument);
}

TEST_CASE("backups match a direct scan of the stage cost") {
  MdpConfig cfg = coarse_config(0.7, 0.03);
  cfg.action_step = 0.01;
  std::vector<double> J(cfg.state_count());
  for (int i = 0; i < cfg.state_count(); ++i) J[i] = 0.01 * i;
  std::vector<double> policy;
  const auto out = bellman_backup(J, cfg, &policy);

  const int na = static_cast<int>(cfg.resolved_a_max() / cfg.action_step +
                                  1e-9) + 1;
  const double theta = cfg.Lambda / (1.0 - cfg.Lambda);
  for (int i : {0, 7, 19}) {
    const double s = cfg.grid_state(i);
    double best = 1e300;
    double best_a = 0.0;
    for (int j = 0; j < na; ++j) {
      const double a = j * cfg.action_step;
      const double c = stage_cost_expectation(s, a, cfg, J);
      if (c < best) {
        best = c;
        best_a = a;
      }
    }
    bool stopped = false;
    if (theta * s < best) {
      best = theta * s;
      stopped = true;
    }
    CHECK(out[i] == doctest::Approx(best).epsilon(1e-12));
    if (!stopped)
      CHECK(std::abs(policy[i] - best_a) <= cfg.action_step + 1e-12);
  }
}

TEST_CASE("value iteration solves a subcritical instance") {
  MdpConfig cfg = coarse_config(0.5, 0.05);
  const auto sol = solve_mdp(cfg);
  REQUIRE(sol.J.size() == static_cast<std::size_t>(cfg.state_count()));
  CHECK(sol.converged);
  CHECK(sol.monotone_iterates);
  CHECK(sol.final_sup_diff < cfg.tol);
  REQUIRE(sol.theta.has_value());
  CHECK(*sol.theta == 1.0);  // 0.5 / (1 - 0.5)

  const double a_cap = cfg.resolved_a_max();
  for (std::size_t i = 0; i < sol.J.size(); ++i) {
    CHECK(sol.J[i] > 0.0);
    // Stopping forever is always available, so J never exceeds theta * s.
    CHECK(sol.J[i] <= *sol.theta * sol.states[i] * (1.0 + 1e-12));
    CHECK(sol.policy[i] >= 0.0);
    CHECK(sol.policy[i] <= a_cap + 1e-12);
    if (i > 0) CHECK(sol.J[i] >= sol.J[i - 1] - 1e-12);
  }

  // Solved values are a fixed point of the backup operator.
  const auto again = bellman_backup(sol.J, cfg);
  for (std::size_t i = 0; i < again.size(); ++i)
    CHECK(std::abs(again[i] - sol.J[i]) <= 1e-8);
}

TEST_CASE("value iteration solves critical and supercritical instances") {
  for (double Lambda : {1.0, 2.0}) {
    MdpConfig cfg = coarse_config(Lambda, 0.05);
    const auto sol = solve_mdp(cfg);
    CAPTURE(Lambda);
    CHECK(sol.converged);
    CHECK(sol.monotone_iterates);
    CHECK_FALSE(sol.theta.has_value());
    // Relaying at unit spacing bounds the cost from above.
    const double bound = (cfg.xi + std::expm1(Lambda)) + std::expm1(Lambda);
    double max_slope = 0.0;
    for (std::size_t i = 0; i < sol.J.size(); ++i) {
      CHECK(sol.J[i] > 0.0);
      CHECK(sol.J[i] < bound);
      if (i > 0) {
        CHECK(sol.J[i] >= sol.J[i - 1] - 1e-12);
        max_slope = std::max(
            max_slope, (sol.J[i] - sol.J[i - 1]) / cfg.state_step);
      }
    }
    CHECK(max_slope < 1e4);
    // Walk distances shrink as the state grows, but the coarse state grid
    // quantizes destinations: shifting the ceil-rounded destination by one
    // cell costs Delta-a = state_step / (Lambda * s'(1-s')), which for
    // mid-range destinations (s'(1-s') >= 0.2) is 0.25/Lambda.
    for (std::size_t i = 0; i + 1 < sol.policy.size(); ++i)
      CHECK(sol.policy[i + 1] <= sol.policy[i] + 0.25 / Lambda);
  }
}

TEST_CASE("the iteration cap reports non-convergence honestly") {
  MdpConfig cfg = coarse_config(0.5, 0.05);
  cfg.iter_cap = 2;
  const auto sol = solve_mdp(cfg);
  CHECK(sol.iterations == 2);
  CHECK_FALSE(sol.converged);
}
