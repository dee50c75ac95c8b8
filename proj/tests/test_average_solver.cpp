#include <doctest.h>

#include <cmath>
#include <random>

#include "rsac/average_solver.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace rsac;
using testutil::two_state;

TEST_CASE("constant cost solves trivially") {
  CtmdpModel m;
  m.states = {"s0", "s1"};
  m.actions = {{"a", "b"}, {"a"}};
  m.rates = {{{-1.0, 1.0}, {-2.0, 2.0}}, {{1.5, -1.5}}};
  m.costs = {{0.7, 0.7}, {0.7}};
  m.lambda = 1.0;

  const auto report = solve(m, 0);
  CHECK(report.g_star == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(report.h_star[0] == 0.0);
  CHECK(report.h_star[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(report.residual_op <= 1e-10);
}

TEST_CASE("closed-form golden-ratio instance") {
  const auto report = solve(two_state(1, 1, 0, 1), 0);
  CHECK(std::abs(report.g_star - testutil::golden_ratio_rate()) <= 1e-9);
  CHECK(report.residual_hz <= 1e-8);
  CHECK(report.residual_op <= 1e-8);
}

TEST_CASE("tiny lambda recovers the risk-neutral average") {
  auto m = two_state(1, 1, 0, 1);
  m.lambda = 1e-4;
  const auto report = solve(m, 0);
  CHECK(std::abs(report.g_star - 0.5) <= 1e-3);
}

TEST_CASE("single-state model solves in closed form") {
  CtmdpModel m;
  m.states = {"only"};
  m.actions = {{"cheap", "dear"}};
  m.rates = {{{0.0}, {0.0}}};
  m.costs = {{0.4, 0.9}};
  m.lambda = 2.0;
  const auto report = solve(m, 0);
  CHECK(report.g_star == 0.4);
  CHECK(report.policy.choice[0] == 0);
  CHECK(report.h_star == std::vector<double>{0.0});
}

TEST_CASE("extract_policy: argmin and residual") {
  // two actions identical except cost 0.5 vs 0.6 -> cheaper one wins
  CtmdpModel m;
  m.states = {"s0", "s1"};
  m.actions = {{"cheap", "dear"}, {"a"}};
  m.rates = {{{-1.0, 1.0}, {-1.0, 1.0}}, {{1.0, -1.0}}};
  m.costs = {{0.5, 0.6}, {0.2}};
  m.lambda = 1.0;
  const auto [f, residual] = extract_policy(m, 0.3, {0.0, 0.1});
  CHECK(f.choice[0] == 0);

  // solver output fed back in is self-consistent
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testutil::random_model(rng);
    const auto report = solve(inst, 0);
    const auto [fp, res] = extract_policy(inst, report.g_star, report.h_star);
    CHECK(res <= 1e-8);
    CHECK(fp.choice == report.policy.choice);
  }
}

TEST_CASE("spectral value: constant cost and closed form") {
  CtmdpModel m = two_state(1.3, 0.6, 0.7, 0.7, 2.0);
  CHECK(policy_value_spectral(m, DetPolicy{{0, 0}}).value ==
        doctest::Approx(0.7).epsilon(1e-10));

  const auto gold = two_state(1, 1, 0, 1);
  CHECK(policy_value_spectral(gold, DetPolicy{{0, 0}}).value ==
        doctest::Approx(testutil::golden_ratio_rate()).epsilon(1e-10));
}

TEST_CASE("spectral value of f* reproduces g_star") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testutil::random_model(rng);
    const auto report = solve(m, 0);
    const auto eval = policy_value_spectral(m, report.policy);
    CHECK(std::abs(eval.value - report.g_star) <= 1e-8);
  }
}

TEST_CASE("spectral value rejects non-irreducible policies") {
  auto m = two_state(1, 1, 0, 0);
  m.rates[1][0] = {0.0, 0.0};
  m.rates[1].push_back({1.0, -1.0});
  m.actions[1].push_back("b");
  m.costs[1].push_back(0.0);
  CHECK_THROWS_WITH((void)policy_value_spectral(m, DetPolicy{{0, 0}}),
                    "policy not irreducible");
}

TEST_CASE("risk-neutral value via the stationary distribution") {
  CHECK(policy_value_risk_neutral(two_state(1, 1, 0, 1), DetPolicy{{0, 0}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(policy_value_risk_neutral(two_state(0.5, 2, 0.3, 0.3), DetPolicy{{0, 0}}) ==
        doctest::Approx(0.3).epsilon(1e-12));
  // balance: pi(0) * 1 = pi(1) * 3 -> pi = (0.75, 0.25)
  CHECK(policy_value_risk_neutral(two_state(1, 3, 0, 1), DetPolicy{{0, 0}}) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("brute force: dominated actions never win") {
  CtmdpModel m;
  m.states = {"s0", "s1"};
  m.actions = {{"good", "bad"}, {"a"}};
  m.rates = {{{-1.0, 1.0}, {-1.0, 1.0}}, {{2.0, -2.0}}};
  m.costs = {{0.1, 0.9}, {0.5}};
  m.lambda = 1.0;
  const auto result = brute_force_optimal(m);
  CHECK(result.policy.choice[0] == 0);
  CHECK(result.policies_evaluated == 2);
}

TEST_CASE("brute force guard trips on huge policy spaces") {
  CtmdpModel m;
  const std::size_t n = 21;  // 2^21 > 1e6
  for (std::size_t i = 0; i < n; ++i) {
    m.states.push_back("s" + std::to_string(i));
    m.actions.push_back({"a", "b"});
    std::vector<double> row(n, 1.0 / double(n - 1));
    row[i] = -1.0;
    m.rates.push_back({row, row});
    m.costs.push_back({0.0, 0.0});
  }
  m.lambda = 1.0;
  CHECK_THROWS_WITH((void)brute_force_optimal(m), "policy space too large");
}

TEST_CASE("solve agrees with brute force on random instances") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    const auto m = testutil::random_model(rng);
    const auto report = solve(m, 0);
    const auto brute = brute_force_optimal(m);
    CHECK(std::abs(report.g_star - brute.value) <= 1e-6);
  }
}

TEST_CASE("shift equivariance of the solved rate") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testutil::random_model(rng);
    const auto base = solve(m, 0);
    auto shifted = m;
    for (auto& row : shifted.costs)
      for (auto& c : row) c += 0.3;
    const auto moved = solve(shifted, 0);
    CHECK(std::abs(moved.g_star - base.g_star - 0.3) <= 1e-8);
    CHECK(moved.policy.choice == base.policy.choice);
    for (std::size_t i = 0; i < m.num_states(); ++i)
      CHECK(std::abs(moved.h_star[i] - base.h_star[i]) <= 1e-8);
  }
}
