#include <doctest.h>

#include <cmath>
#include <random>

#include "rsac/extended.hpp"
#include "rsac/first_passage.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace rsac;
using testutil::two_state;

TEST_CASE("extended product honors 0 * inf = 0") {
  CHECK(ext_mul(0.0, kInf) == 0.0);
  CHECK(ext_mul(kInf, 0.0) == 0.0);
  CHECK(ext_mul(2.0, kInf) == kInf);
  CHECK(ext_mul(2.0, 3.0) == 6.0);
}

TEST_CASE("q_factor closed form") {
  // lambda=1, c=1, g=2, q(i|i)=-1 -> integral of e^{-2s} = 1/2
  auto m = two_state(1, 1, 1.0, 0.0);
  CHECK(q_factor(m, 0, 0, 2.0).value == doctest::Approx(0.5));
  CHECK(q_factor(m, 0, 0, 2.0).finite);

  // lambda=1, c=2, g=1, q(i|i)=-0.5 -> exponent 0.5 >= 0, divergent
  auto m2 = two_state(0.5, 1, 2.0, 0.0);
  const auto qf = q_factor(m2, 0, 0, 1.0);
  CHECK_FALSE(qf.finite);
  CHECK(qf.value == kInf);

  // lambda=2, c=0, g=0, q(i|i)=-4 -> 1/4
  auto m3 = two_state(4, 1, 0.0, 0.0, 2.0);
  CHECK(q_factor(m3, 0, 0, 0.0).value == doctest::Approx(0.25));
}

TEST_CASE("q_factor dichotomy property") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> gdist(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = testutil::random_model(rng);
    const double g = gdist(rng);
    for (std::size_t i = 0; i < m.num_states(); ++i)
      for (std::size_t a = 0; a < m.num_actions(i); ++a) {
        const auto qf = q_factor(m, i, a, g);
        const double exponent =
            m.lambda * (m.costs[i][a] - g) + m.rates[i][a][i];
        if (exponent < 0.0) {
          CHECK(qf.finite);
          CHECK(qf.value > 0.0);
          CHECK(qf.value == doctest::Approx(-1.0 / exponent));
        } else {
          CHECK_FALSE(qf.finite);
        }
      }
  }
}

TEST_CASE("first passage: zero integrand gives h = 0") {
  const auto m = two_state(1, 1, 0, 0);
  const auto sol = first_passage_value(m, DetPolicy{{0, 0}}, 0.0, 0);
  REQUIRE(sol.finite);
  CHECK(sol.h[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.h[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("first passage: Exp MGF instance gives ln 2") {
  // From state 1 the passage to z=0 is one Exp(2) holding time with cost
  // rate 1, so E e^{tau} = 2/(2-1) = 2.
  const auto m = two_state(1, 2, 0, 1);
  const auto sol = first_passage_value(m, DetPolicy{{0, 0}}, 0.0, 0);
  REQUIRE(sol.finite);
  CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.x[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.h[1] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("first passage: divergent coordinate is flagged") {
  // rate (1->0) = 1 makes the state-1 exponent 1 - 1 = 0, so Q = inf.
  const auto m = two_state(1, 1, 0, 1);
  const auto sol = first_passage_value(m, DetPolicy{{0, 0}}, 0.0, 0);
  CHECK_FALSE(sol.finite);
  CHECK(sol.x[1] == kInf);
}

TEST_CASE("first passage requires an irreducible policy") {
  auto m = two_state(1, 1, 0, 0);
  m.rates[1][0] = {0.0, 0.0};
  m.rates[1].push_back({1.0, -1.0});
  m.actions[1].push_back("b");
  m.costs[1].push_back(0.0);
  CHECK_THROWS_WITH(first_passage_value(m, DetPolicy{{0, 0}}, 0.0, 0),
                    "policy not irreducible");
}

TEST_CASE("series enumeration bounds the solution from below") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 20) {
    const auto m = testutil::random_model(rng);
    const DetPolicy f{std::vector<std::size_t>(m.num_states(), 0)};
    const double g = m.max_cost() + 0.2;  // comfortably inside G
    const auto sol = first_passage_value(m, f, g, 0);
    if (!sol.finite) continue;
    ++checked;
    double prev = 0.0;
    for (int depth = 1; depth <= 8; ++depth) {
      const double lower = testutil::series_lower_bound(m, f, g, 0, 1, depth);
      CHECK(lower <= sol.x[1] * (1.0 + 1e-9));
      CHECK(lower >= prev - 1e-12);  // truncations increase with depth
      prev = lower;
    }
    // by depth 8 the truncation should have captured most of the mass
    CHECK(prev > 0.0);
  }
}

TEST_CASE("optimal first passage picks the better action") {
  // state 1: a1 (rate 2, cost 1) vs a2 (rate 4, cost 1.5); a2 evaluates to
  // 0.4 * 4 = 1.6 against a1's 2.0.
  CtmdpModel m;
  m.states = {"z", "s1"};
  m.actions = {{"a"}, {"a1", "a2"}};
  m.rates = {{{-1.0, 1.0}}, {{2.0, -2.0}, {4.0, -4.0}}};
  m.costs = {{0.0}, {1.0, 1.5}};
  m.lambda = 1.0;

  const auto sol = optimal_first_passage(m, 0.0, 0);
  REQUIRE(sol.finite);
  CHECK(sol.policy.choice[1] == 1);
  CHECK(sol.x[1] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(sol.h[1] == doctest::Approx(std::log(1.6)).epsilon(1e-12));
}

TEST_CASE("optimal first passage on a single-action model matches the fixed solve") {
  const auto m = two_state(1, 2, 0, 1);
  const auto fixed = first_passage_value(m, DetPolicy{{0, 0}}, 0.0, 0);
  const auto opt = optimal_first_passage(m, 0.0, 0);
  REQUIRE(opt.finite);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(opt.x[i] == doctest::Approx(fixed.x[i]).epsilon(1e-12));
}

TEST_CASE("optimal first passage dominates every enumerated policy") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = testutil::random_model(rng);
    const double g = m.max_cost() + 0.1;
    const auto opt = optimal_first_passage(m, g, 0);
    REQUIRE(opt.finite);
    double best = kInf;
    for (const auto& f : testutil::all_policies(m)) {
      const auto sol = first_passage_value(m, f, g, 0);
      for (std::size_t i = 0; i < m.num_states(); ++i)
        CHECK(opt.x[i] <= sol.x[i] * (1.0 + 1e-9));
      best = std::min(best, sol.x[0]);
    }
    CHECK(opt.x[0] == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("h*_g is nonincreasing in g") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testutil::random_model(rng);
    const double g2 = m.max_cost() + 0.5;
    const double g1 = m.max_cost() + 0.1;
    const auto s1 = optimal_first_passage(m, g1, 0);
    const auto s2 = optimal_first_passage(m, g2, 0);
    REQUIRE(s1.finite);
    REQUIRE(s2.finite);
    for (std::size_t i = 0; i < m.num_states(); ++i)
      CHECK(s1.h[i] >= s2.h[i] - 1e-10);
  }
}

TEST_CASE("membership classification at the cost bounds") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const auto m = testutil::random_model(rng);
    if (m.min_cost() == m.max_cost()) continue;
    const auto [hi_sign, hi_sol] = membership_in_G(m, m.max_cost(), 0);
    CHECK(hi_sign != GSign::Positive);
    const auto [lo_sign, lo_sol] =
        membership_in_G(m, m.min_cost() - 0.1, 0);
    CHECK(lo_sign == GSign::Positive);
  }
}

TEST_CASE("the ln 2 instance sits outside G at g = 0") {
  const auto m = two_state(1, 2, 0, 1);
  const auto [sign, sol] = membership_in_G(m, 0.0, 0);
  CHECK(sign == GSign::Positive);
  CHECK(sol.x[0] == doctest::Approx(2.0));
}
