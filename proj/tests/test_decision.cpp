#include <doctest.h>

#include <limits>

#include "recon/decision.hpp"
#include "recon/error.hpp"
#include "support.hpp"

using namespace recon;
using testing::binary3;
using testing::table;

namespace {

// a1 pays 1 when v3 = 0, a2 pays 0.8 everywhere, a3 pays 1 when v1 = 1.
DecisionProblem sample_problem() {
  std::vector<double> a1, a2(8, 0.8), a3;
  for (int c = 0; c < 8; ++c) {
    a1.push_back(c % 2 == 0 ? 1.0 : 0.0);
    a3.push_back(c >= 4 ? 1.0 : 0.0);
  }
  return DecisionProblem(binary3(), {"a1", "a2", "a3"}, {a1, a2, a3});
}

}  // namespace

TEST_CASE("expected utilities of the worked table") {
  const auto dp = sample_problem();
  const auto p = table();
  CHECK(expected_utility(dp, "a1", p) == doctest::Approx(7.0 / 8));
  CHECK(expected_utility(dp, "a2", p) == doctest::Approx(0.8));
  CHECK(expected_utility(dp, "a3", p) == doctest::Approx(5.0 / 8));
  CHECK(maximizing_actions(dp, p) == std::vector<std::size_t>{0});
  CHECK(maximizing_actions(dp, Distribution::uniform(binary3())) == std::vector<std::size_t>{1});
  CHECK(dp.action_index("a3") == 2);
  CHECK_THROWS_AS(dp.action_index("a9"), InputError);
}

TEST_CASE("ties put a distribution in several regions") {
  const std::vector<double> row(8, 0.5);
  const DecisionProblem dp(binary3(), {"x", "y"}, {row, row});
  CHECK(maximizing_actions(dp, table()) == std::vector<std::size_t>{0, 1});
  CHECK(same_region(dp, table(), Distribution::uniform(binary3())));
}

TEST_CASE("regions and superiority") {
  const auto dp = sample_problem();
  const auto p = table();
  const auto u = Distribution::uniform(binary3());
  const auto pm = Distribution::point_mass(binary3(), 0);
  CHECK(same_region(dp, p, pm));
  CHECK_FALSE(same_region(dp, p, u));
  CHECK(superior(dp, p, pm, u));
  CHECK_FALSE(superior(dp, p, u, pm));
  CHECK_FALSE(superior(dp, p, pm, pm));
  CHECK_THROWS_AS(same_region(dp, p, Distribution::uniform(Scheme::uniform(2, 2))), InputError);
}

TEST_CASE("decision problem validation") {
  const std::vector<double> row(8, 0.0);
  CHECK_THROWS_AS(DecisionProblem(binary3(), {}, {}), InputError);
  CHECK_THROWS_AS(DecisionProblem(binary3(), {"a", "a"}, {row, row}), InputError);
  CHECK_THROWS_AS(DecisionProblem(binary3(), {"a"}, {row, row}), InputError);
  CHECK_THROWS_AS(DecisionProblem(binary3(), {"a"}, {std::vector<double>(7, 0.0)}), InputError);
  auto bad = row;
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DecisionProblem(binary3(), {"a"}, {bad}), InputError);
}

TEST_CASE("random decision problems") {
  Rng a(1), b(1);
  const auto dp = random_decision_problem(binary3(), 10, a);
  CHECK(dp.action_count() == 10);
  CHECK(dp.actions().front() == "a1");
  CHECK(dp.actions().back() == "a10");
  CHECK(dp.utilities() == random_decision_problem(binary3(), 10, b).utilities());
  for (const auto& r : dp.utilities()) {
    for (double x : r) {
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
  }
}
