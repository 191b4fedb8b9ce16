#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "recon/distribution.hpp"
#include "recon/error.hpp"
#include "recon/rng.hpp"
#include "support.hpp"

using namespace recon;
using testing::binary3;
using testing::table;

TEST_CASE("mix64 matches the reference SplitMix64 stream") {
  // First two outputs of SplitMix64 seeded with 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("engine is the standard mt19937_64") {
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("derived streams are reproducible and key-sensitive") {
  Rng a = Rng::derive(7, {1, 2});
  Rng b = Rng::derive(7, {1, 2});
  Rng c = Rng::derive(7, {2, 1});
  Rng d = Rng::derive(8, {1, 2});
  const auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
  CHECK(x != d.next_u64());
}

TEST_CASE("uniform, exponential and below stay in range") {
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double e = rng.exponential();
    REQUIRE(std::isfinite(e));
    REQUIRE(e >= 0.0);
    sum += e;
    REQUIRE(rng.below(7) < 7);
  }
  CHECK(sum / 20000 == doctest::Approx(1.0).epsilon(0.03));
  CHECK_THROWS(rng.below(0));
}

TEST_CASE("scheme indexing is row-major with the last variable fastest") {
  const Scheme s({{"a", 3}, {"b", 2}, {"c", 4}});
  CHECK(s.cell_count() == 24);
  CHECK(s.stride(2) == 1);
  CHECK(s.stride(1) == 4);
  CHECK(s.stride(0) == 8);
  CHECK(s.coordinate(13, 0) == 1);
  CHECK(s.coordinate(13, 1) == 1);
  CHECK(s.coordinate(13, 2) == 1);
  CHECK(s.index_of("c") == 2u);
  CHECK_FALSE(s.index_of("d").has_value());
}

TEST_CASE("scheme validation") {
  CHECK_THROWS_AS(Scheme({{"a", 2}, {"a", 2}}), InputError);
  CHECK_THROWS_AS(Scheme({{"a", 1}}), InputError);
  CHECK_THROWS_AS(Scheme({}), InputError);
}

TEST_CASE("varset basics") {
  const VarSet s = VarSet::single(0) | VarSet::single(2);
  CHECK(s.size() == 2);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(VarSet::single(2).subset_of(s));
  CHECK(s.members() == std::vector<std::size_t>{0, 2});
  CHECK(s.without(0) == VarSet::single(2));
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(Distribution(binary3(), {0.5, 0.5}), InputError);
  CHECK_THROWS_AS(Distribution(binary3(), {-0.1, 0.3, 0.1, 0.1, 0.1, 0.2, 0.2, 0.1}), InputError);
  CHECK_THROWS_AS(Distribution(binary3(), {0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.2}), InputError);
  CHECK_NOTHROW(table());
}

TEST_CASE("projections of the worked table") {
  const auto p = table();
  const std::vector<std::string> v12{"v1", "v2"}, v3{"v3"}, v13{"v1", "v3"};
  const auto p12 = project(p, v12);
  CHECK(std::vector<double>(p12.probs().begin(), p12.probs().end()) == std::vector<double>{0.25, 0.125, 0.375, 0.25});
  const auto p3 = project(p, v3);
  CHECK(p3[0] == 7.0 / 8);
  CHECK(p3[1] == 1.0 / 8);
  const auto p13 = project(p, v13);
  CHECK(p13[0] == 0.328125);
  CHECK(p13[3] == 0.078125);
  CHECK(project(p, p.scheme().all()) == p);
  const std::vector<std::string> bad{"v9"};
  CHECK_THROWS_AS(project(p, bad), InputError);
}

TEST_CASE("projection is transitive") {
  Rng rng(11);
  const Scheme s({{"a", 3}, {"b", 2}, {"c", 2}, {"d", 3}});
  const auto p = random_distribution(s, rng);
  const VarSet abd = VarSet(0b1011), ad = VarSet(0b1001);
  const auto via = project(project(p, abd), VarSet(0b101));
  const auto direct = project(p, ad);
  CHECK(max_abs_diff(via, direct) < 1e-15);
}

TEST_CASE("entropy, divergence and hamming of the worked table") {
  const auto p = table();
  const auto u = Distribution::uniform(binary3());
  // Oracle: independent float evaluation of the closed sums.
  CHECK(entropy(p, LogBase::two) == doctest::Approx(2.4492035054291628).epsilon(1e-14));
  CHECK(entropy(p) == doctest::Approx(1.697658504405759).epsilon(1e-14));
  CHECK(divergence(p, u, LogBase::two) == doctest::Approx(0.5507964945708371).epsilon(1e-13));
  CHECK(hamming(p, u) == 25.0 / 32);
  CHECK(entropy(u, LogBase::two) == doctest::Approx(3.0));
  CHECK(divergence(p, p) == 0.0);
}

TEST_CASE("divergence is infinite off support and zero-mass cells are ignored") {
  const auto pm = Distribution::point_mass(binary3(), 3);
  const auto p = table();
  CHECK(divergence(p, pm) == std::numeric_limits<double>::infinity());
  CHECK(divergence(pm, p) == doctest::Approx(-std::log(1.0 / 64)));
  CHECK(entropy(pm) == 0.0);
  CHECK_THROWS_AS(divergence(p, Distribution::uniform(Scheme::uniform(2, 2))), InputError);
}

TEST_CASE("sampled relative frequencies are multiples of 1/n and seed-stable") {
  const auto p = table();
  Rng a(5), b(5);
  const auto f = sample_relative_frequency(p, 40, a);
  CHECK(f == sample_relative_frequency(p, 40, b));
  for (double x : f.probs()) CHECK(std::abs(x * 40 - std::round(x * 40)) < 1e-12);
  Rng c(6);
  CHECK(hamming(sample_relative_frequency(p, 200000, c), p) < 0.01);
}

TEST_CASE("random distributions are valid and vary") {
  Rng rng(9);
  std::set<double> first;
  for (int i = 0; i < 50; ++i) {
    const auto q = random_distribution(binary3(), rng);
    double s = 0.0;
    for (double x : q.probs()) {
      REQUIRE(x > 0.0);
      s += x;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    first.insert(q[0]);
  }
  CHECK(first.size() == 50);
}

TEST_CASE("perturbation with explicit signs") {
  const auto u = Distribution::uniform(binary3());
  const std::vector<int> signs{1, -1, 1, -1, 1, -1, 1, -1};
  const auto q = perturb_with_signs(u, 0.05, signs);
  CHECK(q[0] == doctest::Approx(0.175));
  CHECK(q[1] == doctest::Approx(0.075));
  CHECK(perturb_with_signs(u, 0.0, signs) == u);

  // Clamping at zero then renormalizing.
  const auto pm = Distribution::point_mass(binary3(), 0);
  const auto r = perturb_with_signs(pm, 0.1, signs);
  CHECK(r[0] == doctest::Approx(1.1 / 1.4));
  CHECK(r[1] == 0.0);

  const std::vector<int> down(8, -1);
  CHECK_THROWS_AS(perturb_with_signs(u, 0.2, down), NumericError);
}
