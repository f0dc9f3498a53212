#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sbmchrom/functionals.hpp"
#include "sbmchrom/rng.hpp"

using namespace sbmchrom;

namespace {

QMatrix random_q(Rng& rng, std::size_t k, double scale = 3.0) {
  SymMatrix s(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) s.set(i, j, scale * rng.uniform());
  return QMatrix(s);
}

std::vector<long> random_counts(Rng& rng, std::size_t k, long max) {
  std::vector<long> x(k);
  for (auto& v : x) v = static_cast<long>(rng.below(static_cast<std::uint64_t>(max + 1)));
  return x;
}

const QMatrix kAnti({{1, 3}, {3, 1}});

}  // namespace

TEST_CASE("w_value examples") {
  const auto a = w_value(BlockVector({2, 2}), QMatrix({{1, 0}, {0, 1}}));
  CHECK(a.value == doctest::Approx(2.0));
  CHECK(a.support == std::vector<std::size_t>{0});  // smallest support wins the tie
  const auto b = w_value(BlockVector({1, 1}), kAnti);
  CHECK(b.value == doctest::Approx(4.0));
  CHECK(b.support == std::vector<std::size_t>{0, 1});
  const auto c = w_value(BlockVector({0, 0}), kAnti);
  CHECK(c.value == 0.0);
  CHECK(c.maximizer.is_zero());
  CHECK(c.support.empty());
}

TEST_CASE("w_value is a corner and matches the oracle") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 1 + rng.below(5);
    const auto q = random_q(rng, k);
    std::vector<double> x(k);
    for (auto& v : x) v = rng.uniform() < 0.2 ? 0.0 : 5 * rng.uniform();
    const auto sol = w_value(BlockVector(x), q);
    CHECK(sol.value == doctest::Approx(oracle::corner_max(x, q)).epsilon(1e-12));
    for (std::size_t i = 0; i < k; ++i) CHECK((sol.maximizer[i] == 0.0 || sol.maximizer[i] == x[i]));
    if (!sol.maximizer.is_zero())
      CHECK(sol.value == doctest::Approx(quadratic_form(sol.maximizer, q) / sol.maximizer.norm()).epsilon(1e-12));
  }
}

TEST_CASE("w_value rejects more than 30 nonzero blocks") {
  const std::size_t k = 31;
  const QMatrix q{SymMatrix(k, 1.0)};
  CHECK_THROWS_AS(w_value(BlockVector(std::vector<double>(k, 1.0)), q), InstanceTooLarge);
  CHECK(w_value_sampled(BlockVector(std::vector<double>(k, 1.0)), q, 10, 1) > 0.0);
}

TEST_CASE("sampled box search") {
  const double v = w_value_sampled(BlockVector({1, 1}), kAnti, 10000, 3);
  CHECK(v > 3.9);
  CHECK(v <= 4.0 + 1e-12);
  CHECK(w_value_sampled(BlockVector({0, 0}), kAnti, 100, 3) == 0.0);
  CHECK(w_value_sampled(BlockVector({2, 7}), QMatrix({{0, 0}, {0, 0}}), 100, 3) == 0.0);
  CHECK_THROWS(w_value_sampled(BlockVector({1, 1}), kAnti, 0, 3));
}

TEST_CASE("w_star_bruteforce examples") {
  const auto a = w_star_bruteforce(BlockVector::integral({1, 1}), kAnti);
  CHECK(a.w_sum == doctest::Approx(2.0));
  REQUIRE(a.parts.size() == 2);
  const auto b = w_star_bruteforce(BlockVector::integral({2, 2}), QMatrix({{1, 0}, {0, 1}}));
  CHECK(b.w_sum == doctest::Approx(2.0));
  const auto c = w_star_bruteforce(BlockVector::integral({1, 0}), kAnti);
  CHECK(c.w_sum == doctest::Approx(1.0));
  REQUIRE(c.parts.size() == 1);
  CHECK(c.parts[0] == BlockVector::integral({1, 0}));
  CHECK_THROWS_AS(w_star_bruteforce(BlockVector::integral({60, 60, 60}), kAnti.k() == 2 ? QMatrix(SymMatrix(3, 1.0)) : kAnti),
                  InstanceTooLarge);
  CHECK_THROWS_AS(w_star_bruteforce(BlockVector({0.5, 1.0}), kAnti), ModelError);
}

TEST_CASE("w_star_bruteforce agrees with the peeling oracle and sums to x") {
  Rng rng(12);
  for (int t = 0; t < 150; ++t) {
    const std::size_t k = 1 + rng.below(3);
    const auto q = random_q(rng, k);
    const auto x = random_counts(rng, k, 4);
    const auto d = w_star_bruteforce(BlockVector::integral(x), q);
    CHECK(d.w_sum == doctest::Approx(oracle::integer_wstar(x, q)).epsilon(1e-12));
    std::vector<long> sum(k, 0);
    for (const auto& p : d.parts) {
      CHECK_FALSE(p.is_zero());
      for (std::size_t i = 0; i < k; ++i) sum[i] += p.counts()[i];
    }
    CHECK(sum == x);
    CHECK(d.w_sum == doctest::Approx(w_sum_of(d.parts, q)).epsilon(1e-12));
  }
}

TEST_CASE("w_star_solve examples") {
  const auto a = w_star_solve(BlockVector({1, 1}), kAnti, 8, 1);
  CHECK(a.w_sum == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(a.parts.size() <= 2);
  const auto b = w_star_solve(BlockVector({2, 2}), QMatrix({{1, 0}, {0, 1}}), 8, 1);
  CHECK(b.method == "pseudodefinite");
  CHECK(b.w_sum == doctest::Approx(2.0));
  const auto c = w_star_solve(BlockVector({0, 0}), kAnti, 8, 1);
  CHECK(c.parts.empty());
  CHECK(c.w_sum == 0.0);
}

TEST_CASE("w_star_solve sums to x, respects bounds and the single-part candidate") {
  Rng rng(13);
  for (int t = 0; t < 150; ++t) {
    const std::size_t k = 1 + rng.below(4);
    const auto q = random_q(rng, k);
    std::vector<double> x(k);
    for (auto& v : x) v = 5 * rng.uniform();
    const BlockVector bx(x);
    const auto d = w_star_solve(bx, q, 4, t);
    CHECK(d.parts.size() <= k);
    std::vector<double> sum(k, 0.0);
    for (const auto& p : d.parts)
      for (std::size_t i = 0; i < k; ++i) sum[i] += p[i];
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(sum[i] - x[i]) <= 1e-9);
    const auto bounds = w_star_bounds(bx, q);
    CHECK(d.w_sum >= bounds.lower - 1e-9);
    CHECK(d.w_sum <= w_value(bx, q).value + 1e-9);
  }
}

TEST_CASE("w_ell examples and sandwich") {
  Rng rng(14);
  CHECK(w_ell(BlockVector({1, 1}), kAnti, 2, 0) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS(w_ell(BlockVector({1, 1}), kAnti, 0, 0));
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + rng.below(4);
    const auto q = random_q(rng, k);
    std::vector<double> x(k);
    for (auto& v : x) v = 5 * rng.uniform();
    const BlockVector bx(x);
    const double w1 = w_ell(bx, q, 1, t), w2 = w_ell(bx, q, 2, t), w3 = w_ell(bx, q, 3, t);
    CHECK(w1 == doctest::Approx(w_value(bx, q).value).epsilon(1e-12));
    CHECK(w2 <= w1 + 1e-9);
    CHECK(w3 <= w2 + 1e-9);
    const double ws = w_star_solve(bx, q, kDefaultRestarts, t).w_sum;
    CHECK(ws <= w3 + 1e-9);
    CHECK(w_ell(bx, q, static_cast<int>(k) + 2, t) == doctest::Approx(w_ell(bx, q, static_cast<int>(k), t)));
  }
}

TEST_CASE("near-optimal integer system") {
  const auto a = near_optimal_integer_system(BlockVector::integral({1, 1}), kAnti, 0);
  CHECK(a.w_sum == doctest::Approx(2.0));
  CHECK(a.parts.size() == 2);
  const auto b = near_optimal_integer_system(BlockVector::integral({5, 0}), kAnti, 0);
  REQUIRE(b.parts.size() == 1);
  CHECK(b.parts[0] == BlockVector::integral({5, 0}));
  CHECK(b.w_sum == doctest::Approx(5.0));
  Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 1 + rng.below(4);
    const auto q = random_q(rng, k);
    const auto x = random_counts(rng, k, 12);
    const BlockVector bx = BlockVector::integral(x);
    const auto d = near_optimal_integer_system(bx, q, t);
    CHECK(d.parts.size() <= k);
    std::vector<long> sum(k, 0);
    for (const auto& p : d.parts) {
      CHECK(p.is_integral());
      for (std::size_t i = 0; i < k; ++i) sum[i] += p.counts()[i];
    }
    CHECK(sum == x);
    const double heuristic = w_star_solve(bx, q, kDefaultRestarts, t).w_sum;
    CHECK(d.w_sum <= heuristic + static_cast<double>(k * k) * q_star(q) + 1e-6);
  }
}

TEST_CASE("pseudodefinite classification") {
  CHECK(is_pseudodefinite(QMatrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
  CHECK_FALSE(is_pseudodefinite(kAnti));
  CHECK(is_pseudodefinite(QMatrix({{1.0, 1.5}, {1.5, 2.0}})));  // q12 = (q11 + q22)/2
  CHECK_FALSE(is_pseudodefinite(QMatrix({{1.0, 1.5 + 1e-6}, {1.5 + 1e-6, 2.0}})));
  CHECK(is_pseudodefinite(QMatrix(std::vector<std::vector<double>>{{0.3}})));
}

TEST_CASE("bounds examples") {
  auto b = w_star_bounds(BlockVector({1, 1}), QMatrix({{1, 0}, {0, 1}}));
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(2.0));
  b = w_star_bounds(BlockVector({1, 1}), kAnti);
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(2.0));
  b = w_star_bounds(BlockVector({1, 1}), QMatrix({{0, 0}, {0, 0}}));
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
}

TEST_CASE("scaling and monotonicity of w") {
  Rng rng(16);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 1 + rng.below(4);
    const auto q = random_q(rng, k);
    std::vector<double> x(k), xs(k);
    for (std::size_t i = 0; i < k; ++i) {
      x[i] = 5 * rng.uniform();
      xs[i] = x[i] * rng.uniform();
    }
    const double s = 0.1 + 10 * rng.uniform();
    const double w = w_value(BlockVector(x), q).value;
    CHECK(w_value(BlockVector(x).scaled(s), q).value == doctest::Approx(s * w).epsilon(1e-9));
    CHECK(w_value(BlockVector(xs), q).value <= w + 1e-9);
  }
}

TEST_CASE("solvers are deterministic for a fixed seed") {
  const QMatrix q({{0.2, 2.5, 0.1}, {2.5, 0.4, 1.7}, {0.1, 1.7, 0.9}});
  const BlockVector x({3.0, 4.5, 2.0});
  const auto a = w_star_solve(x, q, 6, 99), b = w_star_solve(x, q, 6, 99);
  CHECK(a.w_sum == b.w_sum);
  REQUIRE(a.parts.size() == b.parts.size());
  for (std::size_t t = 0; t < a.parts.size(); ++t) CHECK(a.parts[t] == b.parts[t]);
}
