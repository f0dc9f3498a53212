#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sbmchrom/chromatic.hpp"
#include "sbmchrom/functionals.hpp"

using namespace sbmchrom;

namespace {

SbmGraph complete(int n) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return SbmGraph::plain(n, std::move(e));
}

SbmGraph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  return SbmGraph::plain(n, std::move(e));
}

ModelInstance single_block(long n, double p) { return ModelInstance(BlockVector::integral({n}), ProbMatrix{{p}}); }

}  // namespace

TEST_CASE("exact chromatic number examples") {
  CHECK(exact_chromatic(complete(4)) == 4);
  CHECK(exact_chromatic(cycle(5)) == 3);
  CHECK(exact_chromatic(cycle(6)) == 2);
  CHECK(exact_chromatic(oracle::petersen()) == 3);
  CHECK(exact_chromatic(SbmGraph::plain(0, {})) == 0);
  CHECK(exact_chromatic(SbmGraph::plain(5, {})) == 1);
}

TEST_CASE("exact chromatic matches backtracking") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 4 + static_cast<int>(s % 9);
    const auto g = oracle::random_graph(n, 0.2 + 0.1 * static_cast<double>(s % 6), s);
    CHECK(exact_chromatic(g) == oracle::chromatic_number(g));
  }
}

TEST_CASE("exact chromatic budget") {
  const auto g = oracle::random_graph(60, 0.5, 3);
  try {
    exact_chromatic(g, 10);
    FAIL("expected budget error");
  } catch (const BudgetExceeded& e) {
    CHECK(e.lower() >= 1);
    CHECK(e.lower() <= e.upper());
    CHECK(e.upper() >= exact_chromatic(g));
  }
}

TEST_CASE("DSATUR examples") {
  const auto empty = dsatur_colouring(SbmGraph::plain(6, {}), 1);
  CHECK(empty.num_colours == 1);
  for (int n : {1, 5, 9}) CHECK(dsatur_colouring(complete(n), 2).num_colours == n);
  CHECK(dsatur_colouring(cycle(10), 3).num_colours == 2);
  // Random bipartite graphs.
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const int a = 1 + static_cast<int>(rng.below(10)), b = 1 + static_cast<int>(rng.below(10));
    std::vector<Edge> e;
    for (int u = 0; u < a; ++u)
      for (int v = a; v < a + b; ++v)
        if (rng.bernoulli(0.4)) e.emplace_back(u, v);
    const bool has_edge = !e.empty();
    const auto c = dsatur_colouring(SbmGraph::plain(a + b, std::move(e)), rng.next());
    CHECK(c.num_colours == (has_edge ? 2 : 1));
  }
}

TEST_CASE("DSATUR is proper, deterministic and not below chi") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto g = oracle::random_graph(30, 0.3, s);
    const auto c = dsatur_colouring(g, s);
    CHECK(is_proper(g, c));
    CHECK(c.colour_of == dsatur_colouring(g, s).colour_of);
    CHECK(c.num_colours >= exact_chromatic(g));
  }
}

TEST_CASE("is_proper rejects bad colourings") {
  const auto g = complete(3);
  Colouring c{{0, 1, 1}, 2, "manual"};
  CHECK_FALSE(is_proper(g, c));
  c.colour_of = {0, 1, 2};
  c.num_colours = 3;
  CHECK(is_proper(g, c));
  c.colour_of = {0, 1};
  CHECK_FALSE(is_proper(g, c));
  c.colour_of = {0, 1, 3};
  CHECK_FALSE(is_proper(g, c));
}

TEST_CASE("mad examples") {
  CHECK(max_avg_degree(complete(3)) == Rational(2));
  CHECK(max_avg_degree(SbmGraph::plain(3, {{0, 1}, {1, 2}})) == Rational(4, 3));
  CHECK(max_avg_degree(SbmGraph::plain(4, {})) == Rational(0));
  CHECK(max_avg_degree_flow(SbmGraph::plain(3, {{0, 1}, {1, 2}})) == Rational(4, 3));
  CHECK(max_avg_degree_flow(SbmGraph::plain(0, {})) == Rational(0));
}

TEST_CASE("mad routes agree with each other and with enumeration") {
  for (std::uint64_t s = 0; s < 80; ++s) {
    const int n = 2 + static_cast<int>(s % 13);
    const auto g = oracle::random_graph(n, 0.15 + 0.1 * static_cast<double>(s % 7), 100 + s);
    const auto brute = max_avg_degree_bruteforce(g);
    CHECK(brute == oracle::mad(g));
    CHECK(max_avg_degree_flow(g) == brute);
  }
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto g = oracle::random_graph(20, 0.3, 200 + s);
    CHECK(max_avg_degree_flow(g) == max_avg_degree_bruteforce(g));
  }
}

TEST_CASE("chromatic number is at most 1 + floor(mad)") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto g = oracle::random_graph(12, 0.1 + 0.01 * static_cast<double>(s), 300 + s);
    const auto mad = max_avg_degree(g);
    CHECK(exact_chromatic(g) <= 1 + mad.numerator() / mad.denominator());
  }
}

TEST_CASE("partition objective examples") {
  const auto k3 = complete(3);
  CHECK(partition_objective(k3, {{0}, {1}, {2}}) == Rational(3));
  CHECK(partition_objective(k3, {{0, 1, 2}}) == Rational(3));
  CHECK(partition_objective(k3, {{0, 1}, {2}}) == Rational(3));
  CHECK_THROWS(partition_objective(k3, {{0, 1}}));
  CHECK_THROWS(partition_objective(k3, {{0, 1}, {1, 2}}));
  CHECK_THROWS(partition_objective(k3, {{0, 1, 2, 3}}));
}

TEST_CASE("colour classes achieve chi in the partition objective") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = oracle::random_graph(10, 0.4, 400 + s);
    const auto c = dsatur_colouring(g, s);
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(c.num_colours));
    for (int v = 0; v < g.n(); ++v) classes[static_cast<std::size_t>(c.colour_of[static_cast<std::size_t>(v)])].push_back(v);
    CHECK(partition_objective(g, classes) == Rational(c.num_colours));
  }
}

TEST_CASE("minimum of the partition objective equals chi") {
  Rng rng(41);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.below(7));
    const auto g = oracle::random_graph(n, rng.uniform(), rng.next());
    Rational best(1000);
    oracle::for_each_partition(n, [&](const std::vector<std::vector<int>>& parts) {
      best = std::min(best, partition_objective(g, parts));
    });
    CHECK(best == Rational(exact_chromatic(g)));
  }
}

TEST_CASE("blow-up chromatic number versus w* of I + A") {
  Rng rng(42);
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = 1 + rng.below(3);
    std::vector<std::vector<int>> h(k, std::vector<int>(k, 0));
    SymMatrix q(k);
    for (std::size_t i = 0; i < k; ++i) {
      q.set(i, i, 1.0);
      for (std::size_t j = i + 1; j < k; ++j) {
        h[i][j] = h[j][i] = rng.bernoulli(0.5);
        q.set(i, j, h[i][j]);
      }
    }
    std::vector<long> sizes(k);
    for (auto& s : sizes) s = 1 + static_cast<long>(rng.below(4));
    const auto g = blow_up(BlowUpSpec(h, BlockVector::integral(sizes)));
    const double w = w_star_bruteforce(BlockVector::integral(sizes), QMatrix(q)).w_sum;
    const int chi = exact_chromatic(g);
    CHECK(w <= chi + 1e-9);
    CHECK(chi <= w + static_cast<double>(k * k) + 1e-9);
  }
}

TEST_CASE("independent set probability") {
  const auto m = single_block(5, 0.5);
  CHECK(independent_set_probability(m, {}) == 0.0);
  CHECK(independent_set_probability(m, {2}) == 0.0);
  CHECK(independent_set_probability(m, {0, 1, 2}) == doctest::Approx(-3 * std::log(2.0)).epsilon(1e-12));
  CHECK(9 * std::log(2.0) == doctest::Approx(6 * std::log(2.0) + 3 * std::log(2.0)));
}

TEST_CASE("probability identity b^T Q b = -2 ln Pr + sum q_ii b_i") {
  Rng rng(43);
  for (int t = 0; t < 300; ++t) {
    const std::size_t k = 1 + rng.below(4);
    std::vector<long> sizes(k);
    for (auto& s : sizes) s = 1 + static_cast<long>(rng.below(6));
    std::vector<std::vector<double>> p(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) p[i][j] = p[j][i] = 0.95 * rng.uniform();
    const ModelInstance m(BlockVector::integral(sizes), ProbMatrix(p));
    std::vector<int> u;
    long total = 0;
    for (long s : sizes) total += s;
    for (int v = 0; v < total; ++v)
      if (rng.bernoulli(0.5)) u.push_back(v);
    std::vector<double> b(k, 0.0);
    long start = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (int v : u)
        if (v >= start && v < start + sizes[i]) b[i] += 1;
      start += sizes[i];
    }
    double lhs = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      diag += m.q(i, i) * b[i];
      for (std::size_t j = 0; j < k; ++j) lhs += b[i] * m.q(i, j) * b[j];
    }
    CHECK(lhs == doctest::Approx(-2 * independent_set_probability(m, u) + diag).epsilon(1e-9));
  }
}

TEST_CASE("alpha_h examples") {
  const auto m = single_block(3, 0.5);
  const auto r = alpha_h(m, SbmGraph::plain(3, {}), AlphaMode::exact, 1);
  CHECK(r.h_value == doctest::Approx(std::log(2.0)));
  CHECK(r.best_set.size() == 3);
  CHECK(r.exact);
  CHECK(alpha_h(single_block(1, 0.5), SbmGraph::plain(1, {}), AlphaMode::exact, 1).h_value == 0.0);
  const auto k5 = blow_up(BlowUpSpec({{0, 1}, {1, 0}}, BlockVector::integral({2, 3})));
  const ModelInstance mk(BlockVector::integral({2, 3}), ProbMatrix({{0.5, 0.5}, {0.5, 0.5}}));
  CHECK(alpha_h(mk, k5, AlphaMode::exact, 1).h_value == 0.0);
  CHECK(alpha_h(mk, k5, AlphaMode::heuristic, 1).h_value == 0.0);
  CHECK_THROWS(alpha_h(single_block(4, 0.5), SbmGraph::plain(3, {}), AlphaMode::exact, 1));
}

TEST_CASE("alpha_h exact equals enumeration") {
  Rng rng(44);
  for (int t = 0; t < 60; ++t) {
    const long n1 = 1 + static_cast<long>(rng.below(7)), n2 = static_cast<long>(rng.below(8));
    const double a = 0.05 + 0.9 * rng.uniform(), b = 0.05 + 0.9 * rng.uniform(), c = 0.05 + 0.9 * rng.uniform();
    const ModelInstance m(BlockVector::integral({n1, n2}), ProbMatrix({{a, c}, {c, b}}));
    const auto g = sample_sbm(m, rng.next());
    const auto ex = alpha_h(m, g, AlphaMode::exact, 1);
    CHECK(ex.h_value == doctest::Approx(oracle::alpha_h(m, g)).epsilon(1e-12));
    CHECK(ex.h_value == doctest::Approx(h_weight(m, ex.best_set)).epsilon(1e-9));
    const auto he = alpha_h(m, g, AlphaMode::heuristic, 2);
    CHECK_FALSE(he.exact);
    CHECK(he.h_value <= ex.h_value + 1e-12);
    CHECK(he.h_value == doctest::Approx(h_weight(m, he.best_set)).epsilon(1e-9));
    for (std::size_t i = 0; i < he.best_set.size(); ++i)
      for (std::size_t j = i + 1; j < he.best_set.size(); ++j) CHECK_FALSE(g.has_edge(he.best_set[i], he.best_set[j]));
  }
}

TEST_CASE("balanced independent set") {
  const auto m2 = ModelInstance(BlockVector::integral({4, 4}), ProbMatrix({{0.5, 0.5}, {0.5, 0.5}}));
  const auto empty = SbmGraph({0, 0, 0, 0, 1, 1, 1, 1}, {});
  const auto r = find_balanced_independent_set(m2, empty, {3, 2}, 1, 5);
  REQUIRE(r);
  CHECK(block_profile(empty, *r) == std::vector<long>{3, 2});
  const auto g = sample_sbm(m2, 9);
  const auto one = find_balanced_independent_set(m2, g, {0, 1}, 2, 5);
  REQUIRE(one);
  CHECK(one->size() == 1);
  CHECK(g.block((*one)[0]) == 1);
  const auto dense = single_block(30, 0.9);
  for (std::uint64_t s = 0; s < 20; ++s)
    CHECK_FALSE(find_balanced_independent_set(dense, sample_sbm(dense, s), {10}, s, kExtractionEffort));
}

TEST_CASE("balanced extraction colouring examples") {
  const auto m = single_block(10, 0.5);
  CHECK(balanced_extraction_colouring(m, SbmGraph::plain(10, {}), 0.2, 1).num_colours == 1);
  const ModelInstance mk(BlockVector::integral({2, 3}), ProbMatrix({{0.5, 0.5}, {0.5, 0.5}}));
  const auto k5 = blow_up(BlowUpSpec({{0, 1}, {1, 0}}, BlockVector::integral({2, 3})));
  const auto c = balanced_extraction_colouring(mk, k5, 0.2, 1);
  CHECK(c.num_colours == 5);
  CHECK(is_proper(k5, c));
  CHECK_THROWS(balanced_extraction_colouring(m, SbmGraph::plain(10, {}), 0.0, 1));
  CHECK_THROWS(balanced_extraction_colouring(m, SbmGraph::plain(10, {}), 1.0, 1));
}

TEST_CASE("balanced extraction on G(200, 1/2) stays close to DSATUR") {
  const auto m = single_block(200, 0.5);
  std::vector<double> ext, ds;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = sample_sbm(m, mix_seed(50, s));
    const auto c = balanced_extraction_colouring(m, g, 0.2, s);
    CHECK(is_proper(g, c));
    ext.push_back(c.num_colours);
    ds.push_back(dsatur_colouring(g, s).num_colours);
  }
  std::sort(ds.begin(), ds.end());
  const double median = 0.5 * (ds[9] + ds[10]);
  for (double e : ext) CHECK(e <= 1.15 * median);
}

TEST_CASE("colourings versus exact on random instances") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ModelInstance m(BlockVector::integral({15, 15}), ProbMatrix({{0.3, 0.5}, {0.5, 0.4}}));
    const auto g = sample_sbm(m, 600 + s);
    const int chi = exact_chromatic(g);
    const auto d = dsatur_colouring(g, s);
    const auto e = balanced_extraction_colouring(m, g, 0.2, s);
    CHECK(is_proper(g, e));
    CHECK(chi <= d.num_colours);
    CHECK(chi <= e.num_colours);
    CHECK(e.colour_of == balanced_extraction_colouring(m, g, 0.2, s).colour_of);
  }
}
