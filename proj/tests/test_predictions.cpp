#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sbmchrom/functionals.hpp"
#include "sbmchrom/predictions.hpp"

using namespace sbmchrom;

TEST_CASE("sigma estimate") {
  CHECK(sigma_estimate(ModelInstance(BlockVector::integral({50}), ProbMatrix{{1 - std::exp(-1.0)}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  const double qs = std::pow(10000.0, -0.2);
  const ModelInstance m(BlockVector::integral({10000}), ProbMatrix{{-std::expm1(-qs)}});
  CHECK(sigma_estimate(m) == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(sigma_estimate(ModelInstance(BlockVector::integral({10}), ProbMatrix{{0.95}})) == 0.0);
  CHECK(sigma_estimate(ModelInstance(BlockVector::integral({10}), ProbMatrix{{0.5}}, 0.1)) == 0.1);
  CHECK_THROWS_AS(sigma_estimate(ModelInstance(BlockVector::integral({10}), ProbMatrix{{0.0}})), PredictionError);
}

TEST_CASE("G(n,p) predictions") {
  CHECK(predict_gnp(1000, 0.5).chi_predicted == doctest::Approx(1000 * std::log(2.0) / (2 * std::log(500.0))));
  CHECK(std::abs(predict_gnp(1000, 0.5).chi_predicted - 55.76) < 0.01);
  const double pe = 1 - std::exp(-1.0);
  CHECK(predict_gnp(1000, pe).chi_predicted == doctest::Approx(1000 / (2 * std::log(1000 * pe))).epsilon(1e-12));
  // Rounded reference value quoted with the example; the formula gives 77.53.
  CHECK(std::abs(predict_gnp(1000, pe).chi_predicted - 77.65) < 0.15);
  CHECK(predict_gnp(60, 0.5).chi_predicted == doctest::Approx(6.11).epsilon(1e-3));
  CHECK_THROWS_AS(predict_gnp(10, 0.05), PredictionError);
  CHECK_THROWS_AS(predict_gnp(10, 1.0), PredictionError);
}

TEST_CASE("block model predictions") {
  const ModelInstance m(BlockVector::integral({1000}), ProbMatrix{{0.5}}, 0.0);
  const double w = 1000 * std::log(2.0);
  CHECK(std::abs(predict_sbm(m, w, Normalization::sigma_form).chi_predicted - 50.17) < 0.01);
  CHECK(predict_sbm(m, w, Normalization::qstar_form).chi_predicted == doctest::Approx(w / (2 * std::log(w))).epsilon(1e-12));
  // Rounded reference value quoted with the example; the formula gives 52.98.
  CHECK(std::abs(predict_sbm(m, w, Normalization::qstar_form).chi_predicted - 52.93) < 0.1);
  const auto both = predict_sbm(m, w);
  CHECK(both.normalization == Normalization::qstar_form);
  CHECK(std::abs(*both.sigma_form - 50.17) < 0.01);
  CHECK(predict_sbm(m, 0.0).chi_predicted == 0.0);
  CHECK_THROWS_AS(predict_sbm(m, -1.0), PredictionError);
}

TEST_CASE("single block reduces to G(n,p)") {
  for (long n : {200L, 1000L})
    for (double p : {0.5, 0.7, 0.9}) {
      const ModelInstance m(BlockVector::integral({n}), ProbMatrix{{p}}, -std::log(p) / std::log(static_cast<double>(n)));
      const double w = w_star_solve(m.sizes, m.q, 4, 1).w_sum;
      CHECK(predict_sbm(m, w, Normalization::sigma_form).chi_predicted ==
            doctest::Approx(predict_gnp(n, p).chi_predicted).epsilon(1e-9));
    }
}

TEST_CASE("two-block thresholds") {
  for (double p : {0.1, 0.5, 0.8}) {
    const auto th = two_block_thresholds(7, 7, p, p);
    CHECK(th.p_bar == doctest::Approx(p).epsilon(1e-12));
    CHECK(th.p_low == 0.0);
    CHECK(two_block_thresholds(3, 11, p, p).p_bar == doctest::Approx(p).epsilon(1e-12));
  }
  for (int a = 1; a <= 10; ++a)
    for (int b = 1; b <= 10; ++b)
      for (int c = 1; c <= 10; ++c) {
        const auto th = two_block_thresholds(a, 11 - a, 0.09 * b, 0.09 * c);
        CHECK(0.0 <= th.p_low);
        CHECK(th.p_low <= th.p_bar);
        CHECK(th.p_bar <= 1.0);
      }
  CHECK(*two_block_thresholds(5, 5, 0.5, 0.5, 0.0).regime == Regime::middle);
  CHECK(*two_block_thresholds(5, 5, 0.5, 0.5, 0.5).regime == Regime::middle);
  CHECK(*two_block_thresholds(5, 5, 0.5, 0.5, 0.6).regime == Regime::above);
  CHECK(*two_block_thresholds(10, 10, 0.8, 0.2, 0.05).regime == Regime::below);
}

TEST_CASE("threshold ordering on random draws") {
  Rng rng(71);
  for (int t = 0; t < 10000; ++t) {
    const long n1 = static_cast<long>(rng.below(100)), n2 = 1 + static_cast<long>(rng.below(100));
    const auto th = two_block_thresholds(n1, n2, 0.001 + 0.998 * rng.uniform(), 0.001 + 0.998 * rng.uniform());
    CHECK(0.0 <= th.p_low);
    CHECK(th.p_low <= th.p_bar);
    CHECK(th.p_bar <= 1.0);
  }
}

TEST_CASE("two-block prediction continuity at p_bar") {
  Rng rng(72);
  for (int t = 0; t < 100; ++t) {
    const long n1 = 1 + static_cast<long>(rng.below(50)), n2 = 1 + static_cast<long>(rng.below(50));
    const double p11 = 0.05 + 0.9 * rng.uniform(), p22 = 0.05 + 0.9 * rng.uniform();
    const double pb = two_block_thresholds(n1, n2, p11, p22).p_bar;
    const ModelInstance m(BlockVector::integral({n1, n2}), ProbMatrix({{p11, pb}, {pb, p22}}));
    const double middle = quadratic_form(m.sizes, m.q) / m.sizes.norm();
    CHECK(middle == doctest::Approx(n1 * m.q(0, 0) + n2 * m.q(1, 1)).epsilon(1e-9));
  }
}

TEST_CASE("two-block case formulas") {
  const long n = 100;
  const double q = std::log(2.0);
  const auto mid = predict_two_block(n, n, 0.5, 0.5, 0.25, Normalization::qstar_form);
  CHECK(*mid.regime == "middle");
  const double q12 = -std::log1p(-0.25);
  const double w_mid = (n * n * q * 2 + 2 * n * n * q12) / (2.0 * n);
  const ModelInstance m(BlockVector::integral({n, n}), ProbMatrix({{0.5, 0.25}, {0.25, 0.5}}));
  CHECK(mid.chi_predicted == doctest::Approx(predict_sbm(m, w_mid).chi_predicted).epsilon(1e-12));
  const auto above = predict_two_block(n, n, 0.5, 0.5, 0.75);
  CHECK(*above.regime == "above");
  const ModelInstance ma(BlockVector::integral({n, n}), ProbMatrix({{0.5, 0.75}, {0.75, 0.5}}));
  CHECK(above.chi_predicted == doctest::Approx(predict_sbm(ma, 2 * n * q, Normalization::sigma_form).chi_predicted));
  const auto below = predict_two_block(40, 10, 0.8, 0.2, 0.02, Normalization::qstar_form);
  CHECK(*below.regime == "below");
  const ModelInstance mb(BlockVector::integral({40, 10}), ProbMatrix({{0.8, 0.02}, {0.02, 0.2}}));
  CHECK(below.chi_predicted == doctest::Approx(predict_sbm(mb, 40 * mb.q(0, 0)).chi_predicted));
}

TEST_CASE("two equal blocks without cross edges") {
  for (long n : {2L, 4L, 5L}) {
    const ModelInstance m(BlockVector::integral({n, n}), ProbMatrix({{0.4, 0.0}, {0.0, 0.4}}));
    const double w = w_star_bruteforce(m.sizes, m.q).w_sum;
    CHECK(predict_sbm(m, w).chi_predicted ==
          doctest::Approx(predict_two_block(n, n, 0.4, 0.4, 0.0, Normalization::qstar_form).chi_predicted).epsilon(1e-9));
  }
}

TEST_CASE("an empty second block reduces to G(n,p)") {
  const auto two = predict_two_block(300, 0, 0.3, 0.6, 0.2, Normalization::sigma_form);
  const ModelInstance m(BlockVector::integral({300, 0}), ProbMatrix({{0.3, 0.2}, {0.2, 0.6}}),
                        -std::log(0.3) / std::log(300.0));
  CHECK(predict_sbm(m, 300 * m.q(0, 0), Normalization::sigma_form).chi_predicted ==
        doctest::Approx(predict_gnp(300, 0.3).chi_predicted).epsilon(1e-12));
  CHECK(two.chi_predicted > 0.0);
}

TEST_CASE("middle regime w* equals the quadratic ratio") {
  for (long n1 = 1; n1 <= 6; ++n1)
    for (long n2 = 1; n2 <= 6; ++n2)
      for (double p11 : {0.2, 0.5, 0.8})
        for (double p22 : {0.3, 0.6}) {
          const auto th = two_block_thresholds(n1, n2, p11, p22);
          for (double s : {0.0, 0.3, 0.7, 1.0}) {
            const double p12 = th.p_low + s * (th.p_bar - th.p_low);
            const ModelInstance m(BlockVector::integral({n1, n2}), ProbMatrix({{p11, p12}, {p12, p22}}));
            CHECK(w_star_bruteforce(m.sizes, m.q).w_sum ==
                  doctest::Approx(quadratic_form(m.sizes, m.q) / m.sizes.norm()).epsilon(1e-9));
          }
        }
}

TEST_CASE("percolation predictions") {
  const auto k1 = predict_percolation(BlowUpSpec({{0}}, BlockVector::integral({400})), 0.3, 1);
  CHECK(k1.chi_predicted == doctest::Approx(predict_gnp(400, 0.3).chi_predicted).epsilon(1e-12));
  const auto k2 = predict_percolation(BlowUpSpec({{0, 1}, {1, 0}}, BlockVector::integral({2, 3})), 0.5, 1);
  CHECK(k2.inputs_echo.at("chi_G").get<double>() == doctest::Approx(5.0));
  const auto e = predict_percolation(BlowUpSpec({{0, 0}, {0, 0}}, BlockVector::integral({2, 3})), 0.5, 1);
  CHECK(e.inputs_echo.at("chi_G").get<double>() == doctest::Approx(3.0));
  CHECK_THROWS_AS(predict_percolation(BlowUpSpec({{0}}, BlockVector::integral({4})), 0.1, 1), PredictionError);
}

TEST_CASE("Chung-Lu predictions") {
  const std::vector<double> ones(500, 1.0);
  CHECK(predict_chung_lu(ones, 0.01, ChungLuKind::times).chi_predicted ==
        doctest::Approx(0.01 * 500 / (2 * std::log(5.0))));
  CHECK(predict_chung_lu(ones, 0.01, ChungLuKind::times).chi_predicted ==
        doctest::Approx(predict_gnp(500, 0.01).chi_predicted).epsilon(0.01));
  const std::vector<double> halves(400, 0.5);
  CHECK(predict_chung_lu(halves, 0.3, ChungLuKind::plus).chi_predicted ==
        doctest::Approx(0.3 / std::log(120.0) * 200));
  CHECK_THROWS_AS(predict_chung_lu(halves, 0.6, ChungLuKind::plus), PredictionError);
  CHECK_THROWS_AS(predict_chung_lu(std::vector<double>(10, 0.0), 0.5, ChungLuKind::times), PredictionError);
}

TEST_CASE("prefix scan equals the subset maximum") {
  std::vector<double> spike(12, 0.1);
  spike[0] = 1.0;
  CHECK(chung_lu_prefix_max(spike).first == doctest::Approx(chung_lu_subset_max_bruteforce(spike)).epsilon(1e-12));
  Rng rng(73);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> u(1 + rng.below(12));
    for (auto& x : u) x = rng.uniform();
    CHECK(chung_lu_prefix_max(u).first == doctest::Approx(chung_lu_subset_max_bruteforce(u)).epsilon(1e-12));
  }
}

TEST_CASE("bucketed bracket narrows around the exact value") {
  for (auto kind : {ChungLuKind::times, ChungLuKind::plus})
    for (std::uint64_t s = 0; s < 3; ++s) {
      Rng rng(80 + s);
      std::vector<double> u(300);
      for (auto& x : u) x = rng.uniform();
      const double p = kind == ChungLuKind::times ? 0.1 : 0.05;
      const double exact = predict_chung_lu(u, p, kind).chi_predicted;
      double width = std::numeric_limits<double>::infinity();
      for (std::size_t b : {2, 4, 8, 16}) {
        const auto [lo, hi] = chung_lu_bucket_bracket(u, p, kind, b, 1);
        CHECK(lo <= exact);
        CHECK(exact <= hi);
        CHECK(hi - lo < width);
        width = hi - lo;
      }
    }
}

TEST_CASE("prediction json") {
  const auto j = to_json(predict_two_block(10, 10, 0.5, 0.5, 0.2));
  CHECK(j.at("regime") == "middle");
  CHECK(j.at("normalization") == "sigma_form");
  CHECK(j.contains("sigma"));
  CHECK(normalization_from_string("qstar") == Normalization::qstar_form);
  CHECK_THROWS_AS(normalization_from_string("other"), PredictionError);
}
