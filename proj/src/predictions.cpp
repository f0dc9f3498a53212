#include "sbmchrom/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sbmchrom/functionals.hpp"

namespace sbmchrom {

using nlohmann::json;

namespace {

std::optional<double> ratio_if_positive(double num, double den) {
  if (!(den > 0.0) || !std::isfinite(den)) return std::nullopt;
  return num / den;
}

Prediction assemble(double wstar, double norm, double qstar, double sigma, Normalization primary) {
  Prediction out;
  out.normalization = primary;
  out.sigma_used = sigma;
  out.sigma_form = ratio_if_positive(wstar, 2.0 * (1.0 - sigma) * std::log(norm));
  out.qstar_form = ratio_if_positive(wstar, 2.0 * std::log(qstar * norm));
  const auto& chosen = primary == Normalization::sigma_form ? out.sigma_form : out.qstar_form;
  if (!chosen) throw PredictionError(std::string("nonpositive denominator in ") + to_string(primary));
  out.chi_predicted = *chosen;
  return out;
}

}  // namespace

double sigma_estimate(const ModelInstance& m) {
  if (m.sigma_hint) return *m.sigma_hint;
  const double qs = q_star(m.q);
  if (!(qs > 0.0)) throw PredictionError("sigma is undefined when q* = 0");
  if (m.sizes.norm() < 2.0) throw PredictionError("sigma needs ||n|| >= 2");
  return std::clamp(-std::log(qs) / std::log(m.sizes.norm()), 0.0, 0.25 - 1e-9);
}

Prediction predict_gnp(long n, double p) {
  if (!(p > 0.0 && p < 1.0)) throw PredictionError("p must lie in (0, 1)");
  const double nd = static_cast<double>(n);
  if (!(p * nd > 1.0)) throw PredictionError("predict_gnp needs p n > 1");
  const double q = -std::log1p(-p);
  Prediction out;
  out.normalization = Normalization::sigma_form;
  out.sigma_used = -std::log(p) / std::log(nd);
  out.chi_predicted = nd * q / (2.0 * std::log(p * nd));
  out.sigma_form = out.chi_predicted;
  out.qstar_form = ratio_if_positive(nd * q, 2.0 * std::log(q * nd));
  out.inputs_echo = {{"model", "gnp"}, {"n", n}, {"p", p}};
  return out;
}

Prediction predict_sbm(const ModelInstance& m, double wstar, Normalization primary) {
  if (!(wstar >= 0.0) || !std::isfinite(wstar)) throw PredictionError("w* must be finite and nonnegative");
  if (m.sizes.norm() < 2.0) throw PredictionError("prediction needs ||n|| >= 2");
  auto out = assemble(wstar, m.sizes.norm(), q_star(m.q), sigma_estimate(m), primary);
  out.inputs_echo = {{"model", "sbm"}, {"sizes", m.sizes.counts()}, {"Q", m.q.rows()}, {"wstar", wstar}};
  return out;
}

TwoBlockThresholds two_block_thresholds(long n1, long n2, double p11, double p22, std::optional<double> p12) {
  if (!(p11 > 0.0 && p11 < 1.0 && p22 > 0.0 && p22 < 1.0)) throw PredictionError("p11 and p22 must lie in (0, 1)");
  if (n1 < 0 || n2 < 0 || n1 + n2 == 0) throw PredictionError("block sizes must be nonnegative and not both zero");
  const double q11 = -std::log1p(-p11), q22 = -std::log1p(-p22);
  const double a = static_cast<double>(n1), b = static_cast<double>(n2);
  // Thresholds in q-space: q_bar = (q11 + q22)/2 and
  // q_low = max(q11/2 - (n2/2n1) q22, q22/2 - (n1/2n2) q11); an empty block
  // sends its term to -infinity.
  const double q_bar = 0.5 * (q11 + q22);
  const double inf = std::numeric_limits<double>::infinity();
  const double t1 = n1 > 0 ? 0.5 * q11 - b / (2.0 * a) * q22 : -inf;
  const double t2 = n2 > 0 ? 0.5 * q22 - a / (2.0 * b) * q11 : -inf;
  const double q_low = std::max(t1, t2);
  TwoBlockThresholds out;
  out.p_bar = -std::expm1(-q_bar);
  out.p_low = std::max(0.0, -std::expm1(-q_low));
  if (p12) {
    if (!(*p12 >= 0.0 && *p12 < 1.0)) throw PredictionError("p12 must lie in [0, 1)");
    const double q12 = -std::log1p(-*p12);
    out.regime = q12 > q_bar ? Regime::above : q12 < q_low ? Regime::below : Regime::middle;
  }
  return out;
}

Prediction predict_two_block(long n1, long n2, double p11, double p22, double p12, Normalization primary) {
  const auto th = two_block_thresholds(n1, n2, p11, p22, p12);
  const ModelInstance m(BlockVector::integral({n1, n2}), ProbMatrix({{p11, p12}, {p12, p22}}));
  const double q11 = m.q(0, 0), q22 = m.q(1, 1);
  const double a = static_cast<double>(n1), b = static_cast<double>(n2);
  double numerator = 0.0;
  switch (*th.regime) {
    case Regime::middle: numerator = quadratic_form(m.sizes, m.q) / m.sizes.norm(); break;
    case Regime::above: numerator = a * q11 + b * q22; break;
    case Regime::below: numerator = std::max(a * q11, b * q22); break;
  }
  if (m.sizes.norm() < 2.0) throw PredictionError("prediction needs ||n|| >= 2");
  auto out = assemble(numerator, m.sizes.norm(), q_star(m.q), sigma_estimate(m), primary);
  out.regime = to_string(*th.regime);
  out.inputs_echo = {{"model", "two-block"}, {"n1", n1},     {"n2", n2},         {"p11", p11},
                     {"p22", p22},           {"p12", p12},   {"p_bar", th.p_bar}, {"p_low", th.p_low}};
  return out;
}

Prediction predict_percolation(const BlowUpSpec& spec, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw PredictionError("p must lie in (0, 1)");
  const double norm = spec.sizes.norm();
  if (!(p * norm > 1.0)) throw PredictionError("predict_percolation needs p ||n|| > 1");
  const std::size_t k = spec.k();
  SymMatrix qt(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) qt.set(i, j, (i == j || spec.h_adjacency[i][j]) ? 1.0 : 0.0);
  const QMatrix q_tilde(std::move(qt));
  double chi_g = 0.0;
  std::string method;
  try {
    chi_g = w_star_bruteforce(spec.sizes, q_tilde).w_sum;
    method = "oracle";
  } catch (const InstanceTooLarge&) {
    chi_g = w_star_solve(spec.sizes, q_tilde, kDefaultRestarts, seed).w_sum;
    method = "local-search";
  }
  const double q = -std::log1p(-p);
  Prediction out;
  out.normalization = Normalization::sigma_form;
  out.sigma_used = -std::log(p) / std::log(norm);
  out.chi_predicted = q * chi_g / (2.0 * std::log(p * norm));
  out.sigma_form = out.chi_predicted;
  out.qstar_form = ratio_if_positive(q * chi_g, 2.0 * std::log(q * norm));
  out.inputs_echo = {{"model", "blowup-percolation"}, {"H", spec.h_adjacency}, {"sizes", spec.sizes.counts()},
                     {"p", p},                        {"chi_G", chi_g},        {"chi_G_method", method}};
  return out;
}

std::pair<double, std::size_t> chung_lu_prefix_max(const std::vector<double>& u) {
  if (u.empty()) return {0.0, 0};
  std::vector<double> sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double best = -1.0, sum = 0.0;
  std::size_t arg = 0;
  for (std::size_t m = 1; m <= sorted.size(); ++m) {
    sum += sorted[m - 1];
    const double v = sum * sum / static_cast<double>(m);
    if (v > best) best = v, arg = m;
  }
  return {best, arg};
}

double chung_lu_subset_max_bruteforce(const std::vector<double>& u) {
  const std::size_t n = u.size();
  if (n > 20) throw PredictionError("subset enumeration is limited to 20 weights");
  double best = 0.0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    double sum = 0.0;
    int size = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (s >> i & 1u) sum += u[i], ++size;
    best = std::max(best, sum * sum / size);
  }
  return best;
}

Prediction predict_chung_lu(const std::vector<double>& u, double p, ChungLuKind kind) {
  if (kind == ChungLuKind::times && !(p > 0.0 && p < 1.0)) throw PredictionError("times model needs p in (0, 1)");
  if (kind == ChungLuKind::plus && !(p > 0.0 && p <= 0.5)) throw PredictionError("plus model needs p in (0, 1/2]");
  double total = 0.0;
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw PredictionError("weights must lie in [0, 1]");
    total += x;
  }
  if (!(total > 0.0)) throw PredictionError("weights must not all vanish");
  const double n = static_cast<double>(u.size());
  if (!(p * n > 1.0)) throw PredictionError("predict_chung_lu needs p n > 1");
  const double den = std::log(p * n);
  Prediction out;
  out.normalization = Normalization::sigma_form;
  out.sigma_used = -std::log(p) / std::log(n);
  if (kind == ChungLuKind::times) {
    const auto [best, size] = chung_lu_prefix_max(u);
    out.chi_predicted = p * best / (2.0 * den);
    out.inputs_echo = {{"model", "chunglu-times"}, {"n", u.size()}, {"p", p}, {"prefix_max", best}, {"prefix_size", size}};
  } else {
    out.chi_predicted = p * total / den;
    out.inputs_echo = {{"model", "chunglu-plus"}, {"n", u.size()}, {"p", p}, {"weight_sum", total}};
  }
  out.sigma_form = out.chi_predicted;
  return out;
}

std::pair<double, double> chung_lu_bucket_bracket(const std::vector<double>& u, double p, ChungLuKind kind,
                                                  std::size_t buckets, std::uint64_t seed) {
  const auto [lo, hi] = chung_lu_model(u, p, kind, buckets);
  const double den = 2.0 * std::log(p * static_cast<double>(u.size()));
  if (!(den > 0.0)) throw PredictionError("bucket bracket needs p n > 1");
  const double w_lo = w_star_solve(lo.sizes, lo.q, kDefaultRestarts, seed).w_sum;
  const double w_hi = w_star_solve(hi.sizes, hi.q, kDefaultRestarts, seed).w_sum;
  return {w_lo / den, w_hi / den};
}

const char* to_string(Normalization n) noexcept {
  return n == Normalization::sigma_form ? "sigma_form" : "qstar_form";
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::below: return "below";
    case Regime::middle: return "middle";
    case Regime::above: return "above";
  }
  return "?";
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "sigma_form" || s == "sigma") return Normalization::sigma_form;
  if (s == "qstar_form" || s == "qstar") return Normalization::qstar_form;
  throw PredictionError("unknown normalization '" + s + "'");
}

json to_json(const Prediction& p) {
  json j{{"chi_predicted", p.chi_predicted},
         {"normalization", to_string(p.normalization)},
         {"sigma", p.sigma_used},
         {"sigma_form", p.sigma_form ? json(*p.sigma_form) : json(nullptr)},
         {"qstar_form", p.qstar_form ? json(*p.qstar_form) : json(nullptr)},
         {"inputs", p.inputs_echo}};
  if (p.regime) j["regime"] = *p.regime;
  return j;
}

}  // namespace sbmchrom
