#pragma once

// Closed-form chromatic-number predictions. Each prediction is reported in
// two normalisations of the denominator: 2 (1 - sigma) ln ||n|| and the
// finite-n form 2 ln(q* ||n||).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sbmchrom/graph.hpp"
#include "sbmchrom/model.hpp"

namespace sbmchrom {

class PredictionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Normalization { sigma_form, qstar_form };

struct Prediction {
  double chi_predicted = 0.0;  ///< value in the selected normalisation
  Normalization normalization = Normalization::qstar_form;
  double sigma_used = 0.0;
  std::optional<double> sigma_form;  ///< empty when the denominator is not positive
  std::optional<double> qstar_form;
  std::optional<std::string> regime;
  nlohmann::json inputs_echo = nlohmann::json::object();
};

enum class Regime { below, middle, above };

struct TwoBlockThresholds {
  double p_bar = 0.0;
  double p_low = 0.0;
  /// Regime of the supplied p12; boundaries count as middle.
  std::optional<Regime> regime;
};

/// clamp(-ln q* / ln ||n||, 0, 1/4 - 1e-9), or the model's sigma_hint.
double sigma_estimate(const ModelInstance& m);

/// n ln(1/(1-p)) / (2 ln(pn)). Reported as sigma_form with sigma = -ln p / ln n;
/// qstar_form uses ln(q n) in the denominator.
Prediction predict_gnp(long n, double p);

/// wstar / (2 (1 - sigma) ln ||n||) and wstar / (2 ln(q* ||n||)).
Prediction predict_sbm(const ModelInstance& m, double wstar, Normalization primary = Normalization::qstar_form);

TwoBlockThresholds two_block_thresholds(long n1, long n2, double p11, double p22,
                                        std::optional<double> p12 = std::nullopt);

/// Case formula of the two-block theorem for the regime of p12.
Prediction predict_two_block(long n1, long n2, double p11, double p22, double p12,
                             Normalization primary = Normalization::sigma_form);

/// ln(1/(1-p)) / (2 ln(p ||n||)) times w*(n, I + A_H). The integer oracle is
/// used for w* when its guard allows, the local search otherwise.
Prediction predict_percolation(const BlowUpSpec& spec, double p, std::uint64_t seed = 0);

/// max over nonempty U of (sum_{i in U} u_i)^2 / |U|, by a prefix scan of u
/// sorted in decreasing order. Returns the maximiser's size alongside.
std::pair<double, std::size_t> chung_lu_prefix_max(const std::vector<double>& u);

/// Same quantity by exhaustive subset search (n <= 20).
double chung_lu_subset_max_bruteforce(const std::vector<double>& u);

/// times: p max_U (sum u)^2/|U| / (2 ln(pn)); plus: p sum u / ln(pn).
Prediction predict_chung_lu(const std::vector<double>& u, double p, ChungLuKind kind);

/// Predictions from the lower and upper bucketed block models, both over the
/// exact Chung-Lu denominator 2 ln(pn).
std::pair<double, double> chung_lu_bucket_bracket(const std::vector<double>& u, double p, ChungLuKind kind,
                                                  std::size_t buckets, std::uint64_t seed = 0);

const char* to_string(Normalization n) noexcept;
const char* to_string(Regime r) noexcept;
Normalization normalization_from_string(const std::string& s);

nlohmann::json to_json(const Prediction& p);

}  // namespace sbmchrom
