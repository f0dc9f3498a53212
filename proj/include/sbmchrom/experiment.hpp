#pragma once

// Seeded Monte Carlo driver: samples graphs over a parameter grid, measures
// chromatic numbers / weighted independence numbers / edge counts, and
// compares them with the closed-form predictions.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sbmchrom/chromatic.hpp"

namespace sbmchrom {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest graph accepted by the exact chromatic method in experiments.
inline constexpr long kExactChiGuard = 150;

struct ExperimentConfig {
  std::string name = "experiment";
  nlohmann::json model;  ///< base model spec with a "kind" field
  nlohmann::json grid = nlohmann::json::object();  ///< key -> list of values, swept as a product
  int replicates = 1;
  std::uint64_t base_seed = 0;
  std::vector<std::string> chi_methods;  ///< exact, dsatur, extraction
  std::vector<std::string> measures;     ///< chi, alpha_h, edge_count
  double epsilon = 0.2;
  long long budget = kDefaultChromaticBudget;
  std::string alpha_mode = "heuristic";
  int threads = 0;  ///< 0 = hardware concurrency

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Model specs of all grid points, in odometer order over the grid keys
/// (sorted by name, last key fastest).
std::vector<nlohmann::json> expand_grid(const ExperimentConfig& cfg);

struct ReportRow {
  int point = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string kind;
  long n = 0;
  std::size_t k = 0;
  nlohmann::json params = nlohmann::json::object();  ///< swept values of this point
  std::string measure;
  std::string method;
  std::string status = "ok";
  std::optional<double> value;
  std::optional<double> value_upper;
  std::optional<double> pred_qstar;
  std::optional<double> pred_sigma;
  std::optional<double> ratio_qstar;
  std::optional<double> ratio_sigma;
  std::string detail;
  double runtime_ms = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
};

/// Seed of replicate r at grid point i: mix(mix(base, i), r).
std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t point, std::uint64_t replicate);

/// Runs every grid point x replicate; rows come back in (point, replicate,
/// measure, method) order regardless of the thread count. Solver failures are
/// recorded in the status column.
Report run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kReportHeader = "# sbmchrom-report v1";

/// CSV body (versioned comment line + column header + rows). Contains no
/// timing data, so reruns are byte-identical.
std::string report_csv(const Report& r);
std::string report_timing_csv(const Report& r);

/// Per (point, measure, method): row counts, median and IQR of the value and
/// of both ratios.
nlohmann::json report_summary(const Report& r);

/// Writes `path`, `path.summary.json` and `path.timing.csv`.
void write_report(const Report& r, const std::string& path);

/// Rows of a report CSV as column -> text maps (comment lines skipped).
std::vector<std::vector<std::string>> parse_csv(const std::string& text, std::vector<std::string>* header);

/// Three-column table (group, x, y) from a report CSV. `x`/`y`/`group` name
/// report columns or "params.<key>"; rows with empty x or y are dropped and the
/// rest sorted by group, then numerically by x. `measure`, when nonempty,
/// keeps only rows of that measure.
std::string emit_plotdata(const std::string& report_text, const std::string& x, const std::string& y,
                          const std::string& group = "method", const std::string& measure = "");

double median_of(std::vector<double> v);
/// Linear-interpolation quantile (type 7).
double quantile_of(std::vector<double> v, double prob);

}  // namespace sbmchrom
