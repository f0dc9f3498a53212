#include "sbmchrom/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "sbmchrom/functionals.hpp"
#include "sbmchrom/io.hpp"
#include "sbmchrom/predictions.hpp"
#include "sbmchrom/rng.hpp"

namespace sbmchrom {

using nlohmann::json;

namespace {

const std::vector<std::string> kKinds = {"gnp", "sbm", "two-block", "blowup-percolation", "chunglu-times",
                                         "chunglu-plus"};
const std::vector<std::string> kMethods = {"exact", "dsatur", "extraction"};
const std::vector<std::string> kMeasures = {"chi", "alpha_h", "edge_count"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& a = j.at(key);
  if (!a.is_array()) throw ConfigError(std::string(key) + " must be a list");
  return a.get<std::vector<std::string>>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    if (!j.contains("model") || !j.at("model").is_object()) throw ConfigError("config needs a model object");
    c.model = j.at("model");
    c.grid = j.value("grid", json::object());
    if (!c.grid.is_object()) throw ConfigError("grid must be an object of lists");
    for (const auto& [key, values] : c.grid.items())
      if (!values.is_array() || values.empty()) throw ConfigError("grid entry '" + key + "' must be a nonempty list");
    c.replicates = j.value("replicates", 1);
    c.base_seed = j.value("base_seed", std::uint64_t{0});
    c.chi_methods = string_list(j, "chi_methods");
    c.measures = string_list(j, "measures");
    c.epsilon = j.value("epsilon", c.epsilon);
    c.budget = j.value("budget", c.budget);
    c.alpha_mode = j.value("alpha_mode", c.alpha_mode);
    c.threads = j.value("threads", 0);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.replicates < 1) throw ConfigError("replicates must be >= 1");
  if (c.measures.empty()) throw ConfigError("at least one measure is required");
  for (const auto& m : c.measures)
    if (!contains(kMeasures, m)) throw ConfigError("unknown measure '" + m + "'");
  if (contains(c.measures, "chi") && c.chi_methods.empty()) c.chi_methods = {"dsatur"};
  for (const auto& m : c.chi_methods)
    if (!contains(kMethods, m)) throw ConfigError("unknown chi method '" + m + "'");
  if (c.alpha_mode != "exact" && c.alpha_mode != "heuristic") throw ConfigError("alpha_mode must be exact or heuristic");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (c.budget < 1) throw ConfigError("budget must be positive");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  const auto kind = c.model.value("kind", std::string());
  if (!contains(kKinds, kind)) throw ConfigError("unknown model kind '" + kind + "'");
  return c;
}

json ExperimentConfig::to_json() const {
  return json{{"name", name},         {"model", model},       {"grid", grid},         {"replicates", replicates},
              {"base_seed", base_seed}, {"chi_methods", chi_methods}, {"measures", measures}, {"epsilon", epsilon},
              {"budget", budget},     {"alpha_mode", alpha_mode}};
}

std::vector<json> expand_grid(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, json>> axes;
  for (const auto& [key, values] : cfg.grid.items()) axes.emplace_back(key, values);
  std::vector<json> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    json spec = cfg.model;
    json swept = json::object();
    for (std::size_t a = 0; a < axes.size(); ++a) {
      spec[axes[a].first] = axes[a].second[idx[a]];
      swept[axes[a].first] = axes[a].second[idx[a]];
    }
    spec["__swept"] = swept;
    points.push_back(std::move(spec));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
    if (axes.empty()) return points;
  }
}

std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t point, std::uint64_t replicate) {
  return mix_seed(mix_seed(base, point), replicate);
}

namespace {

struct PointPredictions {
  std::optional<double> qstar, sigma;
  std::string note;
};

// Everything about a grid point that does not depend on the replicate.
struct Point {
  std::string kind;
  json swept;
  long n = 0;
  std::size_t k = 0;
  std::optional<ModelInstance> model;  // absent for Chung-Lu
  std::function<SbmGraph(std::uint64_t)> sample;
  PointPredictions chi, alpha;
  double expected_edges = 0.0;
};

std::optional<double> positive(std::optional<double> v) {
  if (v && *v > 0.0 && std::isfinite(*v)) return v;
  return std::nullopt;
}

double expected_edges_of(const ModelInstance& m) {
  const auto n = m.sizes.counts();
  double e = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = i; j < n.size(); ++j) {
      const double pairs = i == j ? 0.5 * n[i] * (n[i] - 1.0) : static_cast<double>(n[i]) * n[j];
      e += pairs * m.probs(i, j);
    }
  return e;
}

PointPredictions alpha_predictions(const ModelInstance& m) {
  PointPredictions out;
  const double qs = q_star(m.q), norm = m.sizes.norm();
  if (qs > 0.0 && norm >= 2.0) {
    if (std::log(qs * norm) > 0.0) out.qstar = std::log(qs * norm);
    out.sigma = (1.0 - sigma_estimate(m)) * std::log(norm);
  } else {
    out.note = "alpha_h prediction needs q* > 0 and ||n|| >= 2";
  }
  return out;
}

void fill_chi(PointPredictions& p, const std::function<Prediction()>& make) {
  try {
    const auto pr = make();
    p.qstar = pr.qstar_form;
    p.sigma = pr.sigma_form;
  } catch (const std::exception& e) {
    p.note = std::string("chi prediction unavailable: ") + e.what();
  }
}

std::vector<double> weights_of(const json& spec) {
  std::vector<double> u;
  if (spec.contains("u")) {
    u = spec.at("u").get<std::vector<double>>();
  } else {
    const long n = spec.at("n").get<long>();
    const auto range = spec.value("u_range", std::vector<double>{1.0, 1.0});
    if (range.size() != 2) throw ConfigError("u_range must be [lo, hi]");
    for (long t = 0; t < n; ++t)
      u.push_back(n == 1 ? range[0] : range[0] + (range[1] - range[0]) * static_cast<double>(t) / static_cast<double>(n - 1));
  }
  std::sort(u.begin(), u.end());
  return u;
}

Point materialize(const json& spec, std::uint64_t point_seed) {
  Point pt;
  pt.kind = spec.at("kind").get<std::string>();
  pt.swept = spec.value("__swept", json::object());
  if (pt.kind == "gnp") {
    const long n = spec.at("n").get<long>();
    const double p = spec.at("p").get<double>();
    ModelInstance m(BlockVector::integral({n}), ProbMatrix(std::vector<std::vector<double>>{{p}}));
    fill_chi(pt.chi, [&] { return predict_gnp(n, p); });
    pt.model = m;
  } else if (pt.kind == "sbm") {
    ModelInstance m = model_from_json(spec);
    double wstar = 0.0;
    try {
      wstar = w_star_bruteforce(m.sizes, m.q).w_sum;
    } catch (const InstanceTooLarge&) {
      wstar = w_star_solve(m.sizes, m.q, kDefaultRestarts, point_seed).w_sum;
    }
    if (wstar == 0.0) {
      pt.chi.qstar = pt.chi.sigma = 0.0;
    } else {
      fill_chi(pt.chi, [&] { return predict_sbm(m, wstar); });
    }
    pt.model = m;
  } else if (pt.kind == "two-block") {
    const long n1 = spec.at("n1").get<long>(), n2 = spec.at("n2").get<long>();
    const double p11 = spec.at("p11").get<double>(), p22 = spec.at("p22").get<double>(),
                 p12 = spec.at("p12").get<double>();
    ModelInstance m(BlockVector::integral({n1, n2}), ProbMatrix({{p11, p12}, {p12, p22}}));
    fill_chi(pt.chi, [&] { return predict_two_block(n1, n2, p11, p22, p12); });
    try {
      pt.swept["regime"] = to_string(*two_block_thresholds(n1, n2, p11, p22, p12).regime);
    } catch (const PredictionError&) {
    }
    pt.model = m;
  } else if (pt.kind == "blowup-percolation") {
    const BlowUpSpec bs(spec.at("H").get<std::vector<std::vector<int>>>(),
                        BlockVector::integral(spec.at("sizes").get<std::vector<long>>()));
    const double p = spec.at("p").get<double>();
    pt.model = blow_up_as_model(bs, p);
    fill_chi(pt.chi, [&] { return predict_percolation(bs, p, point_seed); });
    const SbmGraph base = blow_up(bs);
    pt.sample = [base, p](std::uint64_t seed) { return percolate(base, p, seed); };
  } else {
    const auto kind = chung_lu_kind_from_string(pt.kind.substr(std::string("chunglu-").size()));
    const auto u = weights_of(spec);
    const double p = spec.at("p").get<double>();
    const auto buckets = spec.value("buckets", std::size_t{4});
    std::vector<int> block_of;
    for (double x : u) block_of.push_back(static_cast<int>(chung_lu_cell(x, buckets)));
    pt.k = buckets;
    pt.n = static_cast<long>(u.size());
    fill_chi(pt.chi, [&] { return predict_chung_lu(u, p, kind); });
    pt.alpha.note = "alpha_h is defined for block models only";
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = a + 1; b < u.size(); ++b) pt.expected_edges += kind == ChungLuKind::times ? p * u[a] * u[b] : p * (u[a] + u[b]);
    pt.sample = [u, p, kind, block_of, buckets](std::uint64_t seed) {
      const auto g = sample_chung_lu(u, p, kind, seed, block_of);
      return SbmGraph(g.block_of(), g.edges(), g.provenance(), buckets);
    };
    return pt;
  }
  const ModelInstance& m = *pt.model;
  pt.n = m.total();
  pt.k = m.k();
  pt.expected_edges = expected_edges_of(m);
  pt.alpha = alpha_predictions(m);
  if (!pt.sample) pt.sample = [m](std::uint64_t seed) { return sample_sbm(m, seed); };
  return pt;
}

void set_predictions(ReportRow& row, const PointPredictions& p) {
  row.pred_qstar = p.qstar;
  row.pred_sigma = p.sigma;
  if (!p.note.empty()) row.detail = p.note;
}

void set_ratios(ReportRow& row) {
  if (!row.value || row.status != "ok") return;
  if (positive(row.pred_qstar)) row.ratio_qstar = *row.value / *row.pred_qstar;
  if (positive(row.pred_sigma)) row.ratio_sigma = *row.value / *row.pred_sigma;
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<ReportRow> run_task(const ExperimentConfig& cfg, const Point& pt, int point, int replicate) {
  const std::uint64_t seed = replicate_seed(cfg.base_seed, static_cast<std::uint64_t>(point),
                                            static_cast<std::uint64_t>(replicate));
  ReportRow base;
  base.point = point;
  base.replicate = replicate;
  base.seed = seed;
  base.kind = pt.kind;
  base.n = pt.n;
  base.k = pt.k;
  base.params = pt.swept;

  std::vector<ReportRow> rows;
  SbmGraph g;
  try {
    g = pt.sample(seed);
  } catch (const std::exception& e) {
    ReportRow row = base;
    row.measure = "sample";
    row.method = "-";
    row.status = "error";
    row.detail = e.what();
    rows.push_back(row);
    return rows;
  }

  std::uint64_t salt = 0;
  for (const auto& measure : cfg.measures) {
    if (measure == "edge_count") {
      ReportRow row = base;
      row.measure = measure;
      row.method = "count";
      row.value = static_cast<double>(g.num_edges());
      row.pred_qstar = row.pred_sigma = pt.expected_edges;
      set_ratios(row);
      rows.push_back(row);
    } else if (measure == "alpha_h") {
      ReportRow row = base;
      row.measure = measure;
      row.method = cfg.alpha_mode;
      set_predictions(row, pt.alpha);
      if (!pt.model) {
        row.status = "unsupported";
      } else {
        try {
          const auto mode = cfg.alpha_mode == "exact" ? AlphaMode::exact : AlphaMode::heuristic;
          row.runtime_ms = timed([&] { row.value = alpha_h(*pt.model, g, mode, mix_seed(seed, ++salt)).h_value; });
        } catch (const GuardExceeded& e) {
          row.status = "guard_exceeded";
          row.detail = e.what();
        } catch (const std::exception& e) {
          row.status = "error";
          row.detail = e.what();
        }
      }
      set_ratios(row);
      rows.push_back(row);
    } else {
      for (const auto& method : cfg.chi_methods) {
        ReportRow row = base;
        row.measure = measure;
        row.method = method;
        set_predictions(row, pt.chi);
        try {
          if (method == "exact") {
            if (pt.n > kExactChiGuard) throw ConfigError("exact chi limited to " + std::to_string(kExactChiGuard) + " vertices");
            row.runtime_ms = timed([&] { row.value = exact_chromatic(g, cfg.budget); });
          } else if (method == "dsatur") {
            row.runtime_ms = timed([&] { row.value = dsatur_colouring(g, mix_seed(seed, ++salt)).num_colours; });
          } else if (!pt.model) {
            row.status = "unsupported";
            row.detail = "extraction needs a block model";
          } else {
            Colouring c;
            row.runtime_ms = timed([&] { c = balanced_extraction_colouring(*pt.model, g, cfg.epsilon, mix_seed(seed, ++salt)); });
            row.value = c.num_colours;
            if (!is_proper(g, c)) row.status = "improper";
          }
        } catch (const BudgetExceeded& e) {
          row.status = "budget_exceeded";
          row.value = e.lower();
          row.value_upper = e.upper();
        } catch (const std::exception& e) {
          row.status = "error";
          row.detail = e.what();
        }
        set_ratios(row);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  const auto specs = expand_grid(cfg);
  std::vector<Point> points;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    try {
      points.push_back(materialize(specs[i], mix_seed(cfg.base_seed, i)));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("grid point " + std::to_string(i) + ": " + e.what());
    }
    if (contains(cfg.chi_methods, "exact") && contains(cfg.measures, "chi") && points.back().n > kExactChiGuard)
      throw ConfigError("exact chi requested for a point with more than " + std::to_string(kExactChiGuard) + " vertices");
  }

  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t tasks = points.size() * reps;
  std::vector<std::vector<ReportRow>> results(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;)
      results[t] = run_task(cfg, points[t / reps], static_cast<int>(t / reps), static_cast<int>(t % reps));
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(tasks, cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Report r;
  r.config = cfg;
  for (auto& chunk : results)
    for (auto& row : chunk) r.rows.push_back(std::move(row));
  return r;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const std::vector<std::string> kColumns = {"point",      "replicate",  "seed",        "kind",        "n",
                                           "k",          "params",     "measure",     "method",      "status",
                                           "value",      "value_upper", "pred_qstar", "pred_sigma", "ratio_qstar",
                                           "ratio_sigma", "detail"};

std::string join_columns(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + quote(cols[i]);
  return out;
}

}  // namespace

std::string report_csv(const Report& r) {
  std::string out = std::string(kReportHeader) + "\n" + join_columns(kColumns) + "\n";
  for (const auto& row : r.rows) {
    out += join_columns({std::to_string(row.point), std::to_string(row.replicate), std::to_string(row.seed), row.kind,
                         std::to_string(row.n), std::to_string(row.k), row.params.dump(), row.measure, row.method,
                         row.status, fmt(row.value), fmt(row.value_upper), fmt(row.pred_qstar), fmt(row.pred_sigma),
                         fmt(row.ratio_qstar), fmt(row.ratio_sigma), row.detail});
    out += "\n";
  }
  return out;
}

std::string report_timing_csv(const Report& r) {
  std::string out = "point,replicate,measure,method,runtime_ms\n";
  for (const auto& row : r.rows)
    out += join_columns({std::to_string(row.point), std::to_string(row.replicate), row.measure, row.method,
                         fmt(row.runtime_ms)}) +
           "\n";
  return out;
}

double quantile_of(std::vector<double> v, double prob) {
  if (v.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median_of(std::vector<double> v) { return quantile_of(std::move(v), 0.5); }

json report_summary(const Report& r) {
  struct Acc {
    json params;
    long n = 0;
    int rows = 0, ok = 0;
    std::vector<double> value, rq, rs;
  };
  std::map<std::tuple<int, std::string, std::string>, Acc> groups;
  for (const auto& row : r.rows) {
    auto& a = groups[{row.point, row.measure, row.method}];
    a.params = row.params;
    a.n = row.n;
    ++a.rows;
    if (row.status != "ok") continue;
    ++a.ok;
    if (row.value) a.value.push_back(*row.value);
    if (row.ratio_qstar) a.rq.push_back(*row.ratio_qstar);
    if (row.ratio_sigma) a.rs.push_back(*row.ratio_sigma);
  }
  auto stats = [](const std::vector<double>& v) -> json {
    if (v.empty()) return nullptr;
    return json{{"median", median_of(v)}, {"q1", quantile_of(v, 0.25)}, {"q3", quantile_of(v, 0.75)},
                {"iqr", quantile_of(v, 0.75) - quantile_of(v, 0.25)}};
  };
  json points = json::array();
  for (const auto& [key, a] : groups)
    points.push_back({{"point", std::get<0>(key)},
                      {"measure", std::get<1>(key)},
                      {"method", std::get<2>(key)},
                      {"params", a.params},
                      {"n", a.n},
                      {"rows", a.rows},
                      {"ok", a.ok},
                      {"value", stats(a.value)},
                      {"ratio_qstar", stats(a.rq)},
                      {"ratio_sigma", stats(a.rs)}});
  return json{{"format", "sbmchrom-summary v1"}, {"config", r.config.to_json()}, {"groups", std::move(points)}};
}

void write_report(const Report& r, const std::string& path) {
  write_text_file(path, report_csv(r));
  write_text_file(path + ".summary.json", report_summary(r).dump(2) + "\n");
  write_text_file(path + ".timing.csv", report_timing_csv(r));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text, std::vector<std::string>* header) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, at_line_start = true, comment = false, any = false;
  auto end_record = [&] {
    if (any) {
      record.push_back(field);
      rows.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (at_line_start) {
      at_line_start = false;
      comment = c == '#';
    }
    if (comment) {
      if (c == '\n') at_line_start = true, comment = false;
      continue;
    }
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n') {
      end_record();
      at_line_start = true;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  end_record();
  if (header) {
    if (rows.empty()) throw std::invalid_argument("report has no header row");
    *header = rows.front();
    rows.erase(rows.begin());
  }
  return rows;
}

std::string emit_plotdata(const std::string& report_text, const std::string& x, const std::string& y,
                          const std::string& group, const std::string& measure) {
  std::vector<std::string> header;
  const auto rows = parse_csv(report_text, &header);
  auto column = [&](const std::string& name) -> std::function<std::string(const std::vector<std::string>&)> {
    if (name.rfind("params.", 0) == 0) {
      const auto it = std::find(header.begin(), header.end(), "params");
      if (it == header.end()) throw std::invalid_argument("report has no params column");
      const auto idx = static_cast<std::size_t>(it - header.begin());
      const std::string key = name.substr(7);
      return [idx, key](const std::vector<std::string>& row) -> std::string {
        const auto j = json::parse(row.at(idx), nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains(key)) return "";
        const auto& v = j.at(key);
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
    }
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("unknown column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    return [idx](const std::vector<std::string>& row) { return row.at(idx); };
  };
  const auto gx = column(x), gy = column(y), gg = column(group);
  const auto gm = column("measure");
  struct Out {
    std::string g, xs, ys;
    double xv;
    std::size_t order;
  };
  std::vector<Out> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!measure.empty() && gm(rows[i]) != measure) continue;
    const auto xs = gx(rows[i]), ys = gy(rows[i]);
    if (xs.empty() || ys.empty()) continue;
    double xv = 0.0;
    try {
      xv = std::stod(xs);
    } catch (const std::exception&) {
      xv = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back({gg(rows[i]), xs, ys, xv, i});
  }
  std::stable_sort(out.begin(), out.end(), [](const Out& a, const Out& b) {
    if (a.g != b.g) return a.g < b.g;
    if (std::isnan(a.xv) || std::isnan(b.xv)) return !std::isnan(a.xv) && std::isnan(b.xv);
    return a.xv < b.xv;
  });
  std::string text = join_columns({group, x, y}) + "\n";
  for (const auto& o : out) text += join_columns({o.g, o.xs, o.ys}) + "\n";
  return text;
}

}  // namespace sbmchrom
