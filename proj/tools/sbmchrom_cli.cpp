// Command-line front end: solvers, generators, colouring, predictions and the
// experiment driver. Every subcommand prints JSON (or writes the requested file).

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbmchrom/chromatic.hpp"
#include "sbmchrom/experiment.hpp"
#include "sbmchrom/functionals.hpp"
#include "sbmchrom/io.hpp"
#include "sbmchrom/predictions.hpp"

using namespace sbmchrom;
using nlohmann::json;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

BlockVector point_or_sizes(const ModelInstance& m, const std::vector<double>& x) {
  if (x.empty()) return m.sizes;
  if (x.size() != m.k()) throw ModelError("--x must have k entries");
  return BlockVector(x);
}

json parts_json(const Decomposition& d) {
  json parts = json::array();
  for (const auto& p : d.parts) parts.push_back(std::vector<double>(p.values().begin(), p.values().end()));
  return parts;
}

json bounds_json(const BlockVector& x, const QMatrix& q) {
  const auto b = w_star_bounds(x, q);
  return {{"lower", b.lower}, {"upper", b.upper}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chromatic numbers of stochastic block models: solvers, samplers and experiments"};
  app.require_subcommand(1);

  // solve-w
  std::string model_file, out_file;
  std::vector<double> x;
  auto* solve_w = app.add_subcommand("solve-w", "Corner maximum w(x, Q) of a model (x defaults to the block sizes)");
  solve_w->add_option("--model", model_file, "Model JSON")->required();
  solve_w->add_option("--x", x, "Vector x (comma separated)")->delimiter(',');

  // solve-wstar
  bool oracle = false;
  int restarts = kDefaultRestarts;
  std::uint64_t seed = 0;
  auto* solve_ws = app.add_subcommand("solve-wstar", "Decomposition functional w*(x, Q)");
  solve_ws->add_option("--model", model_file, "Model JSON")->required();
  solve_ws->add_option("--x", x, "Vector x (comma separated)")->delimiter(',');
  solve_ws->add_flag("--oracle", oracle, "Exact integer brute force; fails when the guard trips");
  solve_ws->add_option("--restarts", restarts, "Random restarts of the local search");
  solve_ws->add_option("--seed", seed, "Seed");

  // gen
  std::string gen_kind, input, input2;
  double p = 0.5;
  std::vector<double> weights;
  std::size_t buckets = 0;
  auto* gen = app.add_subcommand("gen", "Sample or construct a graph");
  gen->add_option("--model", gen_kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"sbm", "blowup", "percolate", "chunglu-times", "chunglu-plus", "union"}));
  gen->add_option("--input", input,
                  "sbm: model JSON; blowup: {\"H\", \"sizes\"} JSON; percolate/union: graph JSON; "
                  "chunglu: {\"u\": [...]} JSON (or use --u)");
  gen->add_option("--input2", input2, "Second graph for union");
  gen->add_option("--p", p, "Percolation / Chung-Lu probability");
  gen->add_option("--u", weights, "Chung-Lu weights (comma separated)")->delimiter(',');
  gen->add_option("--buckets", buckets, "Chung-Lu: group vertices into this many weight cells (0 = one block per vertex)");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", out_file, "Output graph JSON (stdout when omitted)");

  // chromatic
  std::string graph_file, method = "dsatur";
  double epsilon = 0.2;
  long long budget = kDefaultChromaticBudget;
  auto* chrom = app.add_subcommand("chromatic", "Colour a graph");
  chrom->add_option("--graph", graph_file, "Graph JSON")->required();
  chrom->add_option("--model", model_file, "Model JSON (extraction)");
  chrom->add_option("--method", method, "Method")->check(CLI::IsMember({"exact", "dsatur", "extraction"}));
  chrom->add_option("--epsilon", epsilon, "Extraction slack in (0, 1)");
  chrom->add_option("--seed", seed, "Seed");
  chrom->add_option("--budget", budget, "Node budget of the exact search");

  // alpha
  std::string alpha_mode = "heuristic";
  auto* alpha = app.add_subcommand("alpha", "Weighted independence number alpha_h");
  alpha->add_option("--graph", graph_file, "Graph JSON")->required();
  alpha->add_option("--model", model_file, "Model JSON")->required();
  alpha->add_option("--mode", alpha_mode, "exact or heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
  alpha->add_option("--seed", seed, "Seed");

  // predict
  std::string theorem = "sbm", normalization = "qstar_form";
  long n_gnp = 0;
  std::vector<long> sizes2;
  std::vector<double> probs3;
  auto* predict = app.add_subcommand("predict", "Closed-form chromatic-number prediction");
  predict->add_option("--theorem", theorem, "gnp | sbm | two-block | percolation | chunglu-times | chunglu-plus")
      ->check(CLI::IsMember({"gnp", "sbm", "two-block", "percolation", "chunglu-times", "chunglu-plus"}));
  predict->add_option("--model", model_file, "Model JSON (sbm)");
  predict->add_option("--input", input, "Blow-up spec JSON (percolation) or {\"u\": [...]} (chunglu)");
  predict->add_option("--n", n_gnp, "Vertex count (gnp)");
  predict->add_option("--p", p, "Edge / percolation probability");
  predict->add_option("--sizes", sizes2, "n1,n2 (two-block)")->delimiter(',');
  predict->add_option("--probs", probs3, "p11,p22,p12 (two-block)")->delimiter(',');
  predict->add_option("--u", weights, "Chung-Lu weights")->delimiter(',');
  predict->add_option("--normalization", normalization, "sigma_form or qstar_form (sbm, two-block)");
  predict->add_option("--seed", seed, "Seed for the w* local search");

  // experiment
  std::string config_file;
  int threads = -1;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("--config", config_file, "Config JSON")->required();
  experiment->add_option("--out", out_file, "Report CSV (summary and timing files are written alongside)")->required();
  experiment->add_option("--threads", threads, "Worker threads (overrides the config)");

  // plotdata
  std::string report_file, x_axis, y_axis, group = "method", measure;
  auto* plot = app.add_subcommand("plotdata", "Extract (group, x, y) columns from a report");
  plot->add_option("--report", report_file, "Report CSV")->required();
  plot->add_option("--x", x_axis, "x column (or params.<key>)")->required();
  plot->add_option("--y", y_axis, "y column")->required();
  plot->add_option("--group", group, "Grouping column");
  plot->add_option("--measure", measure, "Keep only rows of this measure");
  plot->add_option("--out", out_file, "Output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_w) {
      const auto m = model_from_json(read_json_file(model_file));
      const auto xv = point_or_sizes(m, x);
      const auto sol = w_value(xv, m.q);
      emit({{"value", sol.value},
            {"support", sol.support},
            {"maximizer", std::vector<double>(sol.maximizer.values().begin(), sol.maximizer.values().end())},
            {"bounds", bounds_json(xv, m.q)},
            {"method", "corner-enumeration"}},
           "");
    } else if (*solve_ws) {
      const auto m = model_from_json(read_json_file(model_file));
      const auto xv = point_or_sizes(m, x);
      const auto d = oracle ? w_star_bruteforce(xv, m.q) : w_star_solve(xv, m.q, restarts, seed);
      emit({{"value", d.w_sum}, {"parts", parts_json(d)}, {"bounds", bounds_json(xv, m.q)}, {"method", d.method}}, "");
    } else if (*gen) {
      SbmGraph g;
      if (gen_kind == "sbm") {
        g = sample_sbm(model_from_json(read_json_file(input)), seed);
      } else if (gen_kind == "blowup") {
        const auto j = read_json_file(input);
        g = blow_up(BlowUpSpec(j.at("H").get<std::vector<std::vector<int>>>(),
                               BlockVector::integral(j.at("sizes").get<std::vector<long>>())));
      } else if (gen_kind == "percolate") {
        g = percolate(graph_from_json(read_json_file(input)), p, seed);
      } else if (gen_kind == "union") {
        g = union_graphs(graph_from_json(read_json_file(input)), graph_from_json(read_json_file(input2)));
      } else {
        std::vector<double> u = weights;
        if (u.empty()) u = read_json_file(input).at("u").get<std::vector<double>>();
        const auto kind = chung_lu_kind_from_string(gen_kind.substr(8));
        std::vector<int> blocks;
        if (buckets > 0) {
          std::sort(u.begin(), u.end());
          for (double w : u) blocks.push_back(static_cast<int>(chung_lu_cell(w, buckets)));
        }
        g = sample_chung_lu(u, p, kind, seed, blocks);
      }
      emit(graph_to_json(g), out_file);
    } else if (*chrom) {
      const auto g = graph_from_json(read_json_file(graph_file));
      const auto t0 = std::chrono::steady_clock::now();
      json out{{"method", method}};
      if (method == "exact") {
        try {
          out["chi_or_bound"] = exact_chromatic(g, budget);
          out["status"] = "ok";
        } catch (const BudgetExceeded& e) {
          out["chi_or_bound"] = {e.lower(), e.upper()};
          out["status"] = "budget_exceeded";
        }
        out["colour_sizes"] = json::array();
      } else {
        Colouring c;
        if (method == "dsatur") {
          c = dsatur_colouring(g, seed);
        } else {
          if (model_file.empty()) throw std::invalid_argument("extraction needs --model");
          c = balanced_extraction_colouring(model_from_json(read_json_file(model_file)), g, epsilon, seed);
        }
        out["chi_or_bound"] = c.num_colours;
        out["colour_sizes"] = c.colour_sizes();
        out["proper"] = is_proper(g, c);
        out["status"] = "ok";
      }
      out["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      emit(out, "");
    } else if (*alpha) {
      const auto g = graph_from_json(read_json_file(graph_file));
      const auto m = model_from_json(read_json_file(model_file));
      const auto r = alpha_h(m, g, alpha_mode == "exact" ? AlphaMode::exact : AlphaMode::heuristic, seed);
      emit({{"alpha_h", r.h_value}, {"best_set", r.best_set}, {"exact", r.exact}}, "");
    } else if (*predict) {
      const auto norm = normalization_from_string(normalization);
      Prediction pr;
      if (theorem == "gnp") {
        pr = predict_gnp(n_gnp, p);
      } else if (theorem == "sbm") {
        const auto m = model_from_json(read_json_file(model_file));
        double wstar = 0.0;
        std::string how = "oracle";
        try {
          wstar = w_star_bruteforce(m.sizes, m.q).w_sum;
        } catch (const InstanceTooLarge&) {
          wstar = w_star_solve(m.sizes, m.q, kDefaultRestarts, seed).w_sum;
          how = "local-search";
        }
        pr = predict_sbm(m, wstar, norm);
        pr.inputs_echo["wstar_method"] = how;
      } else if (theorem == "two-block") {
        if (sizes2.size() != 2 || probs3.size() != 3) throw std::invalid_argument("two-block needs --sizes n1,n2 and --probs p11,p22,p12");
        pr = predict_two_block(sizes2[0], sizes2[1], probs3[0], probs3[1], probs3[2], norm);
      } else if (theorem == "percolation") {
        const auto j = read_json_file(input);
        pr = predict_percolation(BlowUpSpec(j.at("H").get<std::vector<std::vector<int>>>(),
                                            BlockVector::integral(j.at("sizes").get<std::vector<long>>())),
                                 p, seed);
      } else {
        std::vector<double> u = weights;
        if (u.empty()) u = read_json_file(input).at("u").get<std::vector<double>>();
        pr = predict_chung_lu(u, p, chung_lu_kind_from_string(theorem.substr(8)));
      }
      emit(to_json(pr), "");
    } else if (*experiment) {
      auto cfg = ExperimentConfig::from_json(read_json_file(config_file));
      if (threads >= 0) cfg.threads = threads;
      const auto report = run_experiment(cfg);
      write_report(report, out_file);
      std::cout << json{{"rows", report.rows.size()}, {"report", out_file}}.dump() << "\n";
    } else if (*plot) {
      const auto text = emit_plotdata(read_text(report_file), x_axis, y_axis, group, measure);
      if (out_file.empty())
        std::cout << text;
      else
        write_text_file(out_file, text);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
