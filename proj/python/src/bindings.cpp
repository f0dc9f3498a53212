// Thin pybind11 layer. Structured results cross the boundary as JSON text and
// are decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbmchrom/chromatic.hpp"
#include "sbmchrom/experiment.hpp"
#include "sbmchrom/functionals.hpp"
#include "sbmchrom/io.hpp"
#include "sbmchrom/predictions.hpp"

namespace py = pybind11;
using namespace sbmchrom;
using nlohmann::json;

namespace {

using Rows = std::vector<std::vector<double>>;

ModelInstance make_model(const std::vector<long>& sizes, const Rows& p) {
  return ModelInstance(BlockVector::integral(sizes), ProbMatrix(p));
}

std::string dump_decomposition(const Decomposition& d) {
  json parts = json::array();
  for (const auto& part : d.parts) parts.push_back(std::vector<double>(part.values().begin(), part.values().end()));
  return json{{"w_sum", d.w_sum}, {"parts", parts}, {"method", d.method}}.dump();
}

std::string dump_colouring(const Colouring& c) {
  return json{{"num_colours", c.num_colours}, {"colour_of", c.colour_of}, {"method", c.method}}.dump();
}

}  // namespace

PYBIND11_MODULE(_sbmchrom, m) {
  m.doc() = "Chromatic numbers of stochastic block model graphs";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<PredictionError>(m, "PredictionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", PyExc_RuntimeError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);

  py::class_<SbmGraph>(m, "Graph")
      .def(py::init([](const std::vector<int>& block_of, const std::vector<std::pair<int, int>>& edges) {
             return SbmGraph(block_of, std::vector<Edge>(edges.begin(), edges.end()));
           }),
           py::arg("block_of"), py::arg("edges"))
      .def_property_readonly("n", &SbmGraph::n)
      .def_property_readonly("num_edges", &SbmGraph::num_edges)
      .def_property_readonly("block_of", &SbmGraph::block_of)
      .def_property_readonly("block_sizes", &SbmGraph::block_sizes)
      .def_property_readonly("edges",
                             [](const SbmGraph& g) {
                               return std::vector<std::pair<int, int>>(g.edges().begin(), g.edges().end());
                             })
      .def("has_edge", &SbmGraph::has_edge)
      .def("to_json", [](const SbmGraph& g) { return graph_to_json(g).dump(); })
      .def_static("from_json", [](const std::string& s) { return graph_from_json(json::parse(s)); })
      .def("__eq__", [](const SbmGraph& a, const SbmGraph& b) { return a == b; })
      .def("__repr__", [](const SbmGraph& g) {
        return "Graph(n=" + std::to_string(g.n()) + ", edges=" + std::to_string(g.num_edges()) + ")";
      });

  m.def("build_q", [](const Rows& p) { return build_q(ProbMatrix(p)).rows(); });
  m.def("w_value", [](const std::vector<double>& x, const Rows& q) { return w_value(BlockVector(x), QMatrix(q)).value; });
  m.def("w_star_bruteforce",
        [](const std::vector<long>& x, const Rows& q) { return dump_decomposition(w_star_bruteforce(BlockVector::integral(x), QMatrix(q))); });
  m.def("w_star_solve",
        [](const std::vector<double>& x, const Rows& q, int restarts, std::uint64_t seed) {
          return dump_decomposition(w_star_solve(BlockVector(x), QMatrix(q), restarts, seed));
        },
        py::arg("x"), py::arg("q"), py::arg("restarts") = kDefaultRestarts, py::arg("seed") = 0);
  m.def("is_pseudodefinite", [](const Rows& q) { return is_pseudodefinite(QMatrix(q)); });

  m.def("sample_sbm", [](const std::vector<long>& sizes, const Rows& p, std::uint64_t seed) {
    return sample_sbm(make_model(sizes, p), seed);
  }, py::arg("sizes"), py::arg("p"), py::arg("seed") = 0);
  m.def("blow_up", [](const std::vector<std::vector<int>>& h, const std::vector<long>& sizes) {
    return blow_up(BlowUpSpec(h, BlockVector::integral(sizes)));
  });
  m.def("percolate", &percolate, py::arg("g"), py::arg("p"), py::arg("seed") = 0);

  m.def("exact_chromatic", [](const SbmGraph& g, long long budget) { return exact_chromatic(g, budget); }, py::arg("g"),
        py::arg("budget") = kDefaultChromaticBudget);
  m.def("dsatur", [](const SbmGraph& g, std::uint64_t seed) { return dump_colouring(dsatur_colouring(g, seed)); });
  m.def("extraction",
        [](const std::vector<long>& sizes, const Rows& p, const SbmGraph& g, double epsilon, std::uint64_t seed) {
          return dump_colouring(balanced_extraction_colouring(make_model(sizes, p), g, epsilon, seed));
        });
  m.def("max_avg_degree", [](const SbmGraph& g) {
    const auto r = max_avg_degree(g);
    return std::make_pair(r.numerator(), r.denominator());
  });
  m.def("alpha_h", [](const std::vector<long>& sizes, const Rows& p, const SbmGraph& g, bool exact, std::uint64_t seed) {
    const auto r = alpha_h(make_model(sizes, p), g, exact ? AlphaMode::exact : AlphaMode::heuristic, seed);
    return std::make_pair(r.h_value, r.best_set);
  });

  m.def("predict_gnp", [](long n, double p) { return to_json(predict_gnp(n, p)).dump(); });
  m.def("predict_sbm", [](const std::vector<long>& sizes, const Rows& p, double wstar, const std::string& norm) {
    return to_json(predict_sbm(make_model(sizes, p), wstar, normalization_from_string(norm))).dump();
  });
  m.def("predict_two_block", [](long n1, long n2, double p11, double p22, double p12, const std::string& norm) {
    return to_json(predict_two_block(n1, n2, p11, p22, p12, normalization_from_string(norm))).dump();
  });
  m.def("two_block_thresholds", [](long n1, long n2, double p11, double p22) {
    const auto t = two_block_thresholds(n1, n2, p11, p22);
    return std::make_pair(t.p_low, t.p_bar);
  });

  m.def("run_experiment", [](const std::string& config) {
    py::gil_scoped_release release;
    return report_csv(run_experiment(ExperimentConfig::from_json(json::parse(config))));
  });
}
