#include "sbmchrom/io.hpp"

#include <fstream>
#include <sstream>

namespace sbmchrom {

using nlohmann::json;

json model_to_json(const ModelInstance& m) {
  json j{{"k", m.k()}, {"sizes", m.sizes.counts()}, {"P", m.probs.rows()}};
  if (m.sigma_hint) j["sigma"] = *m.sigma_hint;
  return j;
}

ModelInstance model_from_json(const json& j) {
  try {
    const auto sizes = j.at("sizes").get<std::vector<long>>();
    const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
    if (j.contains("k") && j.at("k").get<std::size_t>() != sizes.size()) throw IoError("model: k disagrees with sizes");
    std::optional<double> sigma;
    if (j.contains("sigma") && !j.at("sigma").is_null()) sigma = j.at("sigma").get<double>();
    for (long s : sizes)
      if (s < 0) throw IoError("model: sizes must be nonnegative");
    return ModelInstance(BlockVector::integral(sizes), ProbMatrix(rows), sigma);
  } catch (const json::exception& e) {
    throw IoError(std::string("model: ") + e.what());
  }
}

json graph_to_json(const SbmGraph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return json{{"n", g.n()},
              {"num_blocks", g.num_blocks()},
              {"blocks", g.block_of()},
              {"edges", std::move(edges)},
              {"provenance", g.provenance()}};
}

SbmGraph graph_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    auto blocks = j.contains("blocks") ? j.at("blocks").get<std::vector<int>>() : std::vector<int>(static_cast<std::size_t>(n), 0);
    if (blocks.size() != static_cast<std::size_t>(n)) throw IoError("graph: blocks length differs from n");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw IoError("graph: edges must be [u, v] pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    const std::size_t declared = j.contains("num_blocks") ? j.at("num_blocks").get<std::size_t>() : 0;
    return SbmGraph(std::move(blocks), std::move(edges), j.value("provenance", json::object()), declared);
  } catch (const json::exception& e) {
    throw IoError(std::string("graph: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sbmchrom
