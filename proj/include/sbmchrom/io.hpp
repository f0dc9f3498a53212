#pragma once

#include <string>

#include "json.hpp"
#include "sbmchrom/graph.hpp"
#include "sbmchrom/model.hpp"

namespace sbmchrom {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"k": int, "sizes": [int...], "P": [[float...]...], "sigma"?: float}.
/// Q is derived on load and never written.
nlohmann::json model_to_json(const ModelInstance& m);
ModelInstance model_from_json(const nlohmann::json& j);

/// {"n": int, "blocks": [int per vertex], "edges": [[u, v]...], "provenance": {...}}.
nlohmann::json graph_to_json(const SbmGraph& g);
SbmGraph graph_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sbmchrom
