#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sbmchrom/model.hpp"

namespace sbmchrom {

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Edge = std::pair<int, int>;

/// Simple undirected graph whose vertices are grouped into contiguous blocks.
/// Immutable after construction.
class SbmGraph {
 public:
  SbmGraph() = default;

  /// `block_of` must be nondecreasing and nonnegative, so every block is a
  /// contiguous index range (possibly empty). `num_blocks` may declare
  /// trailing empty blocks; 0 infers it from the labels. Edges must be free
  /// of self-loops and duplicates (either orientation).
  SbmGraph(std::vector<int> block_of, std::vector<Edge> edges, nlohmann::json provenance = nlohmann::json::object(),
           std::size_t num_blocks = 0);

  /// Single-block graph on n vertices.
  static SbmGraph plain(int n, std::vector<Edge> edges, nlohmann::json provenance = nlohmann::json::object());

  int n() const noexcept { return static_cast<int>(block_of_.size()); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t num_blocks() const noexcept { return block_sizes_.size(); }

  const std::vector<int>& block_of() const noexcept { return block_of_; }
  int block(int v) const { return block_of_[static_cast<std::size_t>(v)]; }
  const std::vector<long>& block_sizes() const noexcept { return block_sizes_; }

  /// Sorted (u, v) pairs with u < v.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<int>& neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
  bool has_edge(int u, int v) const;

  const nlohmann::json& provenance() const noexcept { return provenance_; }

  /// Subgraph induced on `vertices` (any order); vertices are renumbered in
  /// ascending order of the originals and keep their block labels.
  SbmGraph induced(std::vector<int> vertices) const;

  friend bool operator==(const SbmGraph& a, const SbmGraph& b) {
    return a.block_of_ == b.block_of_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<int> block_of_;
  std::vector<long> block_sizes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  nlohmann::json provenance_;
};

/// Template graph H on k vertices and the clique size for each of them.
struct BlowUpSpec {
  std::vector<std::vector<int>> h_adjacency;  ///< 0/1, symmetric, zero diagonal
  BlockVector sizes;

  BlowUpSpec() = default;
  BlowUpSpec(std::vector<std::vector<int>> adjacency, BlockVector sizes);
  std::size_t k() const noexcept { return h_adjacency.size(); }
};

enum class ChungLuKind { times, plus };

/// Each pair {u, v} present independently with p_{block(u), block(v)};
/// Bernoulli draws in lexicographic pair order from Rng(seed).
SbmGraph sample_sbm(const ModelInstance& m, std::uint64_t seed);

/// Cliques of size n_i per template vertex, completely joined along E(H).
SbmGraph blow_up(const BlowUpSpec& spec);

/// Keeps each edge independently with probability p in (0, 1).
SbmGraph percolate(const SbmGraph& g, double p, std::uint64_t seed);

/// Model with P = p (I + A_H), whose samples are distributed as
/// percolate(blow_up(spec), p).
ModelInstance blow_up_as_model(const BlowUpSpec& spec, double p);

/// Index (0-based) of the weight cell containing u: [0, 1/k] is cell 0 and
/// ((i-1)/k, i/k] is cell i-1 for i >= 2.
std::size_t chung_lu_cell(double u, std::size_t buckets);

/// Bucketed lower and upper block models sandwiching the Chung-Lu pair
/// probabilities p u_a u_b (times) or p (u_a + u_b) (plus).
std::pair<ModelInstance, ModelInstance> chung_lu_model(const std::vector<double>& u, double p, ChungLuKind kind,
                                                       std::size_t buckets);

/// Exact Chung-Lu sampler. Every vertex is its own block unless a contiguous
/// `block_of` is supplied.
SbmGraph sample_chung_lu(const std::vector<double>& u, double p, ChungLuKind kind, std::uint64_t seed,
                         const std::vector<int>& block_of = {});

/// Edge-set union of two graphs on the same blocked vertex set.
SbmGraph union_graphs(const SbmGraph& g1, const SbmGraph& g2);

/// Per-block counts b(U) of a vertex set.
std::vector<long> block_profile(const SbmGraph& g, const std::vector<int>& vertices);

/// Number of edges of g with both ends in `vertices`.
long induced_edge_count(const SbmGraph& g, const std::vector<int>& vertices);

const char* to_string(ChungLuKind kind) noexcept;
ChungLuKind chung_lu_kind_from_string(const std::string& s);

}  // namespace sbmchrom
