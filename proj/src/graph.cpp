#include "sbmchrom/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbmchrom/rng.hpp"

namespace sbmchrom {

using nlohmann::json;

SbmGraph::SbmGraph(std::vector<int> block_of, std::vector<Edge> edges, json provenance, std::size_t num_blocks)
    : block_of_(std::move(block_of)), provenance_(std::move(provenance)) {
  const int n = static_cast<int>(block_of_.size());
  int prev = 0;
  for (int b : block_of_) {
    if (b < prev) throw GraphError("block labels must be nonnegative and nondecreasing");
    prev = b;
  }
  const std::size_t inferred = block_of_.empty() ? 0 : static_cast<std::size_t>(block_of_.back()) + 1;
  if (num_blocks != 0 && num_blocks < inferred) throw GraphError("declared block count smaller than labels");
  block_sizes_.assign(std::max(num_blocks, inferred), 0);
  for (int b : block_of_) ++block_sizes_[static_cast<std::size_t>(b)];
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw GraphError("edge endpoint out of range");
    if (u == v) throw GraphError("self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw GraphError("duplicate edge");
  edges_ = std::move(edges);
  adj_.assign(static_cast<std::size_t>(n), {});
  for (const auto& [u, v] : edges_) {
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& list : adj_) std::sort(list.begin(), list.end());
}

SbmGraph SbmGraph::plain(int n, std::vector<Edge> edges, json provenance) {
  return SbmGraph(std::vector<int>(static_cast<std::size_t>(n), 0), std::move(edges), std::move(provenance));
}

bool SbmGraph::has_edge(int u, int v) const {
  const auto& list = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(list.begin(), list.end(), v);
}

SbmGraph SbmGraph::induced(std::vector<int> vertices) const {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  std::vector<int> index(block_of_.size(), -1);
  std::vector<int> blocks;
  blocks.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const int v = vertices[i];
    if (v < 0 || v >= n()) throw GraphError("induced: vertex out of range");
    index[static_cast<std::size_t>(v)] = static_cast<int>(i);
    blocks.push_back(block_of_[static_cast<std::size_t>(v)]);
  }
  std::vector<Edge> sub;
  for (const auto& [u, v] : edges_) {
    const int a = index[static_cast<std::size_t>(u)], c = index[static_cast<std::size_t>(v)];
    if (a >= 0 && c >= 0) sub.emplace_back(a, c);
  }
  return SbmGraph(std::move(blocks), std::move(sub), json{{"kind", "induced"}}, num_blocks());
}

BlowUpSpec::BlowUpSpec(std::vector<std::vector<int>> adjacency, BlockVector sizes_)
    : h_adjacency(std::move(adjacency)), sizes(std::move(sizes_)) {
  const std::size_t k = h_adjacency.size();
  if (sizes.k() != k) throw GraphError("blow-up sizes and template disagree on k");
  if (!sizes.is_integral()) throw GraphError("blow-up sizes must be integers");
  for (std::size_t i = 0; i < k; ++i) {
    if (h_adjacency[i].size() != k) throw GraphError("template adjacency must be square");
    if (h_adjacency[i][i] != 0) throw GraphError("template graph must not have self-loops");
    for (std::size_t j = 0; j < k; ++j) {
      const int a = h_adjacency[i][j];
      if (a != 0 && a != 1) throw GraphError("template adjacency must be 0/1");
      if (a != h_adjacency[j][i]) throw GraphError("template adjacency must be symmetric");
    }
  }
}

namespace {

std::vector<int> contiguous_blocks(const std::vector<long>& sizes) {
  std::vector<int> out;
  for (std::size_t b = 0; b < sizes.size(); ++b) out.insert(out.end(), static_cast<std::size_t>(sizes[b]), static_cast<int>(b));
  return out;
}

}  // namespace

SbmGraph sample_sbm(const ModelInstance& m, std::uint64_t seed) {
  auto block_of = contiguous_blocks(m.sizes.counts());
  const int n = static_cast<int>(block_of.size());
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    const auto bu = static_cast<std::size_t>(block_of[static_cast<std::size_t>(u)]);
    for (int v = u + 1; v < n; ++v) {
      const double p = m.probs(bu, static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)]));
      if (rng.bernoulli(p)) edges.emplace_back(u, v);
    }
  }
  json prov{{"kind", "sbm"}, {"seed", seed}, {"sizes", m.sizes.counts()}, {"P", m.probs.rows()}};
  return SbmGraph(std::move(block_of), std::move(edges), std::move(prov), m.k());
}

SbmGraph blow_up(const BlowUpSpec& spec) {
  auto block_of = contiguous_blocks(spec.sizes.counts());
  const int n = static_cast<int>(block_of.size());
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    const auto bu = static_cast<std::size_t>(block_of[static_cast<std::size_t>(u)]);
    for (int v = u + 1; v < n; ++v) {
      const auto bv = static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)]);
      if (bu == bv || spec.h_adjacency[bu][bv]) edges.emplace_back(u, v);
    }
  }
  json prov{{"kind", "blowup"}, {"H", spec.h_adjacency}, {"sizes", spec.sizes.counts()}};
  return SbmGraph(std::move(block_of), std::move(edges), std::move(prov), spec.k());
}

SbmGraph percolate(const SbmGraph& g, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw GraphError("percolation probability must lie in (0, 1)");
  Rng rng(seed);
  std::vector<Edge> kept;
  for (const auto& e : g.edges())
    if (rng.bernoulli(p)) kept.push_back(e);
  json prov{{"kind", "percolate"}, {"p", p}, {"seed", seed}, {"parent", g.provenance()}};
  return SbmGraph(g.block_of(), std::move(kept), std::move(prov), g.num_blocks());
}

ModelInstance blow_up_as_model(const BlowUpSpec& spec, double p) {
  if (!(p > 0.0 && p < 1.0)) throw GraphError("percolation probability must lie in (0, 1)");
  const std::size_t k = spec.k();
  SymMatrix probs(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) probs.set(i, j, (i == j || spec.h_adjacency[i][j]) ? p : 0.0);
  return ModelInstance(spec.sizes, ProbMatrix(std::move(probs)));
}

std::size_t chung_lu_cell(double u, std::size_t buckets) {
  if (!(u >= 0.0 && u <= 1.0)) throw GraphError("Chung-Lu weights must lie in [0, 1]");
  if (buckets == 0) throw GraphError("buckets must be >= 1");
  const double kd = static_cast<double>(buckets);
  auto cell = static_cast<std::size_t>(std::max(1.0, std::ceil(u * kd)));
  cell = std::min(cell, buckets);
  // Correct rounding at the cell edges: cell i (1-based) is ((i-1)/k, i/k].
  while (cell > 1 && u <= static_cast<double>(cell - 1) / kd) --cell;
  while (cell < buckets && u > static_cast<double>(cell) / kd) ++cell;
  return cell - 1;
}

std::pair<ModelInstance, ModelInstance> chung_lu_model(const std::vector<double>& u, double p, ChungLuKind kind,
                                                       std::size_t buckets) {
  if (buckets == 0) throw GraphError("buckets must be >= 1");
  if (kind == ChungLuKind::times && !(p > 0.0 && p < 1.0)) throw GraphError("times model needs p in (0, 1)");
  if (kind == ChungLuKind::plus && !(p > 0.0 && p <= 0.5)) throw GraphError("plus model needs p in (0, 1/2]");
  std::vector<long> counts(buckets, 0);
  for (double x : u) ++counts[chung_lu_cell(x, buckets)];
  const double k = static_cast<double>(buckets);
  // Largest double below 1; the plus model's top cell reaches 2p = 1 at p = 1/2.
  const double cap = std::nextafter(1.0, 0.0);
  SymMatrix lo(buckets), hi(buckets);
  for (std::size_t a = 0; a < buckets; ++a)
    for (std::size_t b = a; b < buckets; ++b) {
      const double i = static_cast<double>(a + 1), j = static_cast<double>(b + 1);
      if (kind == ChungLuKind::times) {
        lo.set(a, b, p * (i - 1) * (j - 1) / (k * k));
        hi.set(a, b, std::min(cap, p * i * j / (k * k)));
      } else {
        lo.set(a, b, p * ((i - 1) + (j - 1)) / k);
        hi.set(a, b, std::min(cap, p * (i + j) / k));
      }
    }
  const auto sizes = BlockVector::integral(counts);
  return {ModelInstance(sizes, ProbMatrix(std::move(lo))), ModelInstance(sizes, ProbMatrix(std::move(hi)))};
}

SbmGraph sample_chung_lu(const std::vector<double>& u, double p, ChungLuKind kind, std::uint64_t seed,
                         const std::vector<int>& block_of) {
  const int n = static_cast<int>(u.size());
  for (double x : u)
    if (!(x >= 0.0 && x <= 1.0)) throw GraphError("Chung-Lu weights must lie in [0, 1]");
  if (!(p >= 0.0)) throw GraphError("p must be >= 0");
  std::vector<int> blocks = block_of;
  if (blocks.empty()) {
    blocks.resize(u.size());
    for (int v = 0; v < n; ++v) blocks[static_cast<std::size_t>(v)] = v;
  } else if (blocks.size() != u.size()) {
    throw GraphError("block map length must match the weight vector");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double ua = u[static_cast<std::size_t>(a)], ub = u[static_cast<std::size_t>(b)];
      const double prob = kind == ChungLuKind::times ? p * ua * ub : p * (ua + ub);
      if (!(prob < 1.0)) throw GraphError("Chung-Lu pair probability must be < 1");
      if (rng.bernoulli(prob)) edges.emplace_back(a, b);
    }
  json prov{{"kind", kind == ChungLuKind::times ? "chunglu-times" : "chunglu-plus"}, {"p", p}, {"seed", seed}, {"u", u}};
  return SbmGraph(std::move(blocks), std::move(edges), std::move(prov));
}

SbmGraph union_graphs(const SbmGraph& g1, const SbmGraph& g2) {
  if (g1.block_of() != g2.block_of() || g1.num_blocks() != g2.num_blocks()) throw GraphError("union requires identical vertex and block structure");
  std::vector<Edge> merged;
  std::set_union(g1.edges().begin(), g1.edges().end(), g2.edges().begin(), g2.edges().end(), std::back_inserter(merged));
  json prov{{"kind", "union"}, {"parents", json::array({g1.provenance(), g2.provenance()})}};
  return SbmGraph(g1.block_of(), std::move(merged), std::move(prov), g1.num_blocks());
}

std::vector<long> block_profile(const SbmGraph& g, const std::vector<int>& vertices) {
  std::vector<long> b(g.num_blocks(), 0);
  for (int v : vertices) ++b[static_cast<std::size_t>(g.block(v))];
  return b;
}

long induced_edge_count(const SbmGraph& g, const std::vector<int>& vertices) {
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  for (int v : vertices) in[static_cast<std::size_t>(v)] = 1;
  long count = 0;
  for (const auto& [u, v] : g.edges())
    if (in[static_cast<std::size_t>(u)] && in[static_cast<std::size_t>(v)]) ++count;
  return count;
}

const char* to_string(ChungLuKind kind) noexcept { return kind == ChungLuKind::times ? "times" : "plus"; }

ChungLuKind chung_lu_kind_from_string(const std::string& s) {
  if (s == "times") return ChungLuKind::times;
  if (s == "plus") return ChungLuKind::plus;
  throw GraphError("unknown Chung-Lu kind '" + s + "'");
}

}  // namespace sbmchrom
