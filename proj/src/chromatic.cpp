#include "sbmchrom/chromatic.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "sbmchrom/functionals.hpp"
#include "sbmchrom/rng.hpp"

namespace sbmchrom {

std::vector<int> Colouring::colour_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(num_colours), 0);
  for (int c : colour_of) ++sizes[static_cast<std::size_t>(c)];
  return sizes;
}

bool is_proper(const SbmGraph& g, const Colouring& c) {
  if (c.colour_of.size() != static_cast<std::size_t>(g.n())) return false;
  std::vector<char> used(static_cast<std::size_t>(std::max(c.num_colours, 0)), 0);
  for (int col : c.colour_of) {
    if (col < 0 || col >= c.num_colours) return false;
    used[static_cast<std::size_t>(col)] = 1;
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) return false;
  for (const auto& [u, v] : g.edges())
    if (c.colour_of[static_cast<std::size_t>(u)] == c.colour_of[static_cast<std::size_t>(v)]) return false;
  return true;
}

namespace {

using Matrix = std::vector<char>;

Matrix adjacency_matrix(const SbmGraph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  Matrix a(n * n, 0);
  for (const auto& [u, v] : g.edges()) {
    a[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = 1;
    a[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = 1;
  }
  return a;
}

// Largest clique found by growing greedily from every start vertex.
std::vector<int> greedy_clique(const SbmGraph& g, const Matrix& a) {
  const int n = g.n();
  const auto N = static_cast<std::size_t>(n);
  std::vector<int> best;
  for (int s = 0; s < n; ++s) {
    std::vector<int> clique{s};
    std::vector<int> cand(g.neighbours(s));
    while (!cand.empty()) {
      int pick = -1, pick_deg = -1;
      for (int c : cand) {
        int d = 0;
        for (int o : cand) d += a[static_cast<std::size_t>(c) * N + static_cast<std::size_t>(o)];
        if (d > pick_deg) pick = c, pick_deg = d;
      }
      clique.push_back(pick);
      std::vector<int> next;
      for (int o : cand)
        if (a[static_cast<std::size_t>(pick) * N + static_cast<std::size_t>(o)]) next.push_back(o);
      cand.swap(next);
    }
    if (clique.size() > best.size()) best = clique;
  }
  return best;
}

struct ChromaticSearch {
  const SbmGraph& g;
  int n;
  int palette;  // columns of `forbid`
  long long budget;
  long long nodes = 0;
  int lower;
  int best;
  std::vector<int> colour;
  std::vector<int> forbid;  // n x palette neighbour counts per colour
  std::vector<int> sat;

  void assign(int v, int c) {
    colour[static_cast<std::size_t>(v)] = c;
    for (int u : g.neighbours(v))
      if (forbid[static_cast<std::size_t>(u * palette + c)]++ == 0) ++sat[static_cast<std::size_t>(u)];
  }
  void unassign(int v, int c) {
    colour[static_cast<std::size_t>(v)] = -1;
    for (int u : g.neighbours(v))
      if (--forbid[static_cast<std::size_t>(u * palette + c)] == 0) --sat[static_cast<std::size_t>(u)];
  }

  int select() const {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (colour[static_cast<std::size_t>(v)] >= 0) continue;
      if (pick < 0 || sat[static_cast<std::size_t>(v)] > sat[static_cast<std::size_t>(pick)] ||
          (sat[static_cast<std::size_t>(v)] == sat[static_cast<std::size_t>(pick)] && g.degree(v) > g.degree(pick)))
        pick = v;
    }
    return pick;
  }

  void expand(int coloured, int used) {
    if (++nodes > budget) throw BudgetExceeded(lower, best);
    if (coloured == n) {
      best = used;
      return;
    }
    const int v = select();
    for (int c = 0; c < used && used < best; ++c) {
      if (forbid[static_cast<std::size_t>(v * palette + c)]) continue;
      assign(v, c);
      expand(coloured + 1, used);
      unassign(v, c);
      if (best == lower) return;
    }
    if (used + 1 < best) {
      assign(v, used);
      expand(coloured + 1, used + 1);
      unassign(v, used);
    }
  }
};

}  // namespace

int exact_chromatic(const SbmGraph& g, long long budget) {
  const int n = g.n();
  if (n == 0) return 0;
  if (g.num_edges() == 0) return 1;
  const Matrix a = adjacency_matrix(g);
  const auto clique = greedy_clique(g, a);
  const int upper = dsatur_colouring(g, 0).num_colours;
  const int lower = static_cast<int>(clique.size());
  if (lower == upper) return upper;

  ChromaticSearch s{g, n, upper, budget, 0, lower, upper, std::vector<int>(static_cast<std::size_t>(n), -1),
                    std::vector<int>(static_cast<std::size_t>(n * upper), 0), std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (std::size_t i = 0; i < clique.size(); ++i) s.assign(clique[i], static_cast<int>(i));
  s.expand(lower, lower);
  return s.best;
}

Colouring dsatur_colouring(const SbmGraph& g, std::uint64_t seed) {
  const int n = g.n();
  Colouring out;
  out.method = "dsatur";
  out.colour_of.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;

  std::vector<int> rank(static_cast<std::size_t>(n));
  std::iota(rank.begin(), rank.end(), 0);
  Rng rng(seed);
  rng.shuffle(rank);

  std::vector<std::vector<char>> seen(static_cast<std::size_t>(n));
  std::vector<int> sat(static_cast<std::size_t>(n), 0), free_deg(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) free_deg[static_cast<std::size_t>(v)] = g.degree(v);

  int used = 0;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      const auto V = static_cast<std::size_t>(v);
      if (out.colour_of[V] >= 0) continue;
      if (pick < 0) {
        pick = v;
        continue;
      }
      const auto P = static_cast<std::size_t>(pick);
      if (sat[V] != sat[P] ? sat[V] > sat[P] : free_deg[V] != free_deg[P] ? free_deg[V] > free_deg[P] : rank[V] < rank[P])
        pick = v;
    }
    const auto P = static_cast<std::size_t>(pick);
    int c = 0;
    while (c < static_cast<int>(seen[P].size()) && seen[P][static_cast<std::size_t>(c)]) ++c;
    out.colour_of[P] = c;
    used = std::max(used, c + 1);
    for (int u : g.neighbours(pick)) {
      const auto U = static_cast<std::size_t>(u);
      --free_deg[U];
      if (seen[U].size() <= static_cast<std::size_t>(c)) seen[U].resize(static_cast<std::size_t>(c) + 1, 0);
      if (!seen[U][static_cast<std::size_t>(c)]) {
        seen[U][static_cast<std::size_t>(c)] = 1;
        ++sat[U];
      }
    }
  }
  out.num_colours = used;
  return out;
}

Rational max_avg_degree_bruteforce(const SbmGraph& g) {
  const int n = g.n();
  if (n > 25) throw GuardExceeded("subset enumeration for mad is limited to 25 vertices");
  if (n == 0) return Rational(0);
  std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : g.edges()) {
    nb[static_cast<std::size_t>(u)] |= 1u << v;
    nb[static_cast<std::size_t>(v)] |= 1u << u;
  }
  // edges[S] = edges[S minus lowest vertex] + neighbours of that vertex in S.
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<std::int32_t> edges(static_cast<std::size_t>(full) + 1, 0);
  long long best_num = 0, best_den = 1;
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);
    const auto e = edges[rest] + std::popcount(nb[static_cast<std::size_t>(v)] & rest);
    edges[s] = e;
    const long long num = 2LL * e, den = std::popcount(s);
    if (num * best_den > best_num * den) best_num = num, best_den = den;
    if (s == full) break;
  }
  return Rational(best_num, best_den);
}

namespace {

using FlowTraits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, long long,
                    boost::property<boost::edge_residual_capacity_t, long long,
                                    boost::property<boost::edge_reverse_t, FlowTraits::edge_descriptor>>>>;

// Vertex set S maximising b*|E(S)| - a*|S| (nonempty only when the optimum
// is positive), via the edge-vertex closure network.
std::vector<int> density_cut(const SbmGraph& g, long long a, long long b) {
  const int n = g.n();
  const auto m = static_cast<int>(g.num_edges());
  FlowGraph net(static_cast<std::size_t>(n + m + 2));
  const int src = n + m, snk = n + m + 1;
  auto cap = boost::get(boost::edge_capacity, net);
  auto rev = boost::get(boost::edge_reverse, net);
  auto res = boost::get(boost::edge_residual_capacity, net);
  const long long inf = std::numeric_limits<long long>::max() / 4;
  auto add = [&](int from, int to, long long c) {
    auto e = boost::add_edge(static_cast<std::size_t>(from), static_cast<std::size_t>(to), net).first;
    auto r = boost::add_edge(static_cast<std::size_t>(to), static_cast<std::size_t>(from), net).first;
    cap[e] = c;
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
  };
  for (int i = 0; i < m; ++i) {
    const auto& [u, v] = g.edges()[static_cast<std::size_t>(i)];
    add(src, n + i, b);
    add(n + i, u, inf);
    add(n + i, v, inf);
  }
  for (int v = 0; v < n; ++v) add(v, snk, a);
  boost::push_relabel_max_flow(net, static_cast<std::size_t>(src), static_cast<std::size_t>(snk));

  // Source side of the minimum cut: reachable from src in the residual graph.
  std::vector<char> reach(static_cast<std::size_t>(n + m + 2), 0);
  std::vector<std::size_t> stack{static_cast<std::size_t>(src)};
  reach[static_cast<std::size_t>(src)] = 1;
  while (!stack.empty()) {
    const auto x = stack.back();
    stack.pop_back();
    for (auto [it, end] = boost::out_edges(x, net); it != end; ++it) {
      const auto y = boost::target(*it, net);
      if (!reach[y] && res[*it] > 0) {
        reach[y] = 1;
        stack.push_back(y);
      }
    }
  }
  std::vector<int> s;
  for (int v = 0; v < n; ++v)
    if (reach[static_cast<std::size_t>(v)]) s.push_back(v);
  return s;
}

}  // namespace

Rational max_avg_degree_flow(const SbmGraph& g) {
  if (g.n() == 0 || g.num_edges() == 0) return Rational(0);
  // Dinkelbach iteration on the density |E(S)|/|S|, starting from the whole graph.
  long long e = static_cast<long long>(g.num_edges()), s = g.n();
  for (;;) {
    const auto set = density_cut(g, e, s);
    if (set.empty()) break;
    const long long e2 = induced_edge_count(g, set), s2 = static_cast<long long>(set.size());
    if (e2 * s <= e * s2) break;
    e = e2;
    s = s2;
  }
  return Rational(2 * e, s);
}

Rational max_avg_degree(const SbmGraph& g) {
  return g.n() <= 20 ? max_avg_degree_bruteforce(g) : max_avg_degree_flow(g);
}

Rational partition_objective(const SbmGraph& g, const std::vector<std::vector<int>>& partition) {
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::size_t covered = 0;
  Rational total(0);
  for (const auto& part : partition) {
    if (part.empty()) throw GraphError("partition parts must be nonempty");
    for (int v : part) {
      if (v < 0 || v >= g.n()) throw GraphError("partition vertex out of range");
      if (seen[static_cast<std::size_t>(v)]++) throw GraphError("partition parts overlap");
      ++covered;
    }
    total += 1 + max_avg_degree(g.induced(part));
  }
  if (covered != static_cast<std::size_t>(g.n())) throw GraphError("partition does not cover the vertex set");
  return total;
}

namespace {

std::vector<int> contiguous_block_map(const ModelInstance& m) {
  std::vector<int> out;
  const auto counts = m.sizes.counts();
  for (std::size_t b = 0; b < counts.size(); ++b)
    out.insert(out.end(), static_cast<std::size_t>(counts[b]), static_cast<int>(b));
  return out;
}

void require_matching(const ModelInstance& m, const SbmGraph& g) {
  if (g.num_blocks() != m.k() || g.block_sizes() != m.sizes.counts())
    throw GraphError("graph block sizes do not match the model");
}

}  // namespace

double independent_set_probability(const ModelInstance& m, const std::vector<int>& vertices) {
  const auto block = contiguous_block_map(m);
  for (int v : vertices)
    if (v < 0 || static_cast<std::size_t>(v) >= block.size()) throw GraphError("vertex out of range");
  double log_p = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j]) throw GraphError("vertex set has duplicates");
      const auto bi = static_cast<std::size_t>(block[static_cast<std::size_t>(vertices[i])]);
      const auto bj = static_cast<std::size_t>(block[static_cast<std::size_t>(vertices[j])]);
      log_p += std::log1p(-m.probs(bi, bj));
    }
  return log_p;
}

double h_weight(const ModelInstance& m, const std::vector<int>& vertices) {
  if (vertices.empty()) return 0.0;
  return -independent_set_probability(m, vertices) / static_cast<double>(vertices.size());
}

namespace {

constexpr double kHTol = 1e-12;

struct IndependentEnumerator {
  const SbmGraph& g;
  const QMatrix& q;
  const Matrix& adj;
  double qmax;
  bool guarded;
  long long visited = 0;
  std::vector<long> counts;  // per-block counts of the current set
  std::vector<int> current;
  double num = 0.0;  // sum over pairs in the current set of q
  double best = -1.0;
  std::vector<int> best_set;

  void run(const std::vector<int>& cand) {
    const auto N = static_cast<std::size_t>(g.n());
    for (std::size_t idx = 0; idx < cand.size(); ++idx) {
      const double s = static_cast<double>(current.size());
      // No set through this branch can beat (|U| - 1) * qmax / 2.
      if ((s + static_cast<double>(cand.size() - idx) - 1.0) * qmax / 2.0 <= best + kHTol && best >= 0.0) return;
      const int v = cand[idx];
      const auto bv = static_cast<std::size_t>(g.block(v));
      double gain = 0.0;
      for (std::size_t b = 0; b < counts.size(); ++b) gain += static_cast<double>(counts[b]) * q(b, bv);
      num += gain;
      ++counts[bv];
      current.push_back(v);
      if (guarded && ++visited > 10'000'000)
        throw GuardExceeded("exact alpha_h enumeration exceeded 1e7 independent sets");
      const double h = num / static_cast<double>(current.size());
      if (h > best + kHTol) {
        best = h;
        best_set = current;
      }
      std::vector<int> next;
      for (std::size_t j = idx + 1; j < cand.size(); ++j)
        if (!adj[static_cast<std::size_t>(v) * N + static_cast<std::size_t>(cand[j])]) next.push_back(cand[j]);
      if (!next.empty()) run(next);
      current.pop_back();
      --counts[bv];
      num -= gain;
    }
  }
};

// Local search state for the heuristic weighted independent set.
struct IndepState {
  const SbmGraph& g;
  const QMatrix& q;
  std::vector<char> in;
  std::vector<int> conflicts;  // neighbours inside the set
  std::vector<long> counts;
  double num = 0.0;
  int size = 0;

  IndepState(const SbmGraph& graph, const QMatrix& qm)
      : g(graph), q(qm), in(static_cast<std::size_t>(graph.n()), 0), conflicts(static_cast<std::size_t>(graph.n()), 0),
        counts(graph.num_blocks(), 0) {}

  double pair_gain(int v) const {
    const auto bv = static_cast<std::size_t>(g.block(v));
    double s = 0.0;
    for (std::size_t b = 0; b < counts.size(); ++b) s += static_cast<double>(counts[b]) * q(b, bv);
    return s;
  }
  double h() const { return size == 0 ? 0.0 : num / size; }
  void add(int v) {
    num += pair_gain(v);
    ++counts[static_cast<std::size_t>(g.block(v))];
    in[static_cast<std::size_t>(v)] = 1;
    ++size;
    for (int u : g.neighbours(v)) ++conflicts[static_cast<std::size_t>(u)];
  }
  void remove(int v) {
    in[static_cast<std::size_t>(v)] = 0;
    --counts[static_cast<std::size_t>(g.block(v))];
    --size;
    num -= pair_gain(v);
    for (int u : g.neighbours(v)) --conflicts[static_cast<std::size_t>(u)];
  }
  std::vector<int> members() const {
    std::vector<int> out;
    for (int v = 0; v < g.n(); ++v)
      if (in[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
  }
};

WeightedIndepResult alpha_h_heuristic(const ModelInstance& m, const SbmGraph& g, std::uint64_t seed) {
  const int n = g.n();
  WeightedIndepResult result;
  result.exact = false;
  if (n == 0) return result;
  result.best_set = {0};
  result.h_value = 0.0;
  constexpr int kRestarts = 24;
  const int steps = 40 * n + 200;
  for (int r = 0; r < kRestarts; ++r) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    IndepState st(g, m.q);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (int v : order)
      if (!st.conflicts[static_cast<std::size_t>(v)] && (st.num + st.pair_gain(v)) / (st.size + 1) >= st.h() - kHTol)
        st.add(v);
    std::vector<int> tabu(static_cast<std::size_t>(n), -1);
    auto record = [&] {
      if (st.size > 0 && st.h() > result.h_value + kHTol) {
        result.h_value = st.h();
        result.best_set = st.members();
      }
    };
    record();
    for (int step = 0; step < steps; ++step) {
      // Best improving addition or removal.
      const double h0 = st.h();
      int best_add = -1, best_rem = -1;
      double best_h = h0 + kHTol;
      for (int v = 0; v < n; ++v) {
        const auto V = static_cast<std::size_t>(v);
        if (st.in[V] || st.conflicts[V]) continue;
        const double h1 = (st.num + st.pair_gain(v)) / (st.size + 1);
        if (h1 > best_h) best_h = h1, best_add = v;
      }
      if (st.size > 1)
        for (int v = 0; v < n; ++v) {
          if (!st.in[static_cast<std::size_t>(v)]) continue;
          st.remove(v);
          const double h1 = st.h();
          st.add(v);
          if (h1 > best_h) best_h = h1, best_add = -1, best_rem = v;
        }
      if (best_rem >= 0) {
        st.remove(best_rem);
        tabu[static_cast<std::size_t>(best_rem)] = step + 7;
        record();
        continue;
      }
      if (best_add >= 0) {
        st.add(best_add);
        record();
        continue;
      }
      // Plateau or mild descent: swap a one-conflict outsider in for its
      // conflicting member, chosen at random among the least damaging moves.
      std::vector<std::pair<int, int>> swaps;
      double swap_h = -std::numeric_limits<double>::infinity();
      for (int v = 0; v < n; ++v) {
        const auto V = static_cast<std::size_t>(v);
        if (st.in[V] || st.conflicts[V] != 1 || tabu[V] > step) continue;
        int u = -1;
        for (int w : g.neighbours(v))
          if (st.in[static_cast<std::size_t>(w)]) {
            u = w;
            break;
          }
        st.remove(u);
        const double h1 = (st.num + st.pair_gain(v)) / (st.size + 1);
        st.add(u);
        if (h1 > swap_h + kHTol) {
          swap_h = h1;
          swaps.assign(1, {u, v});
        } else if (h1 > swap_h - kHTol) {
          swaps.emplace_back(u, v);
        }
      }
      if (swaps.empty()) {
        // Perturb: drop a random member.
        const auto members = st.members();
        if (members.size() <= 1) break;
        const int u = members[rng.below(members.size())];
        st.remove(u);
        tabu[static_cast<std::size_t>(u)] = step + 7;
        continue;
      }
      const auto [u, v] = swaps[rng.below(swaps.size())];
      st.remove(u);
      st.add(v);
      tabu[static_cast<std::size_t>(u)] = step + 7;
      record();
    }
  }
  std::sort(result.best_set.begin(), result.best_set.end());
  return result;
}

}  // namespace

WeightedIndepResult alpha_h(const ModelInstance& m, const SbmGraph& g, AlphaMode mode, std::uint64_t seed) {
  require_matching(m, g);
  if (mode == AlphaMode::heuristic) return alpha_h_heuristic(m, g, seed);
  WeightedIndepResult result;
  result.exact = true;
  if (g.n() == 0) return result;
  const Matrix adj = adjacency_matrix(g);
  double qmax = 0.0;
  for (std::size_t i = 0; i < m.k(); ++i)
    for (std::size_t j = 0; j < m.k(); ++j) qmax = std::max(qmax, m.q(i, j));
  IndependentEnumerator e{g, m.q, adj, qmax, g.n() > 40, 0, std::vector<long>(m.k(), 0), {}, 0.0, -1.0, {}};
  std::vector<int> all(static_cast<std::size_t>(g.n()));
  std::iota(all.begin(), all.end(), 0);
  e.run(all);
  result.best_set = e.best_set;
  result.h_value = e.best;
  return result;
}

std::optional<std::vector<int>> find_balanced_independent_set(const ModelInstance& m, const SbmGraph& g,
                                                              const std::vector<long>& target, std::uint64_t seed,
                                                              int effort, const std::vector<int>& candidates) {
  require_matching(m, g);
  const std::size_t k = g.num_blocks();
  if (target.size() != k) throw GraphError("target must have one entry per block");
  std::vector<int> pool = candidates;
  if (pool.empty()) {
    pool.resize(static_cast<std::size_t>(g.n()));
    std::iota(pool.begin(), pool.end(), 0);
  }
  std::vector<long> available(k, 0);
  for (int v : pool) ++available[static_cast<std::size_t>(g.block(v))];
  long total = 0;
  for (std::size_t b = 0; b < k; ++b) {
    if (target[b] < 0 || target[b] > available[b]) return std::nullopt;
    total += target[b];
  }
  if (total == 0) return std::vector<int>{};

  const auto n = static_cast<std::size_t>(g.n());
  for (int attempt = 0; attempt < std::max(effort, 1); ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<int> order = pool;
    rng.shuffle(order);
    std::vector<char> in(n, 0);
    std::vector<int> conflicts(n, 0);
    std::vector<long> have(k, 0);
    long size = 0;
    auto add = [&](int v) {
      in[static_cast<std::size_t>(v)] = 1;
      ++have[static_cast<std::size_t>(g.block(v))];
      ++size;
      for (int u : g.neighbours(v)) ++conflicts[static_cast<std::size_t>(u)];
    };
    auto remove = [&](int v) {
      in[static_cast<std::size_t>(v)] = 0;
      --have[static_cast<std::size_t>(g.block(v))];
      --size;
      for (int u : g.neighbours(v)) --conflicts[static_cast<std::size_t>(u)];
    };
    // Greedy fill: repeatedly take the next free vertex from the block that is
    // furthest behind its target share.
    std::vector<std::vector<int>> by_block(k);
    for (int v : order) by_block[static_cast<std::size_t>(g.block(v))].push_back(v);
    std::vector<std::size_t> cursor(k, 0);
    for (;;) {
      std::size_t pick = k;
      double lag = -1.0;
      for (std::size_t b = 0; b < k; ++b) {
        if (have[b] >= target[b] || cursor[b] >= by_block[b].size()) continue;
        const double l = 1.0 - static_cast<double>(have[b]) / static_cast<double>(target[b]);
        if (l > lag) lag = l, pick = b;
      }
      if (pick == k) break;
      const int v = by_block[pick][cursor[pick]++];
      if (!conflicts[static_cast<std::size_t>(v)]) add(v);
    }
    // Repair: insert a one-conflict vertex of a deficient block, evicting its
    // conflicting member when that member's block is not deficient or is the
    // same block; refill greedily afterwards.
    const int repair_steps = static_cast<int>(4 * total + 50);
    std::vector<int> tabu(n, -1);
    for (int step = 0; step < repair_steps && size < total; ++step) {
      std::vector<std::pair<int, int>> moves;  // (in, out); out = -1 for a plain add
      for (int v : pool) {
        const auto V = static_cast<std::size_t>(v);
        const auto bv = static_cast<std::size_t>(g.block(v));
        if (in[V] || have[bv] >= target[bv] || tabu[V] > step) continue;
        if (conflicts[V] == 0) {
          moves.assign(1, {v, -1});
          break;
        }
        if (conflicts[V] != 1) continue;
        int u = -1;
        for (int w : g.neighbours(v))
          if (in[static_cast<std::size_t>(w)]) {
            u = w;
            break;
          }
        moves.emplace_back(v, u);
      }
      if (moves.empty()) break;
      const auto [v, u] = moves.size() == 1 ? moves[0] : moves[rng.below(moves.size())];
      if (u >= 0) {
        remove(u);
        tabu[static_cast<std::size_t>(u)] = step + 5;
      }
      add(v);
      // Refill any block that fell behind.
      for (int w : order) {
        const auto W = static_cast<std::size_t>(w);
        const auto bw = static_cast<std::size_t>(g.block(w));
        if (!in[W] && !conflicts[W] && have[bw] < target[bw] && tabu[W] <= step) add(w);
      }
    }
    if (size == total && have == target) {
      std::vector<int> out;
      for (int v : pool)
        if (in[static_cast<std::size_t>(v)]) out.push_back(v);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  return std::nullopt;
}

Colouring balanced_extraction_colouring(const ModelInstance& m, const SbmGraph& g, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw GraphError("epsilon must lie in (0, 1)");
  require_matching(m, g);
  const std::size_t k = m.k();
  Colouring out;
  out.method = "extraction";
  out.colour_of.assign(static_cast<std::size_t>(g.n()), -1);
  if (g.n() == 0) return out;

  // Split each block's vertex range consecutively among the parts.
  const auto system = near_optimal_integer_system(m.sizes, m.q, seed);
  std::vector<std::vector<std::vector<int>>> part_vertices(system.parts.size(), std::vector<std::vector<int>>(k));
  {
    std::vector<int> next(k, 0);
    std::vector<int> start(k, 0);
    for (std::size_t b = 1; b < k; ++b) start[b] = start[b - 1] + static_cast<int>(g.block_sizes()[b - 1]);
    for (std::size_t t = 0; t < system.parts.size(); ++t) {
      const auto counts = system.parts[t].counts();
      for (std::size_t b = 0; b < k; ++b)
        for (long i = 0; i < counts[b]; ++i) part_vertices[t][b].push_back(start[b] + next[b]++);
    }
  }

  int colours = 0;
  std::vector<int> leftovers;
  std::uint64_t call = 0;
  for (std::size_t t = 0; t < system.parts.size(); ++t) {
    const BlockVector& part = system.parts[t];
    const double w = w_value(part, m.q).value;
    // Below w = e the formula stops being a fraction of the part; try everything.
    const double nu = w > std::exp(1.0) ? std::min(1.0, (2.0 - epsilon) * std::log(w) / w) : 1.0;
    std::vector<std::vector<int>> remaining = part_vertices[t];
    double factor = 1.0;
    for (;;) {
      std::vector<long> rem(k);
      long rem_total = 0;
      for (std::size_t b = 0; b < k; ++b) rem_total += rem[b] = static_cast<long>(remaining[b].size());
      if (rem_total == 0) break;
      std::vector<long> target(k, 0);
      long target_total = 0;
      for (std::size_t b = 0; b < k; ++b) {
        const double raw = factor * nu * part.norm() * static_cast<double>(rem[b]) / static_cast<double>(rem_total);
        target[b] = std::min(rem[b], static_cast<long>(std::floor(raw + 1e-9)));
        target_total += target[b];
      }
      if (target_total == 0) break;
      std::vector<int> pool;
      for (const auto& vs : remaining) pool.insert(pool.end(), vs.begin(), vs.end());
      const auto found = find_balanced_independent_set(m, g, target, mix_seed(seed, ++call), kExtractionEffort, pool);
      if (!found) {
        factor *= kExtractionDegrade;
        continue;
      }
      for (int v : *found) out.colour_of[static_cast<std::size_t>(v)] = colours;
      ++colours;
      for (auto& vs : remaining)
        std::erase_if(vs, [&](int v) { return out.colour_of[static_cast<std::size_t>(v)] >= 0; });
    }
    for (const auto& vs : remaining) leftovers.insert(leftovers.end(), vs.begin(), vs.end());
  }
  if (!leftovers.empty()) {
    std::sort(leftovers.begin(), leftovers.end());
    const auto rest = dsatur_colouring(g.induced(leftovers), mix_seed(seed, ++call));
    for (std::size_t i = 0; i < leftovers.size(); ++i)
      out.colour_of[static_cast<std::size_t>(leftovers[i])] = colours + rest.colour_of[i];
    colours += rest.num_colours;
  }
  // Class elimination: from the last class backwards, move every vertex of a
  // class into some other class where it has no neighbour; the class is
  // dropped only if all of its vertices found a home. Never adds colours, and
  // an edgeless graph collapses to one class.
  std::vector<std::vector<int>> classes(static_cast<std::size_t>(colours));
  for (int v = 0; v < g.n(); ++v) classes[static_cast<std::size_t>(out.colour_of[static_cast<std::size_t>(v)])].push_back(v);
  std::vector<int> conflicts(static_cast<std::size_t>(colours));
  for (int c = colours - 1; c >= 0; --c) {
    std::vector<std::pair<int, int>> moves;  // (vertex, new class)
    bool all_moved = true;
    for (int v : classes[static_cast<std::size_t>(c)]) {
      std::fill(conflicts.begin(), conflicts.end(), 0);
      for (int u : g.neighbours(v)) ++conflicts[static_cast<std::size_t>(out.colour_of[static_cast<std::size_t>(u)])];
      int home = -1;
      for (int d = 0; d < colours && home < 0; ++d)
        if (d != c && !classes[static_cast<std::size_t>(d)].empty() && conflicts[static_cast<std::size_t>(d)] == 0) home = d;
      if (home < 0) {
        all_moved = false;
        break;
      }
      // Tentatively recolour so later vertices of this class see the move.
      out.colour_of[static_cast<std::size_t>(v)] = home;
      moves.emplace_back(v, home);
    }
    if (!all_moved) {
      for (const auto& [v, d] : moves) out.colour_of[static_cast<std::size_t>(v)] = c;
      continue;
    }
    for (const auto& [v, d] : moves) classes[static_cast<std::size_t>(d)].push_back(v);
    classes[static_cast<std::size_t>(c)].clear();
  }
  std::vector<int> renumber(static_cast<std::size_t>(colours), -1);
  int used = 0;
  for (int c = 0; c < colours; ++c)
    if (!classes[static_cast<std::size_t>(c)].empty()) renumber[static_cast<std::size_t>(c)] = used++;
  for (auto& c : out.colour_of) c = renumber[static_cast<std::size_t>(c)];
  out.num_colours = used;
  return out;
}

}  // namespace sbmchrom
