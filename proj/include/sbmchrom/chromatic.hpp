#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmchrom/graph.hpp"
#include "sbmchrom/model.hpp"

namespace sbmchrom {

using Rational = boost::rational<long long>;

/// Raised by exact_chromatic when the node budget runs out. Carries the
/// bracket established so far.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(int lower, int upper)
      : std::runtime_error("chromatic search budget exceeded; bracket [" + std::to_string(lower) + ", " +
                           std::to_string(upper) + "]"),
        lower_(lower),
        upper_(upper) {}
  int lower() const noexcept { return lower_; }
  int upper() const noexcept { return upper_; }

 private:
  int lower_, upper_;
};

/// Raised when an exact enumeration would exceed its guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Colouring {
  std::vector<int> colour_of;
  int num_colours = 0;
  std::string method;

  /// Number of vertices per colour.
  std::vector<int> colour_sizes() const;
};

struct WeightedIndepResult {
  std::vector<int> best_set;
  double h_value = 0.0;
  bool exact = false;
};

enum class AlphaMode { exact, heuristic };

inline constexpr long long kDefaultChromaticBudget = 100'000'000;

/// True when no edge joins two vertices of the same colour and every colour
/// in 0..num_colours-1 is used.
bool is_proper(const SbmGraph& g, const Colouring& c);

/// Exact chromatic number by DSATUR branch and bound, seeded with a greedy
/// clique (lower bound) and a DSATUR colouring (upper bound).
int exact_chromatic(const SbmGraph& g, long long budget = kDefaultChromaticBudget);

/// DSATUR: highest saturation first, then highest degree into the uncoloured
/// part, then a seeded random rank.
Colouring dsatur_colouring(const SbmGraph& g, std::uint64_t seed);

/// Maximum average degree max_S 2|E(S)|/|S| as an exact rational. Subset
/// enumeration up to 20 vertices, min-cut density search above.
Rational max_avg_degree(const SbmGraph& g);
Rational max_avg_degree_bruteforce(const SbmGraph& g);
Rational max_avg_degree_flow(const SbmGraph& g);

/// Sum over parts of (1 + mad(g[S])). Throws GraphError unless the parts
/// cover the vertex set disjointly.
Rational partition_objective(const SbmGraph& g, const std::vector<std::vector<int>>& partition);

/// ln Pr(U is independent) = sum over pairs in U of ln(1 - p(u, v)), with
/// vertices assigned to blocks contiguously by m.sizes.
double independent_set_probability(const ModelInstance& m, const std::vector<int>& vertices);

/// h(U) = -ln Pr(U independent) / |U|; 0 for the empty set.
double h_weight(const ModelInstance& m, const std::vector<int>& vertices);

/// Weighted independence number max h(U) over nonempty independent U.
/// Exact mode enumerates independent sets with pruning; beyond 40 vertices
/// it aborts with GuardExceeded after 1e7 sets. Heuristic mode runs a
/// seeded add/remove/swap local search.
WeightedIndepResult alpha_h(const ModelInstance& m, const SbmGraph& g, AlphaMode mode, std::uint64_t seed);

/// Independent set with block profile exactly `target`, drawn from
/// `candidates` (all vertices when empty). Seeded greedy fill in random order
/// followed by one-swap repair; `effort` restarts. nullopt on failure.
std::optional<std::vector<int>> find_balanced_independent_set(const ModelInstance& m, const SbmGraph& g,
                                                              const std::vector<long>& target, std::uint64_t seed,
                                                              int effort, const std::vector<int>& candidates = {});

inline constexpr double kExtractionDegrade = 0.8;
inline constexpr int kExtractionEffort = 30;

/// Colouring by repeated extraction of block-balanced independent sets, run
/// separately on the parts of a near-optimal integer system for sizes; the
/// leftovers are coloured by DSATUR.
Colouring balanced_extraction_colouring(const ModelInstance& m, const SbmGraph& g, double epsilon, std::uint64_t seed);

}  // namespace sbmchrom
