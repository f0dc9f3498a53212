#pragma once

// Solvers for the box-constrained quadratic ratio w(x, Q) and the
// decomposition functional w*(x, Q) = inf over systems summing to x of the
// summed w values.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmchrom/model.hpp"

namespace sbmchrom {

/// Raised by exact solvers whose enumeration guard trips.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maximiser of y^T Q y / ||y|| over 0 <= y <= x, taken at a corner.
struct CornerSolution {
  double value = 0.0;
  std::vector<std::size_t> support;  ///< indices with maximizer_i == x_i > 0
  BlockVector maximizer;
};

/// A finite system of nonzero vectors summing to `target`.
struct Decomposition {
  std::vector<BlockVector> parts;
  BlockVector target;
  double w_sum = 0.0;
  std::string method;
};

struct WStarBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Largest k accepted by corner enumeration.
inline constexpr std::size_t kMaxCornerBlocks = 30;

/// Work limit of the integer brute force: sum over lattice points s <= x of
/// the number of sub-vectors of s.
inline constexpr double kBruteForceGuard = 1e7;

/// Exact w(x, Q) by enumerating the 2^k corners. Ties go to the smallest
/// support, then the lexicographically smallest one.
CornerSolution w_value(const BlockVector& x, const QMatrix& q);

/// Corner maximum only, without tie-breaking bookkeeping. Hot path of the
/// local searches.
double corner_max(std::span<const double> y, const QMatrix& q);

/// Random box search: max of the ratio over `trials` uniform points in
/// [0, x] and the singleton corners. Always a lower bound on w_value.
double w_value_sampled(const BlockVector& x, const QMatrix& q, int trials, std::uint64_t seed);

/// Exact minimum of the summed w over all decompositions of an integer x
/// into nonzero integer vectors (dynamic programme over the lattice box).
/// Throws InstanceTooLarge when the work estimate exceeds kBruteForceGuard.
Decomposition w_star_bruteforce(const BlockVector& x, const QMatrix& q);

/// Multi-start local search over systems of at most k real vectors. Returns
/// the single part {x} when Q is pseudodefinite.
Decomposition w_star_solve(const BlockVector& x, const QMatrix& q, int restarts, std::uint64_t seed);

/// Heuristic value of the ell-part relaxation. Equals w_value for ell = 1,
/// is nonincreasing in ell, and is constant for ell >= k.
double w_ell(const BlockVector& x, const QMatrix& q, int ell, std::uint64_t seed);

/// At most k integer parts summing exactly to x, built by flooring the
/// w_star_solve system and re-adding the remainder greedily.
Decomposition near_optimal_integer_system(const BlockVector& x, const QMatrix& q, std::uint64_t seed);

/// True iff y^T Q y >= -1e-9 for every y with zero coordinate sum.
bool is_pseudodefinite(const QMatrix& q);

/// Closed-form bracket for w*: q_hat(x)^2 ||x|| / tr(Q) <= w* <= q_hat(x) ||x||.
WStarBounds w_star_bounds(const BlockVector& x, const QMatrix& q);

/// Summed corner maxima of a list of parts.
double w_sum_of(std::span<const BlockVector> parts, const QMatrix& q);

inline constexpr int kDefaultRestarts = 8;

}  // namespace sbmchrom
