#include "sbmchrom/functionals.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "sbmchrom/rng.hpp"

namespace sbmchrom {

namespace {

constexpr double kTieTol = 1e-12;

void require_same_k(const BlockVector& x, const QMatrix& q) {
  if (x.k() != q.k()) throw ModelError("block vector and Q disagree on k");
}

// Orders supports by cardinality, then lexicographically by index list.
bool support_less(std::uint64_t a, std::uint64_t b) {
  const int ca = std::popcount(a), cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  if (a == b) return false;
  const std::uint64_t lowest_diff = (a ^ b) & (~(a ^ b) + 1);
  return (a & lowest_diff) != 0;
}

using Alloc = std::vector<std::vector<double>>;  // rows are parts, columns blocks

double row_value(const std::vector<double>& row, const QMatrix& q) { return corner_max(row, q); }

double alloc_value(const Alloc& a, const QMatrix& q) {
  double s = 0.0;
  for (const auto& row : a) s += row_value(row, q);
  return s;
}

// Moves mass between two parts in one block at a geometrically shrinking
// step. Column sums stay fixed, so every accepted state is feasible.
double local_search(Alloc& a, const QMatrix& q) {
  const std::size_t parts = a.size();
  const std::size_t k = q.k();
  std::vector<double> vals(parts);
  for (std::size_t t = 0; t < parts; ++t) vals[t] = row_value(a[t], q);
  double total = std::accumulate(vals.begin(), vals.end(), 0.0);
  if (parts < 2) return total;

  std::vector<double> rt, ru;
  for (int outer = 0; outer < 64; ++outer) {
    bool improved_outer = false;
    for (double scale = 1.0; scale > 1e-7; scale *= 0.5) {
      bool improved = true;
      for (int sweep = 0; improved && sweep < 64; ++sweep) {
        improved = false;
        for (std::size_t t = 0; t < parts; ++t)
          for (std::size_t u = 0; u < parts; ++u) {
            if (u == t) continue;
            for (std::size_t i = 0; i < k; ++i) {
              if (a[t][i] <= 0.0) continue;
              const double delta = scale * a[t][i];
              rt = a[t];
              ru = a[u];
              rt[i] = scale == 1.0 ? 0.0 : rt[i] - delta;
              ru[i] += delta;
              const double nt = row_value(rt, q), nu = row_value(ru, q);
              const double gain = vals[t] + vals[u] - nt - nu;
              if (gain > kTieTol * std::max(1.0, total)) {
                a[t].swap(rt);
                a[u].swap(ru);
                vals[t] = nt;
                vals[u] = nu;
                total -= gain;
                improved = true;
                improved_outer = true;
              }
            }
          }
      }
    }
    if (!improved_outer) break;
  }
  return std::accumulate(vals.begin(), vals.end(), 0.0);
}

// Restores exact column sums after floating-point transfers.
void fix_columns(Alloc& a, const BlockVector& x) {
  for (std::size_t i = 0; i < x.k(); ++i) {
    double s = 0.0;
    std::size_t big = 0;
    for (std::size_t t = 0; t < a.size(); ++t) {
      s += a[t][i];
      if (a[t][i] > a[big][i]) big = t;
    }
    a[big][i] = std::max(0.0, a[big][i] + (x[i] - s));
  }
}

// Starts that put whole blocks together, one part per group. Only enumerated
// for small k (Bell numbers grow fast).
std::vector<Alloc> grouping_starts(const BlockVector& x, const QMatrix& q, std::size_t ell, std::size_t keep) {
  const std::size_t k = x.k();
  std::vector<std::pair<double, Alloc>> scored;
  if (k > 8) return {};
  std::vector<std::size_t> label(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == k) {
      if (used < 2) return;  // the single part is already covered
      Alloc a(ell, std::vector<double>(k, 0.0));
      for (std::size_t b = 0; b < k; ++b) a[label[b]][b] = x[b];
      scored.emplace_back(alloc_value(a, q), std::move(a));
      return;
    }
    for (std::size_t g = 0; g <= used && g < ell; ++g) {
      label[i] = g;
      rec(i + 1, std::max(used, g + 1));
    }
  };
  rec(0, 0);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<Alloc> out;
  for (std::size_t s = 0; s < scored.size() && s < keep; ++s) out.push_back(std::move(scored[s].second));
  return out;
}

Alloc random_start(const BlockVector& x, std::size_t ell, Rng& rng) {
  const std::size_t k = x.k();
  Alloc a(ell, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0.0) continue;
    if (rng.bernoulli(0.5)) {
      a[rng.below(ell)][i] = x[i];
      continue;
    }
    std::vector<double> w(ell);
    double s = 0.0;
    for (auto& v : w) s += (v = rng.uniform() + 1e-3);
    for (std::size_t t = 0; t < ell; ++t) a[t][i] = x[i] * w[t] / s;
  }
  return a;
}

struct Stage {
  double value;
  Alloc alloc;
};

// Stage j searches systems of j parts, seeded with stage j-1's best plus an
// empty part, so stage values never increase.
std::vector<Stage> relaxation_chain(const BlockVector& x, const QMatrix& q, std::size_t ell_max, int restarts,
                                    std::uint64_t seed) {
  std::vector<Stage> stages;
  Alloc single{std::vector<double>(x.values().begin(), x.values().end())};
  stages.push_back({corner_max(x.values(), q), single});
  for (std::size_t ell = 2; ell <= ell_max; ++ell) {
    const Stage& prev = stages.back();
    std::vector<Alloc> starts;
    Alloc seeded = prev.alloc;
    seeded.emplace_back(x.k(), 0.0);
    starts.push_back(std::move(seeded));
    for (auto& g : grouping_starts(x, q, ell, 3)) starts.push_back(std::move(g));
    for (int r = 0; r < restarts; ++r) {
      Rng rng(mix_seed(mix_seed(seed, ell), static_cast<std::uint64_t>(r)));
      starts.push_back(random_start(x, ell, rng));
    }
    Stage best = prev;
    best.alloc.emplace_back(x.k(), 0.0);
    for (auto& s : starts) {
      local_search(s, q);
      fix_columns(s, x);
      const double v = alloc_value(s, q);
      if (v < best.value - kTieTol * std::max(1.0, best.value)) best = {v, std::move(s)};
    }
    stages.push_back(std::move(best));
  }
  return stages;
}

Decomposition to_decomposition(const Alloc& a, const BlockVector& x, const QMatrix& q, std::string method) {
  Decomposition d;
  d.target = x;
  d.method = std::move(method);
  for (const auto& row : a) {
    BlockVector part(row);
    if (part.is_zero()) continue;
    d.parts.push_back(std::move(part));
  }
  d.w_sum = w_sum_of(d.parts, q);
  return d;
}

}  // namespace

double corner_max(std::span<const double> y, const QMatrix& q) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] > 0.0) nz.push_back(i);
  const std::size_t m = nz.size();
  if (m == 0) return 0.0;
  if (m > kMaxCornerBlocks) throw InstanceTooLarge("corner enumeration limited to 30 nonzero blocks");

  // Gray-code walk; r[a] tracks sum_{b in mask} q(nz[a], nz[b]) y_b.
  std::vector<double> r(m, 0.0);
  double quad = 0.0, norm = 0.0, best = 0.0;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t g = 1; g < count; ++g) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(g));
    const std::uint64_t gray = g ^ (g >> 1);
    const std::size_t i = nz[bit];
    const double yi = y[i];
    if (gray & (std::uint64_t{1} << bit)) {
      quad += 2.0 * yi * r[bit] + q(i, i) * yi * yi;
      norm += yi;
      for (std::size_t a = 0; a < m; ++a) r[a] += q(nz[a], i) * yi;
    } else {
      for (std::size_t a = 0; a < m; ++a) r[a] -= q(nz[a], i) * yi;
      quad -= 2.0 * yi * r[bit] + q(i, i) * yi * yi;
      norm -= yi;
    }
    if (norm > 0.0) best = std::max(best, quad / norm);
  }
  return best;
}

CornerSolution w_value(const BlockVector& x, const QMatrix& q) {
  require_same_k(x, q);
  CornerSolution sol;
  sol.maximizer = BlockVector::zeros(x.k());
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < x.k(); ++i)
    if (x[i] > 0.0) nz.push_back(i);
  const std::size_t m = nz.size();
  if (m == 0) return sol;
  if (m > kMaxCornerBlocks) throw InstanceTooLarge("w_value: more than 30 nonzero blocks; use w_value_sampled");

  std::vector<double> z(x.k(), 0.0);
  double best_value = -1.0;
  std::uint64_t best_mask = 0;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    double norm = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      z[nz[a]] = (mask >> a) & 1 ? x[nz[a]] : 0.0;
      norm += z[nz[a]];
    }
    const double v = quadratic_form(z, q) / norm;
    const double tol = kTieTol * std::max(1.0, std::abs(best_value));
    if (v > best_value + tol || (v >= best_value - tol && support_less(mask, best_mask))) {
      best_value = v;
      best_mask = mask;
    }
  }
  std::vector<double> zmax(x.k(), 0.0);
  for (std::size_t a = 0; a < m; ++a)
    if ((best_mask >> a) & 1) {
      zmax[nz[a]] = x[nz[a]];
      sol.support.push_back(nz[a]);
    }
  sol.value = best_value;
  sol.maximizer = BlockVector(std::move(zmax));
  return sol;
}

double w_value_sampled(const BlockVector& x, const QMatrix& q, int trials, std::uint64_t seed) {
  require_same_k(x, q);
  if (trials < 1) throw std::invalid_argument("w_value_sampled: trials must be >= 1");
  const std::size_t k = x.k();
  double best = 0.0;
  std::vector<double> y(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] <= 0.0) continue;
    std::fill(y.begin(), y.end(), 0.0);
    y[i] = x[i];
    best = std::max(best, q(i, i) * x[i]);
  }
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    double norm = 0.0;
    for (std::size_t i = 0; i < k; ++i) norm += (y[i] = x[i] * rng.uniform());
    if (norm > 0.0) best = std::max(best, quadratic_form(y, q) / norm);
  }
  return best;
}

double w_sum_of(std::span<const BlockVector> parts, const QMatrix& q) {
  double s = 0.0;
  for (const auto& p : parts) s += corner_max(p.values(), q);
  return s;
}

Decomposition w_star_bruteforce(const BlockVector& x, const QMatrix& q) {
  require_same_k(x, q);
  if (!x.is_integral()) throw ModelError("w_star_bruteforce requires an integer vector");
  const std::size_t k = x.k();
  const auto xs = x.counts();

  double work = 1.0, states_d = 1.0;
  for (long c : xs) {
    work *= static_cast<double>(c + 1) * static_cast<double>(c + 2) / 2.0;
    states_d *= static_cast<double>(c + 1);
  }
  if (work > kBruteForceGuard)
    throw InstanceTooLarge("w_star_bruteforce: enumeration of " + std::to_string(work) + " sub-vector pairs exceeds guard");

  // Mixed-radix encoding; index(s - y) == index(s) - index(y) for y <= s.
  std::vector<std::size_t> stride(k);
  std::size_t acc = 1;
  for (std::size_t i = 0; i < k; ++i) {
    stride[i] = acc;
    acc *= static_cast<std::size_t>(xs[i] + 1);
  }
  const auto states = static_cast<std::size_t>(states_d);
  std::vector<double> best(states, 0.0);
  std::vector<std::size_t> split(states, 0);  // 0 = kept whole
  std::vector<double> vec(k);
  std::vector<long> s(k, 0), y(k, 0);

  for (std::size_t idx = 1; idx < states; ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = k; i-- > 0;) {
      s[i] = static_cast<long>(rem / stride[i]);
      rem %= stride[i];
    }
    for (std::size_t i = 0; i < k; ++i) vec[i] = static_cast<double>(s[i]);
    double b = corner_max(vec, q);
    std::size_t choice = 0;
    // Odometer over 0 <= y <= s, skipping y = 0 and taking each unordered pair once.
    std::fill(y.begin(), y.end(), 0);
    std::size_t yidx = 0;
    for (;;) {
      std::size_t i = 0;
      while (i < k && y[i] == s[i]) {
        yidx -= static_cast<std::size_t>(y[i]) * stride[i];
        y[i] = 0;
        ++i;
      }
      if (i == k) break;
      ++y[i];
      yidx += stride[i];
      if (yidx >= idx) continue;           // y == s
      if (yidx > idx - yidx) continue;     // mirror already considered
      const double v = best[yidx] + best[idx - yidx];
      if (v < b - kTieTol * std::max(1.0, b)) {
        b = v;
        choice = yidx;
      }
    }
    best[idx] = b;
    split[idx] = choice;
  }

  Decomposition d;
  d.target = x;
  d.method = "bruteforce";
  std::vector<std::size_t> stack{states - 1};
  if (x.is_zero()) stack.clear();
  while (!stack.empty()) {
    const std::size_t idx = stack.back();
    stack.pop_back();
    if (split[idx] != 0) {
      stack.push_back(idx - split[idx]);
      stack.push_back(split[idx]);
      continue;
    }
    std::vector<double> part(k);
    std::size_t rem = idx;
    for (std::size_t i = k; i-- > 0;) {
      part[i] = static_cast<double>(rem / stride[i]);
      rem %= stride[i];
    }
    d.parts.emplace_back(std::move(part));
  }
  d.w_sum = x.is_zero() ? 0.0 : best[states - 1];
  return d;
}

Decomposition w_star_solve(const BlockVector& x, const QMatrix& q, int restarts, std::uint64_t seed) {
  require_same_k(x, q);
  if (x.is_zero()) {
    Decomposition d;
    d.target = x;
    d.method = "empty";
    return d;
  }
  if (is_pseudodefinite(q)) {
    Decomposition d;
    d.target = x;
    d.method = "pseudodefinite";
    d.parts.push_back(x);
    d.w_sum = w_value(x, q).value;
    return d;
  }
  const auto stages = relaxation_chain(x, q, x.k(), std::max(restarts, 0), seed);
  return to_decomposition(stages.back().alloc, x, q, "local-search");
}

double w_ell(const BlockVector& x, const QMatrix& q, int ell, std::uint64_t seed) {
  require_same_k(x, q);
  if (ell < 1) throw std::invalid_argument("w_ell: ell must be >= 1");
  if (x.is_zero()) return 0.0;
  const std::size_t capped = std::min<std::size_t>(static_cast<std::size_t>(ell), x.k());
  const auto stages = relaxation_chain(x, q, capped, kDefaultRestarts, seed);
  return stages.back().value;
}

Decomposition near_optimal_integer_system(const BlockVector& x, const QMatrix& q, std::uint64_t seed) {
  require_same_k(x, q);
  if (!x.is_integral()) throw ModelError("near_optimal_integer_system requires an integer vector");
  Decomposition whole;
  whole.target = x;
  whole.method = "integer-single";
  if (x.is_zero()) return whole;
  whole.parts.push_back(x);
  whole.w_sum = corner_max(x.values(), q);

  const Decomposition real = w_star_solve(x, q, kDefaultRestarts, seed);
  const std::size_t k = x.k();
  Alloc a;
  for (const auto& p : real.parts) {
    std::vector<double> row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = std::floor(p[i] + 1e-9);
    a.push_back(std::move(row));
  }
  std::vector<double> vals(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) vals[t] = row_value(a[t], q);
  for (std::size_t i = 0; i < k; ++i) {
    double assigned = 0.0;
    for (const auto& row : a) assigned += row[i];
    auto missing = static_cast<long>(std::llround(x[i] - assigned));
    if (missing < 0) {
      // Rounding overshoot from the 1e-9 nudge; take units back from the largest holders.
      for (; missing < 0; ++missing) {
        std::size_t t = 0;
        for (std::size_t u = 1; u < a.size(); ++u)
          if (a[u][i] > a[t][i]) t = u;
        a[t][i] -= 1.0;
        vals[t] = row_value(a[t], q);
      }
    }
    for (; missing > 0; --missing) {
      std::size_t pick = 0;
      double pick_gain = std::numeric_limits<double>::infinity();
      std::vector<double> trial;
      for (std::size_t t = 0; t < a.size(); ++t) {
        trial = a[t];
        trial[i] += 1.0;
        const double inc = row_value(trial, q) - vals[t];
        if (inc < pick_gain - kTieTol) {
          pick_gain = inc;
          pick = t;
        }
      }
      a[pick][i] += 1.0;
      vals[pick] = row_value(a[pick], q);
    }
  }
  Decomposition rounded = to_decomposition(a, x, q, "integer-rounded");
  if (rounded.w_sum < whole.w_sum - kTieTol * std::max(1.0, whole.w_sum)) return rounded;
  return whole;
}

bool is_pseudodefinite(const QMatrix& q) {
  const auto k = static_cast<Eigen::Index>(q.k());
  if (k <= 1) return true;
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = q(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  // Project onto the zero-sum hyperplane; the all-ones direction maps to a
  // zero eigenvalue, which does not affect the sign test.
  const Eigen::MatrixXd proj =
      Eigen::MatrixXd::Identity(k, k) - Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(k));
  const Eigen::MatrixXd restricted = proj * m * proj;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -1e-9;
}

WStarBounds w_star_bounds(const BlockVector& x, const QMatrix& q) {
  require_same_k(x, q);
  WStarBounds b;
  const double qh = q_hat(x, q);
  b.upper = qh * x.norm();
  double trace = 0.0;
  for (std::size_t i = 0; i < q.k(); ++i) trace += q(i, i);
  b.lower = q_star(q) > 0.0 ? qh * qh * x.norm() / trace : 0.0;
  return b;
}

}  // namespace sbmchrom
