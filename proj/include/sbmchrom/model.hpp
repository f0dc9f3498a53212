#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbmchrom {

/// Raised when a model object would violate its invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense symmetric k x k matrix of reals, row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t k, double fill = 0.0) : k_(k), data_(k * k, fill) {}

  std::size_t k() const noexcept { return k_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * k_ + j]; }

  /// Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) noexcept {
    data_[i * k_ + j] = v;
    data_[j * k_ + i] = v;
  }

  std::vector<std::vector<double>> rows() const;

  static std::vector<std::vector<double>> to_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> out;
    for (const auto& r : rows) out.emplace_back(r);
    return out;
  }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 protected:
  std::size_t k_ = 0;
  std::vector<double> data_;
};

/// Edge-probability matrix P. Entries lie in [0, 1).
class ProbMatrix : public SymMatrix {
 public:
  ProbMatrix() = default;
  explicit ProbMatrix(const std::vector<std::vector<double>>& rows);
  ProbMatrix(std::initializer_list<std::initializer_list<double>> rows) : ProbMatrix(to_rows(rows)) {}
  explicit ProbMatrix(SymMatrix m);
};

/// q_ij = ln(1 / (1 - p_ij)). Symmetric, finite, nonnegative.
class QMatrix : public SymMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(const std::vector<std::vector<double>>& rows);
  QMatrix(std::initializer_list<std::initializer_list<double>> rows) : QMatrix(to_rows(rows)) {}
  explicit QMatrix(SymMatrix m);

  QMatrix operator+(const QMatrix& other) const;
  QMatrix scaled(double s) const;
};

/// Nonnegative k-vector with its 1-norm. `integral()` instances hold whole
/// numbers only (block sizes, per-block counts).
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(std::vector<double> values);
  static BlockVector integral(const std::vector<long>& counts);
  static BlockVector zeros(std::size_t k);

  std::size_t k() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double norm() const noexcept { return norm_; }
  bool is_integral() const noexcept { return integral_; }
  bool is_zero() const noexcept { return norm_ == 0.0; }

  /// Integer components; only meaningful for integral vectors.
  std::vector<long> counts() const;

  BlockVector operator+(const BlockVector& other) const;
  BlockVector scaled(double s) const;

  friend bool operator==(const BlockVector& a, const BlockVector& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
  double norm_ = 0.0;
  bool integral_ = false;
};

/// Block sizes, probabilities, the derived Q, and an optional density
/// exponent sigma in [0, 1/4).
struct ModelInstance {
  BlockVector sizes;
  ProbMatrix probs;
  QMatrix q;
  std::optional<double> sigma_hint;

  ModelInstance() = default;
  ModelInstance(BlockVector sizes, ProbMatrix probs, std::optional<double> sigma_hint = std::nullopt);

  std::size_t k() const noexcept { return sizes.k(); }
  long total() const noexcept { return static_cast<long>(sizes.norm()); }
};

QMatrix build_q(const ProbMatrix& p);

/// Inverse transform 1 - exp(-q), entrywise.
ProbMatrix probs_from_q(const QMatrix& q);

/// max_i q_ii.
double q_star(const QMatrix& q);

/// Diagonal average weighted by x; q_star(q) when x is zero.
double q_hat(const BlockVector& x, const QMatrix& q);

/// y^T Q y.
double quadratic_form(const BlockVector& y, const QMatrix& q);
double quadratic_form(std::span<const double> y, const QMatrix& q);

}  // namespace sbmchrom
