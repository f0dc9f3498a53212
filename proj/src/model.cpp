#include "sbmchrom/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sbmchrom {

namespace {

SymMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.size();
  if (k == 0) throw ModelError("matrix must have at least one row");
  SymMatrix m(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (rows[i].size() != k) throw ModelError("matrix must be square");
    for (std::size_t j = 0; j < k; ++j) {
      if (rows[i][j] != rows[j][i]) throw ModelError("matrix must be symmetric");
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

void check_symmetric(const SymMatrix& m) {
  for (std::size_t i = 0; i < m.k(); ++i)
    for (std::size_t j = i + 1; j < m.k(); ++j)
      if (m(i, j) != m(j, i)) throw ModelError("matrix must be symmetric");
}

}  // namespace

std::vector<std::vector<double>> SymMatrix::rows() const {
  std::vector<std::vector<double>> out(k_, std::vector<double>(k_));
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = 0; j < k_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

ProbMatrix::ProbMatrix(const std::vector<std::vector<double>>& rows) : ProbMatrix(from_rows(rows)) {}

ProbMatrix::ProbMatrix(SymMatrix m) : SymMatrix(std::move(m)) {
  if (k_ == 0) throw ModelError("probability matrix must be non-empty");
  check_symmetric(*this);
  for (double p : data_) {
    if (!(p >= 0.0)) throw ModelError("edge probability must be >= 0, got " + std::to_string(p));
    if (!(p < 1.0)) throw ModelError("edge probability must be < 1, got " + std::to_string(p));
  }
}

QMatrix::QMatrix(const std::vector<std::vector<double>>& rows) : QMatrix(from_rows(rows)) {}

QMatrix::QMatrix(SymMatrix m) : SymMatrix(std::move(m)) {
  if (k_ == 0) throw ModelError("Q matrix must be non-empty");
  check_symmetric(*this);
  for (double q : data_)
    if (!(q >= 0.0) || !std::isfinite(q)) throw ModelError("Q entries must be finite and >= 0");
}

QMatrix QMatrix::operator+(const QMatrix& other) const {
  if (other.k() != k_) throw ModelError("Q dimension mismatch");
  SymMatrix s(k_);
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = i; j < k_; ++j) s.set(i, j, (*this)(i, j) + other(i, j));
  return QMatrix(std::move(s));
}

QMatrix QMatrix::scaled(double s) const {
  SymMatrix out(k_);
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = i; j < k_; ++j) out.set(i, j, s * (*this)(i, j));
  return QMatrix(std::move(out));
}

BlockVector::BlockVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ModelError("block vector components must be finite and >= 0");
  norm_ = std::accumulate(values_.begin(), values_.end(), 0.0);
  integral_ = std::all_of(values_.begin(), values_.end(), [](double v) { return v == std::floor(v); });
}

BlockVector BlockVector::integral(const std::vector<long>& counts) {
  std::vector<double> v(counts.begin(), counts.end());
  for (long c : counts)
    if (c < 0) throw ModelError("block counts must be >= 0");
  return BlockVector(std::move(v));
}

BlockVector BlockVector::zeros(std::size_t k) { return BlockVector(std::vector<double>(k, 0.0)); }

std::vector<long> BlockVector::counts() const {
  std::vector<long> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::lround(v); });
  return out;
}

BlockVector BlockVector::operator+(const BlockVector& other) const {
  if (other.k() != k()) throw ModelError("block vector dimension mismatch");
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return BlockVector(std::move(out));
}

BlockVector BlockVector::scaled(double s) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= s;
  return BlockVector(std::move(out));
}

ModelInstance::ModelInstance(BlockVector sizes_, ProbMatrix probs_, std::optional<double> sigma)
    : sizes(std::move(sizes_)), probs(std::move(probs_)), q(build_q(probs)), sigma_hint(sigma) {
  if (sizes.k() != probs.k()) throw ModelError("sizes and probability matrix disagree on k");
  if (!sizes.is_integral()) throw ModelError("block sizes must be integers");
  if (sigma_hint && !(*sigma_hint >= 0.0 && *sigma_hint < 0.25))
    throw ModelError("sigma_hint must lie in [0, 1/4)");
}

QMatrix build_q(const ProbMatrix& p) {
  SymMatrix q(p.k());
  for (std::size_t i = 0; i < p.k(); ++i)
    for (std::size_t j = i; j < p.k(); ++j) {
      const double pij = p(i, j);
      if (!(pij >= 0.0 && pij < 1.0)) throw ModelError("edge probability outside [0, 1)");
      q.set(i, j, -std::log1p(-pij));
    }
  return QMatrix(std::move(q));
}

ProbMatrix probs_from_q(const QMatrix& q) {
  SymMatrix p(q.k());
  for (std::size_t i = 0; i < q.k(); ++i)
    for (std::size_t j = i; j < q.k(); ++j) p.set(i, j, -std::expm1(-q(i, j)));
  return ProbMatrix(std::move(p));
}

double q_star(const QMatrix& q) {
  double best = 0.0;
  for (std::size_t i = 0; i < q.k(); ++i) best = std::max(best, q(i, i));
  return best;
}

double q_hat(const BlockVector& x, const QMatrix& q) {
  if (x.k() != q.k()) throw ModelError("dimension mismatch in q_hat");
  if (x.is_zero()) return q_star(q);
  double s = 0.0;
  for (std::size_t i = 0; i < x.k(); ++i) s += x[i] * q(i, i);
  return s / x.norm();
}

double quadratic_form(std::span<const double> y, const QMatrix& q) {
  if (y.size() != q.k()) throw ModelError("dimension mismatch in quadratic_form");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    double row = q(i, i) * y[i];
    for (std::size_t j = i + 1; j < y.size(); ++j) row += 2.0 * q(i, j) * y[j];
    s += y[i] * row;
  }
  return s;
}

double quadratic_form(const BlockVector& y, const QMatrix& q) { return quadratic_form(y.values(), q); }

}  // namespace sbmchrom
