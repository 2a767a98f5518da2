#ifndef SCSG_OBJECTIVES_HPP
#define SCSG_OBJECTIVES_HPP

// Concrete component losses over a row-major feature matrix, plus the
// row-norm smoothness estimate and outlier trimming used by the benchmark.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "scsg/core.hpp"
#include "scsg/regularizer.hpp"

namespace scsg {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

namespace detail {

inline double row_dot(const SparseRows& a, Index i, const double* x) {
  double s = 0.0;
  for (SparseRows::InnerIterator it(a, static_cast<Eigen::Index>(i)); it; ++it)
    s += it.value() * x[it.col()];
  return s;
}

inline void row_axpy(const SparseRows& a, Index i, double w, double* y) {
  for (SparseRows::InnerIterator it(a, static_cast<Eigen::Index>(i)); it; ++it)
    y[it.col()] += w * it.value();
}

inline SparseRows select_rows(const SparseRows& a, const std::vector<Index>& rows) {
  std::vector<Eigen::Triplet<double>> trips;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (SparseRows::InnerIterator it(a, static_cast<Eigen::Index>(rows[r])); it; ++it)
      trips.emplace_back(static_cast<int>(r), static_cast<int>(it.col()), it.value());
  SparseRows out(static_cast<Eigen::Index>(rows.size()), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

}  // namespace detail

/// f_i(x) = log(1 + sum_{k<K} exp(a_i^T x_k)) - sum_{k<K} I(y_i = k) a_i^T x_k.
///
/// Labels are 1-based in {1, ..., K}; class K is the reference class with
/// an implicit zero parameter block. The parameter vector stacks the K-1
/// class blocks: x = (x_1, ..., x_{K-1}), block k at offset (k-1) * p.
class MulticlassLogistic final : public ComponentModel {
 public:
  MulticlassLogistic(SparseRows features, std::vector<int> labels, int classes)
      : a_(std::move(features)), y_(std::move(labels)), k_(classes) {
    a_.makeCompressed();
    if (k_ < 2) throw std::invalid_argument("MulticlassLogistic: need K >= 2");
    if (static_cast<std::size_t>(a_.rows()) != y_.size())
      throw std::invalid_argument("MulticlassLogistic: row/label count mismatch");
    if (y_.empty()) throw std::invalid_argument("MulticlassLogistic: no rows");
    for (std::size_t i = 0; i < y_.size(); ++i)
      if (y_[i] < 1 || y_[i] > k_)
        throw std::invalid_argument("MulticlassLogistic: label " + std::to_string(y_[i]) +
                                    " at row " + std::to_string(i) + " outside [1, K]");
  }

  std::size_t size() const override { return y_.size(); }
  std::size_t dim() const override {
    return static_cast<std::size_t>(a_.cols()) * static_cast<std::size_t>(k_ - 1);
  }
  std::size_t features_dim() const { return static_cast<std::size_t>(a_.cols()); }
  int classes() const { return k_; }
  const SparseRows& features() const { return a_; }
  const std::vector<int>& labels() const { return y_; }

  double value(Index i, const Vector& x) const override {
    thread_local std::vector<double> z;
    return logits_and_lse(i, x, z);
  }

  double accumulate_gradient(Index i, const Vector& x, double weight,
                             Vector& grad) const override {
    thread_local std::vector<double> z;
    const double f = logits_and_lse(i, x, z);
    // After logits_and_lse, z holds softmax probabilities of the free classes.
    const auto p = static_cast<std::size_t>(a_.cols());
    for (int k = 0; k + 1 < k_; ++k) {
      const double coef = z[k] - (y_[i] == k + 1 ? 1.0 : 0.0);
      if (coef != 0.0) detail::row_axpy(a_, i, weight * coef, grad.data() + k * p);
    }
    return f;
  }

  MulticlassLogistic subset(const std::vector<Index>& rows) const {
    std::vector<int> y;
    y.reserve(rows.size());
    for (Index r : rows) y.push_back(y_.at(r));
    return MulticlassLogistic(detail::select_rows(a_, rows), std::move(y), k_);
  }

 private:
  // Returns f_i(x); leaves softmax probabilities of classes 1..K-1 in z.
  double logits_and_lse(Index i, const Vector& x, std::vector<double>& z) const {
    const auto p = static_cast<std::size_t>(a_.cols());
    z.resize(static_cast<std::size_t>(k_ - 1));
    double mx = 0.0;  // reference logit
    for (int k = 0; k + 1 < k_; ++k) {
      z[k] = detail::row_dot(a_, i, x.data() + k * p);
      mx = std::max(mx, z[k]);
    }
    const double own = y_[i] < k_ ? z[y_[i] - 1] : 0.0;
    double s = std::exp(-mx);
    for (auto& v : z) {
      v = std::exp(v - mx);
      s += v;
    }
    for (auto& v : z) v /= s;
    return mx + std::log(s) - own;
  }

  SparseRows a_;
  std::vector<int> y_;
  int k_;
};

/// f_i(x) = (a_i^T x - b_i)^2 / 2.
class LeastSquares final : public ComponentModel {
 public:
  LeastSquares(SparseRows features, Vector targets)
      : a_(std::move(features)), b_(std::move(targets)) {
    a_.makeCompressed();
    if (a_.rows() != b_.size())
      throw std::invalid_argument("LeastSquares: row/target count mismatch");
    if (b_.size() == 0) throw std::invalid_argument("LeastSquares: no rows");
  }

  LeastSquares(const Eigen::MatrixXd& dense, Vector targets)
      : LeastSquares(SparseRows(dense.sparseView()), std::move(targets)) {}

  std::size_t size() const override { return static_cast<std::size_t>(b_.size()); }
  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  const SparseRows& features() const { return a_; }
  const Vector& targets() const { return b_; }

  double value(Index i, const Vector& x) const override {
    const double r = detail::row_dot(a_, i, x.data()) - b_[static_cast<Eigen::Index>(i)];
    return 0.5 * r * r;
  }

  double accumulate_gradient(Index i, const Vector& x, double weight,
                             Vector& grad) const override {
    const double r = detail::row_dot(a_, i, x.data()) - b_[static_cast<Eigen::Index>(i)];
    detail::row_axpy(a_, i, weight * r, grad.data());
    return 0.5 * r * r;
  }

  LeastSquares subset(const std::vector<Index>& rows) const {
    Vector b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      b[static_cast<Eigen::Index>(r)] = b_[static_cast<Eigen::Index>(rows.at(r))];
    return LeastSquares(detail::select_rows(a_, rows), std::move(b));
  }

 private:
  SparseRows a_;
  Vector b_;
};

struct SmoothnessEstimate {
  std::vector<double> per_component;  // L_i = 2 ||a_i||^2 for every input row
  std::vector<Index> kept;            // surviving rows, ascending
  double aggregate = 0.0;             // mean of L_i over kept rows
  double trim_fraction = 0.0;
};

/// L_i = 2 ||a_i||^2; drops the ceil(trim * n) rows with the largest L_i.
/// Ties are broken toward dropping the later row.
inline SmoothnessEstimate estimate_smoothness(const SparseRows& features,
                                              double trim_fraction) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0))
    throw std::invalid_argument("estimate_smoothness: trim fraction must lie in [0, 1)");
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw std::invalid_argument("estimate_smoothness: no rows");

  SmoothnessEstimate est;
  est.trim_fraction = trim_fraction;
  est.per_component.resize(n);
  for (Index i = 0; i < n; ++i)
    est.per_component[i] = 2.0 * features.row(static_cast<Eigen::Index>(i)).squaredNorm();

  // 1e-9 absorbs representation error in products like 0.05 * 2000.
  const auto drop = static_cast<std::size_t>(
      std::ceil(trim_fraction * static_cast<double>(n) - 1e-9));
  if (drop >= n)
    throw std::invalid_argument("estimate_smoothness: trimming would remove every row");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (est.per_component[a] != est.per_component[b])
      return est.per_component[a] < est.per_component[b];
    return a < b;
  });
  est.kept.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(drop));
  std::sort(est.kept.begin(), est.kept.end());

  double s = 0.0;
  for (Index i : est.kept) s += est.per_component[i];
  est.aggregate = s / static_cast<double>(est.kept.size());
  return est;
}

template <class Model>
struct Trimmed {
  SmoothnessEstimate estimate;
  Model model;
};

/// Estimates smoothness and returns the model restricted to the kept rows.
template <class Model>
Trimmed<Model> trim_outliers(const Model& model, double trim_fraction) {
  SmoothnessEstimate est = estimate_smoothness(model.features(), trim_fraction);
  Model reduced = model.subset(est.kept);
  return {std::move(est), std::move(reduced)};
}

}  // namespace scsg

#endif  // SCSG_OBJECTIVES_HPP
