#ifndef SCSG_CORE_HPP
#define SCSG_CORE_HPP

// Finite-sum problem abstraction and IFO cost accounting.
//
// Component indices are 0-based throughout the library (0 <= i < n). Every
// gradient-oracle call charges an IfoCounter: one unit per (f_i, grad f_i)
// pair, so a batch of size B costs exactly B units.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scsg/regularizer.hpp"

namespace scsg {

using Index = std::size_t;

/// Thrown when a solver produces a non-finite iterate.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IfoCounter {
 public:
  void charge(std::uint64_t units) { units_ += units; }
  std::uint64_t units() const { return units_; }

 private:
  std::uint64_t units_ = 0;
};

inline double effective_passes(std::uint64_t units, std::size_t n) {
  if (n == 0) throw std::invalid_argument("effective_passes: n must be >= 1");
  return static_cast<double>(units) / static_cast<double>(n);
}

inline double effective_passes(const IfoCounter& counter, std::size_t n) {
  return effective_passes(counter.units(), n);
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

/// The n component losses f_i. Implementations are immutable after
/// construction and safe to share across threads.
class ComponentModel {
 public:
  virtual ~ComponentModel() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;

  virtual double value(Index i, const Vector& x) const = 0;

  /// grad += weight * grad f_i(x); returns f_i(x).
  virtual double accumulate_gradient(Index i, const Vector& x, double weight,
                                     Vector& grad) const = 0;
};

/// F(x) = (1/n) sum_i [f_i(x) + smooth_l2 * ||x||^2] + psi(x).
///
/// `smooth_l2` folds an L2 penalty into every component (the smooth path);
/// `psi` is the composite term handled through prox / mirror steps.
class FiniteSumProblem {
 public:
  FiniteSumProblem(std::shared_ptr<const ComponentModel> model,
                   double smooth_l2 = 0.0, Regularizer psi = {})
      : model_(std::move(model)), smooth_l2_(smooth_l2), psi_(psi) {
    if (!model_) throw std::invalid_argument("FiniteSumProblem: null model");
    if (model_->size() == 0)
      throw std::invalid_argument("FiniteSumProblem: n must be >= 1");
    if (model_->dim() == 0)
      throw std::invalid_argument("FiniteSumProblem: dim must be >= 1");
    if (!(smooth_l2_ >= 0.0))
      throw std::invalid_argument("FiniteSumProblem: smooth_l2 must be >= 0");
  }

  std::size_t n() const { return model_->size(); }
  std::size_t dim() const { return model_->dim(); }
  const ComponentModel& model() const { return *model_; }
  std::shared_ptr<const ComponentModel> model_ptr() const { return model_; }
  double smooth_l2() const { return smooth_l2_; }
  const Regularizer& regularizer() const { return psi_; }

  void check_index(Index i) const {
    if (i >= n())
      throw std::out_of_range("component index " + std::to_string(i) +
                              " out of range [0, " + std::to_string(n()) + ")");
  }

  void check_dim(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim())
      throw std::invalid_argument("dimension mismatch: got " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim()));
  }

  double component_value(Index i, const Vector& x) const {
    double v = model_->value(i, x);
    if (smooth_l2_ != 0.0) v += smooth_l2_ * x.squaredNorm();
    return v;
  }

  double accumulate_component_gradient(Index i, const Vector& x, double weight,
                                       Vector& grad) const {
    double v = model_->accumulate_gradient(i, x, weight, grad);
    if (smooth_l2_ != 0.0) {
      v += smooth_l2_ * x.squaredNorm();
      grad.noalias() += (2.0 * smooth_l2_ * weight) * x;
    }
    return v;
  }

 private:
  std::shared_ptr<const ComponentModel> model_;
  double smooth_l2_;
  Regularizer psi_;
};

namespace detail {

/// grad += scale * sum_{i in idx} grad f_i(x), charging |idx| units.
/// No distinctness check: with-replacement minibatches go through here.
inline void accumulate_batch(const FiniteSumProblem& p, std::span<const Index> idx,
                             const Vector& x, double scale, Vector& grad,
                             IfoCounter& counter) {
  for (Index i : idx) p.accumulate_component_gradient(i, x, scale, grad);
  counter.charge(idx.size());
}

inline void check_batch(const FiniteSumProblem& p, std::span<const Index> idx) {
  if (idx.empty()) throw std::invalid_argument("batch_gradient: empty index set");
  std::vector<Index> sorted(idx.begin(), idx.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= p.n()) p.check_index(sorted.back());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("batch_gradient: duplicate index");
}

}  // namespace detail

inline Vector component_gradient(const FiniteSumProblem& p, Index i, const Vector& x,
                                 IfoCounter& counter) {
  p.check_index(i);
  p.check_dim(x);
  Vector g = Vector::Zero(p.dim());
  p.accumulate_component_gradient(i, x, 1.0, g);
  counter.charge(1);
  return g;
}

/// Unweighted mean of component gradients over a set of distinct indices.
inline Vector batch_gradient(const FiniteSumProblem& p, std::span<const Index> idx,
                             const Vector& x, IfoCounter& counter) {
  detail::check_batch(p, idx);
  p.check_dim(x);
  Vector g = Vector::Zero(p.dim());
  detail::accumulate_batch(p, idx, x, 1.0 / static_cast<double>(idx.size()), g,
                           counter);
  return g;
}

inline Vector full_gradient(const FiniteSumProblem& p, const Vector& x,
                            IfoCounter& counter) {
  p.check_dim(x);
  Vector g = Vector::Zero(p.dim());
  const double w = 1.0 / static_cast<double>(p.n());
  for (Index i = 0; i < p.n(); ++i) p.accumulate_component_gradient(i, x, w, g);
  counter.charge(p.n());
  return g;
}

/// (1/n) sum_i f_i(x), smooth part only.
inline double smooth_objective(const FiniteSumProblem& p, const Vector& x,
                               IfoCounter& counter) {
  p.check_dim(x);
  double s = 0.0;
  for (Index i = 0; i < p.n(); ++i) s += p.model().value(i, x);
  counter.charge(p.n());
  s /= static_cast<double>(p.n());
  if (p.smooth_l2() != 0.0) s += p.smooth_l2() * x.squaredNorm();
  return s;
}

/// F(x) = f(x) + psi(x). Charges n units to `counter`; callers pass an
/// evaluation counter so monitoring never inflates solver cost.
inline double full_objective(const FiniteSumProblem& p, const Vector& x,
                             IfoCounter& counter) {
  return smooth_objective(p, x, counter) + p.regularizer().value(x);
}

struct TraceSample {
  std::uint64_t ifo_units = 0;
  double objective = 0.0;
};

/// Objective samples along a run, keyed by solver IFO units.
struct RunTrace {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::size_t n = 1;
  std::map<std::string, std::string> config;
  std::vector<TraceSample> samples;

  void record(std::uint64_t units, double objective) {
    if (!samples.empty() && units <= samples.back().ifo_units)
      throw std::logic_error("RunTrace: ifo units must be strictly increasing");
    samples.push_back({units, objective});
  }

  double passes(std::size_t k) const {
    return effective_passes(samples.at(k).ifo_units, n);
  }

  bool empty() const { return samples.empty(); }
  const TraceSample& back() const { return samples.back(); }
};

}  // namespace scsg

#endif  // SCSG_CORE_HPP
