#ifndef SCSG_RUN_HPP
#define SCSG_RUN_HPP

// Pieces shared by every solver: the result type, trace recording with
// best-seen tracking, and the variance-reduced direction kernel.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "scsg/core.hpp"
#include "scsg/geometry.hpp"
#include "scsg/sampling.hpp"

namespace scsg {

/// How inner-loop gradient differences are charged. `single` charges b per
/// step: grad f_I(x_k) and grad f_I(x_ref) share indices and count as one
/// oracle call per index. `strict` charges both evaluations (2b).
enum class ChargeConvention { single, strict };

enum class MinibatchSampling { without_replacement, with_replacement };

struct SolverResult {
  Vector x;                   // last iterate / anchor
  Vector best_x;              // best-seen iterate among traced points
  double best_objective = std::numeric_limits<double>::infinity();
  RunTrace trace;
  std::uint64_t solver_units = 0;
  std::uint64_t eval_units = 0;
  std::vector<std::string> warnings;
};

/// Evaluates F on an evaluation counter and appends to the trace.
class TraceRecorder {
 public:
  TraceRecorder(const FiniteSumProblem& p, SolverResult& out) : p_(p), out_(out) {}

  void observe(std::uint64_t units, const Vector& x) {
    const double f = full_objective(p_, x, eval_);
    out_.trace.record(units, f);
    if (f < out_.best_objective || out_.best_x.size() == 0) {
      out_.best_objective = f;
      out_.best_x = x;
    }
    out_.eval_units = eval_.units();
  }

 private:
  const FiniteSumProblem& p_;
  SolverResult& out_;
  IfoCounter eval_;
};

inline std::uint64_t inner_charge(std::size_t batch, ChargeConvention c) {
  return c == ChargeConvention::strict ? 2 * batch : batch;
}

/// grad f_I(x) - grad f_I(x_ref) + base, with I a minibatch (duplicates
/// allowed). Shared by SCSG, SVRG, SARAH and Katyusha.
inline Vector vr_direction(const FiniteSumProblem& p, std::span<const Index> batch,
                           const Vector& x, const Vector& x_ref, const Vector& base,
                           IfoCounter& counter, ChargeConvention convention) {
  // Both batch sums run in the same order, so x == x_ref gives base exactly.
  Vector at_x = Vector::Zero(base.size());
  Vector at_ref = Vector::Zero(base.size());
  const double w = 1.0 / static_cast<double>(batch.size());
  for (Index i : batch) {
    p.accumulate_component_gradient(i, x, w, at_x);
    p.accumulate_component_gradient(i, x_ref, w, at_ref);
  }
  counter.charge(inner_charge(batch.size(), convention));
  return base + (at_x - at_ref);
}

inline std::vector<Index> draw_minibatch(std::size_t n, std::size_t b,
                                         MinibatchSampling mode, RngStream& rng) {
  if (mode == MinibatchSampling::with_replacement)
    return sample_with_replacement(n, b, rng);
  return sample_subset(n, b, rng);
}

inline std::uint64_t budget_units(double passes, std::size_t n) {
  if (!(passes >= 0.0)) throw std::invalid_argument("pass budget must be >= 0");
  return static_cast<std::uint64_t>(std::ceil(passes * static_cast<double>(n)));
}

inline void require_finite(const Vector& x, const std::string& algo) {
  if (!x.allFinite())
    throw DivergenceError(algo + ": non-finite iterate (step size too large?)");
}

}  // namespace scsg

#endif  // SCSG_RUN_HPP
