#ifndef SCSG_SCSG_HPP
#define SCSG_SCSG_HPP

// Stochastically controlled stochastic gradient (SCSG).
//
// Epoch j (j = 1, 2, ...):
//   1. sample a batch I_j of B_j distinct indices, mu_j = grad f_{I_j}(anchor);
//   2. draw N_j ~ Geom(m_j / (m_j + b));
//   3. run N_j variance-reduced steps from the anchor, each on a fresh
//      minibatch of size b, using
//        nu = grad f_I(x_k) - grad f_I(anchor) + mu_j
//      followed by a mirror-proximal step (a plain gradient step for the
//      Euclidean generator without a composite term);
//   4. the last inner iterate becomes the next anchor.
//
// The schedule is m_j = m0 alpha^j, B_j = ceil(min(B0 alpha^{2j}, n)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scsg/core.hpp"
#include "scsg/geometry.hpp"
#include "scsg/run.hpp"
#include "scsg/sampling.hpp"

namespace scsg {

struct ScsgConfig {
  double alpha = 1.25;
  double m0 = 50.0;
  double B0 = 10.0;
  std::size_t b = 1;
  double eta = 0.1;
  double pass_budget = 50.0;
  std::uint64_t seed = 0;
  DistanceGenerator generator{};
  ChargeConvention charge = ChargeConvention::single;
  MinibatchSampling sampling = MinibatchSampling::without_replacement;
  std::uint64_t max_inner_steps = 100'000'000;
  // Only consulted by check_theory_conditions; the solver never reads it.
  std::optional<double> xi;

  void validate(std::size_t n) const {
    if (!(alpha > 1.0)) throw std::invalid_argument("scsg: alpha must be > 1");
    if (!(m0 > 0.0)) throw std::invalid_argument("scsg: m0 must be > 0");
    if (!(B0 > 0.0)) throw std::invalid_argument("scsg: B0 must be > 0");
    if (B0 > static_cast<double>(n)) throw std::invalid_argument("scsg: B0 must be <= n");
    if (b < 1 || b > n) throw std::invalid_argument("scsg: need 1 <= b <= n");
    if (!(eta > 0.0)) throw std::invalid_argument("scsg: eta must be > 0");
    if (xi && !(*xi > 0.0 && *xi < 1.0))
      throw std::invalid_argument("scsg: xi must lie in (0, 1)");
  }
};

struct EpochParams {
  double m = 0.0;      // expected inner-loop work m_j (real valued)
  std::size_t B = 1;   // anchor batch size B_j
  double gamma = 0.0;  // geometric parameter m_j / (m_j + b)
};

inline EpochParams schedule(const ScsgConfig& cfg, std::size_t n, std::size_t j) {
  if (j < 1) throw std::invalid_argument("schedule: epochs are numbered from 1");
  const double jj = static_cast<double>(j);
  EpochParams e;
  e.m = cfg.m0 * std::pow(cfg.alpha, jj);
  const double batch = std::min(cfg.B0 * std::pow(cfg.alpha, 2.0 * jj),
                                static_cast<double>(n));
  e.B = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(batch)));
  e.gamma = e.m / (e.m + static_cast<double>(cfg.b));
  return e;
}

/// Number of epochs until B_j reaches n: ceil(log(n / B0) / (2 log alpha)).
inline std::size_t saturation_epoch(double B0, double alpha, std::size_t n) {
  const double v = std::log(static_cast<double>(n) / B0) / (2.0 * std::log(alpha));
  return v <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(v));
}

/// Warnings for violated step / inner-loop conditions of the convergence
/// theory (Gamma = 1 / (4 alpha^{1/xi})). Empty when xi is unset.
inline std::vector<std::string> check_theory_conditions(const ScsgConfig& cfg,
                                                        double L) {
  std::vector<std::string> w;
  if (!cfg.xi) return w;
  const double gamma = 1.0 / (4.0 * std::pow(cfg.alpha, 1.0 / *cfg.xi));
  const double b = static_cast<double>(cfg.b);
  if (cfg.m0 < b / gamma)
    w.push_back("m0 < b / Gamma (" + std::to_string(b / gamma) + ")");
  const double bound =
      std::min({1.0 - gamma, 2.0 * gamma * b, gamma * gamma * b * cfg.B0 / cfg.m0});
  if (2.0 * cfg.eta * L > bound)
    w.push_back("2 eta L = " + std::to_string(2.0 * cfg.eta * L) + " exceeds " +
                std::to_string(bound));
  return w;
}

struct EpochState {
  Vector anchor;
  Vector anchor_gradient;  // mu_j = grad f_{I_j}(anchor)
  std::vector<Index> anchor_batch;
};

inline EpochState begin_epoch(const FiniteSumProblem& p, Vector anchor,
                              std::vector<Index> batch, IfoCounter& counter) {
  EpochState s;
  s.anchor_gradient = batch_gradient(p, batch, anchor, counter);
  s.anchor = std::move(anchor);
  s.anchor_batch = std::move(batch);
  return s;
}

/// nu = grad f_I(x) - grad f_I(anchor) + mu_j.
inline Vector variance_reduced_gradient(const EpochState& s, const FiniteSumProblem& p,
                                        std::span<const Index> minibatch,
                                        const Vector& x, IfoCounter& counter,
                                        ChargeConvention c = ChargeConvention::single) {
  if (minibatch.empty())
    throw std::invalid_argument("variance_reduced_gradient: empty minibatch");
  return vr_direction(p, minibatch, x, s.anchor, s.anchor_gradient, counter, c);
}

struct EpochOutcome {
  Vector anchor;
  std::uint64_t inner_steps = 0;
  EpochParams params;
  bool capped = false;
};

inline EpochOutcome run_epoch(const FiniteSumProblem& p, const ScsgConfig& cfg,
                              const Vector& anchor, std::size_t j, RngStream& rng,
                              IfoCounter& counter) {
  EpochOutcome out;
  out.params = schedule(cfg, p.n(), j);
  EpochState state =
      begin_epoch(p, anchor, sample_subset(p.n(), out.params.B, rng), counter);

  std::uint64_t steps = sample_geometric(out.params.gamma, rng);
  if (steps > cfg.max_inner_steps) {
    steps = cfg.max_inner_steps;
    out.capped = true;
  }
  out.inner_steps = steps;

  const MirrorStepSpec step{cfg.eta, p.regularizer(), cfg.generator};
  Vector x = state.anchor;
  for (std::uint64_t k = 0; k < steps; ++k) {
    const auto mb = draw_minibatch(p.n(), cfg.b, cfg.sampling, rng);
    const Vector nu = variance_reduced_gradient(state, p, mb, x, counter, cfg.charge);
    x = mirror_prox_step(step, x, nu);
    require_finite(x, "scsg");
  }
  out.anchor = std::move(x);
  return out;
}

struct ScsgResult : SolverResult {
  std::size_t epochs = 0;
  std::uint64_t total_inner_steps = 0;
};

/// Runs epochs until the pass budget is spent, tracing F after each one.
inline ScsgResult run_scsg(const FiniteSumProblem& p, const ScsgConfig& cfg,
                           const Vector& x0) {
  p.check_dim(x0);
  cfg.validate(p.n());
  ScsgResult res;
  res.trace.algorithm = "scsg";
  res.trace.seed = cfg.seed;
  res.trace.n = p.n();
  TraceRecorder rec(p, res);
  rec.observe(0, x0);

  RngStream rng(cfg.seed);
  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  Vector anchor = x0;
  std::size_t j = 0;
  while (counter.units() < budget) {
    ++j;
    EpochOutcome e = run_epoch(p, cfg, anchor, j, rng, counter);
    if (e.capped)
      res.warnings.push_back("epoch " + std::to_string(j) +
                             ": inner loop length hit the cap");
    res.total_inner_steps += e.inner_steps;
    anchor = std::move(e.anchor);
    rec.observe(counter.units(), anchor);
  }
  res.epochs = j;
  res.x = std::move(anchor);
  res.solver_units = counter.units();
  return res;
}

}  // namespace scsg

#endif  // SCSG_SCSG_HPP
