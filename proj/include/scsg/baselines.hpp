#ifndef SCSG_BASELINES_HPP
#define SCSG_BASELINES_HPP

// Comparison solvers: SVRG, SARAH, Katyusha^ns, SGD (constant / decayed)
// and full gradient descent. All charge the same IfoCounter contract and
// produce the same trace format as run_scsg.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scsg/core.hpp"
#include "scsg/geometry.hpp"
#include "scsg/run.hpp"
#include "scsg/sampling.hpp"

namespace scsg {

enum class Algorithm { scsg, svrg, sarah, katyusha_ns, sgd, sgd_decay, gd };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::scsg: return "scsg";
    case Algorithm::svrg: return "svrg";
    case Algorithm::sarah: return "sarah";
    case Algorithm::katyusha_ns: return "katyusha-ns";
    case Algorithm::sgd: return "sgd";
    case Algorithm::sgd_decay: return "sgd-decay";
    case Algorithm::gd: return "gd";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::scsg, Algorithm::svrg, Algorithm::sarah,
                      Algorithm::katyusha_ns, Algorithm::sgd, Algorithm::sgd_decay,
                      Algorithm::gd})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

enum class SnapshotRule { last_iterate, uniform_random };

/// Called with (inner step index, iterate) after every inner update.
using InnerHook = std::function<void(std::uint64_t, const Vector&)>;

struct BaselineConfig {
  double eta = 0.1;
  std::size_t inner_loop = 0;  // m (SVRG / SARAH / Katyusha)
  std::size_t b = 1;
  double pass_budget = 50.0;
  std::uint64_t seed = 0;
  ChargeConvention charge = ChargeConvention::single;
  MinibatchSampling sampling = MinibatchSampling::without_replacement;
  SnapshotRule svrg_snapshot = SnapshotRule::last_iterate;

  // Katyusha^ns: step alpha_s = katyusha_scale * eta / tau_{1,s}. The
  // overrides pin tau_1, tau_2 or alpha (used by reduction tests).
  double katyusha_scale = 1.0;
  std::optional<double> katyusha_tau1;
  std::optional<double> katyusha_tau2;
  std::optional<double> katyusha_alpha;

  InnerHook on_inner_step;

  void validate(std::size_t n) const {
    if (!(eta > 0.0)) throw std::invalid_argument("baseline: eta must be > 0");
    if (b < 1 || b > n) throw std::invalid_argument("baseline: need 1 <= b <= n");
    if (!(pass_budget >= 0.0)) throw std::invalid_argument("baseline: pass budget < 0");
    if (!(katyusha_scale > 0.0))
      throw std::invalid_argument("baseline: katyusha scale must be > 0");
  }
};

namespace detail {

inline SolverResult start(const FiniteSumProblem& p, const BaselineConfig& cfg,
                          const Vector& x0, std::string_view name) {
  p.check_dim(x0);
  cfg.validate(p.n());
  SolverResult r;
  r.trace.algorithm = std::string(name);
  r.trace.seed = cfg.seed;
  r.trace.n = p.n();
  return r;
}

inline Vector euclidean_step(const FiniteSumProblem& p, const Vector& x,
                             const Vector& direction, double eta) {
  return mirror_prox_step(MirrorStepSpec{eta, p.regularizer(), {}}, x, direction);
}

inline Vector minibatch_mean_gradient(const FiniteSumProblem& p,
                                      std::span<const Index> batch, const Vector& x,
                                      IfoCounter& counter) {
  Vector g = Vector::Zero(p.dim());
  accumulate_batch(p, batch, x, 1.0 / static_cast<double>(batch.size()), g, counter);
  return g;
}

}  // namespace detail

/// SVRG: full gradient at the snapshot, then m minibatch steps with
/// nu = grad f_I(x_k) - grad f_I(snapshot) + mu.
inline SolverResult run_svrg(const FiniteSumProblem& p, const BaselineConfig& cfg,
                             const Vector& x0) {
  SolverResult res = detail::start(p, cfg, x0, "svrg");
  TraceRecorder rec(p, res);
  rec.observe(0, x0);
  res.x = x0;
  if (cfg.inner_loop == 0) return res;

  RngStream rng(cfg.seed);
  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  Vector snapshot = x0;
  std::uint64_t step_index = 0;
  while (counter.units() < budget) {
    const Vector mu = full_gradient(p, snapshot, counter);
    std::uint64_t steps = cfg.inner_loop;
    if (cfg.svrg_snapshot == SnapshotRule::uniform_random)
      steps = rng.uniform_below(cfg.inner_loop);
    Vector x = snapshot;
    for (std::uint64_t k = 0; k < steps; ++k) {
      const auto mb = draw_minibatch(p.n(), cfg.b, cfg.sampling, rng);
      const Vector nu = vr_direction(p, mb, x, snapshot, mu, counter, cfg.charge);
      x = detail::euclidean_step(p, x, nu, cfg.eta);
      require_finite(x, "svrg");
      if (cfg.on_inner_step) cfg.on_inner_step(step_index, x);
      ++step_index;
    }
    snapshot = std::move(x);
    rec.observe(counter.units(), snapshot);
  }
  res.x = std::move(snapshot);
  res.solver_units = counter.units();
  return res;
}

/// SARAH: nu_0 = full gradient, nu_k = grad f_I(x_k) - grad f_I(x_{k-1}) + nu_{k-1};
/// m updates per outer loop, the last iterate is the next snapshot.
inline SolverResult run_sarah(const FiniteSumProblem& p, const BaselineConfig& cfg,
                              const Vector& x0) {
  SolverResult res = detail::start(p, cfg, x0, "sarah");
  TraceRecorder rec(p, res);
  rec.observe(0, x0);
  res.x = x0;
  if (cfg.inner_loop == 0) return res;

  RngStream rng(cfg.seed);
  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  Vector snapshot = x0;
  std::uint64_t step_index = 0;
  while (counter.units() < budget) {
    Vector nu = full_gradient(p, snapshot, counter);
    Vector prev = snapshot;
    Vector x = detail::euclidean_step(p, snapshot, nu, cfg.eta);
    require_finite(x, "sarah");
    if (cfg.on_inner_step) cfg.on_inner_step(step_index, x);
    ++step_index;
    for (std::size_t k = 1; k < cfg.inner_loop; ++k) {
      const auto mb = draw_minibatch(p.n(), cfg.b, cfg.sampling, rng);
      nu = vr_direction(p, mb, x, prev, nu, counter, cfg.charge);
      prev = x;
      x = detail::euclidean_step(p, x, nu, cfg.eta);
      require_finite(x, "sarah");
      if (cfg.on_inner_step) cfg.on_inner_step(step_index, x);
      ++step_index;
    }
    snapshot = std::move(x);
    rec.observe(counter.units(), snapshot);
  }
  res.x = std::move(snapshot);
  res.solver_units = counter.units();
  return res;
}

/// Momentum weight tau_{1,s} = 2 / (s + 4) of Katyusha^ns (externally sourced:
/// Allen-Zhu, "Katyusha", Algorithm 2).
inline double katyusha_tau1(std::uint64_t s) { return 2.0 / (static_cast<double>(s) + 4.0); }

/// Katyusha^ns with option II for y. Per outer loop s:
///   x_{k+1} = tau1 z_k + tau2 snapshot + (1 - tau1 - tau2) y_k
///   z_{k+1} = prox(z_k - alpha_s g, alpha_s),  g the SVRG estimator at x_{k+1}
///   y_{k+1} = x_{k+1} + tau1 (z_{k+1} - z_k)
/// and the next snapshot is the mean of the m y's. tau2 = 1/(2b) follows the
/// minibatch variant of the same reference.
inline SolverResult run_katyusha_ns(const FiniteSumProblem& p, const BaselineConfig& cfg,
                                    const Vector& x0) {
  SolverResult res = detail::start(p, cfg, x0, "katyusha-ns");
  TraceRecorder rec(p, res);
  rec.observe(0, x0);
  res.x = x0;
  if (cfg.inner_loop == 0) return res;

  RngStream rng(cfg.seed);
  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  const double tau2 = cfg.katyusha_tau2.value_or(0.5 / static_cast<double>(cfg.b));
  Vector snapshot = x0, y = x0, z = x0;
  std::uint64_t step_index = 0;
  for (std::uint64_t s = 0; counter.units() < budget; ++s) {
    const double tau1 = cfg.katyusha_tau1.value_or(katyusha_tau1(s));
    const double alpha = cfg.katyusha_alpha.value_or(cfg.katyusha_scale * cfg.eta / tau1);
    const Vector mu = full_gradient(p, snapshot, counter);
    Vector y_sum = Vector::Zero(p.dim());
    for (std::size_t k = 0; k < cfg.inner_loop; ++k) {
      const Vector x = tau1 * z + tau2 * snapshot + (1.0 - tau1 - tau2) * y;
      const auto mb = draw_minibatch(p.n(), cfg.b, cfg.sampling, rng);
      const Vector g = vr_direction(p, mb, x, snapshot, mu, counter, cfg.charge);
      Vector z_next = detail::euclidean_step(p, z, g, alpha);
      y = x + tau1 * (z_next - z);
      z = std::move(z_next);
      require_finite(y, "katyusha-ns");
      y_sum += y;
      if (cfg.on_inner_step) cfg.on_inner_step(step_index, y);
      ++step_index;
    }
    snapshot = y_sum / static_cast<double>(cfg.inner_loop);
    rec.observe(counter.units(), snapshot);
  }
  res.x = std::move(snapshot);
  res.solver_units = counter.units();
  return res;
}

enum class StepDecay { constant, inverse_t };

/// Step size at step t (t = 0, 1, ...): eta or eta / (1 + t).
inline double sgd_step_size(double eta, StepDecay decay, std::uint64_t t) {
  return decay == StepDecay::constant ? eta : eta / (1.0 + static_cast<double>(t));
}

/// Minibatch SGD, traced every ceil(n / b) steps.
inline SolverResult run_sgd(const FiniteSumProblem& p, const BaselineConfig& cfg,
                            const Vector& x0, StepDecay decay) {
  SolverResult res =
      detail::start(p, cfg, x0, decay == StepDecay::constant ? "sgd" : "sgd-decay");
  TraceRecorder rec(p, res);
  rec.observe(0, x0);

  RngStream rng(cfg.seed);
  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  const std::uint64_t cadence = (p.n() + cfg.b - 1) / cfg.b;
  Vector x = x0;
  std::uint64_t t = 0;
  bool traced = true;
  while (counter.units() < budget) {
    const auto mb = draw_minibatch(p.n(), cfg.b, cfg.sampling, rng);
    const Vector g = detail::minibatch_mean_gradient(p, mb, x, counter);
    x = detail::euclidean_step(p, x, g, sgd_step_size(cfg.eta, decay, t));
    require_finite(x, res.trace.algorithm);
    if (cfg.on_inner_step) cfg.on_inner_step(t, x);
    ++t;
    traced = t % cadence == 0;
    if (traced) rec.observe(counter.units(), x);
  }
  if (!traced) rec.observe(counter.units(), x);
  res.x = std::move(x);
  res.solver_units = counter.units();
  return res;
}

/// Full gradient descent with a constant step, traced every step.
inline SolverResult run_gd(const FiniteSumProblem& p, const BaselineConfig& cfg,
                           const Vector& x0) {
  SolverResult res = detail::start(p, cfg, x0, "gd");
  TraceRecorder rec(p, res);
  rec.observe(0, x0);

  IfoCounter counter;
  const std::uint64_t budget = budget_units(cfg.pass_budget, p.n());
  Vector x = x0;
  std::uint64_t t = 0;
  while (counter.units() < budget) {
    const Vector g = full_gradient(p, x, counter);
    x = detail::euclidean_step(p, x, g, cfg.eta);
    require_finite(x, "gd");
    if (cfg.on_inner_step) cfg.on_inner_step(t++, x);
    rec.observe(counter.units(), x);
  }
  res.x = std::move(x);
  res.solver_units = counter.units();
  return res;
}

}  // namespace scsg

#endif  // SCSG_BASELINES_HPP
