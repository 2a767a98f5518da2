#ifndef SCSG_HARNESS_HPP
#define SCSG_HARNESS_HPP

// Benchmark pipeline: problem preparation, step-size sweeps, optimum
// estimation, complexity diagnostics, T(eps) and trace emission.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "scsg/baselines.hpp"
#include "scsg/core.hpp"
#include "scsg/dataset.hpp"
#include "scsg/objectives.hpp"
#include "scsg/scsg.hpp"

namespace scsg {

using ordered_json = nlohmann::ordered_json;

enum class L2Mode { smooth, composite, none };
enum class Loss { logistic, least_squares };

inline std::string_view to_string(L2Mode m) {
  switch (m) {
    case L2Mode::smooth: return "smooth";
    case L2Mode::composite: return "composite";
    case L2Mode::none: return "none";
  }
  return "?";
}

inline L2Mode parse_l2_mode(std::string_view s) {
  if (s == "smooth") return L2Mode::smooth;
  if (s == "composite") return L2Mode::composite;
  if (s == "none") return L2Mode::none;
  throw std::invalid_argument("unknown l2 mode: " + std::string(s));
}

inline std::string_view to_string(Loss l) {
  return l == Loss::logistic ? "logistic" : "least-squares";
}

inline Loss parse_loss(std::string_view s) {
  if (s == "logistic") return Loss::logistic;
  if (s == "least-squares") return Loss::least_squares;
  throw std::invalid_argument("unknown loss: " + std::string(s));
}

inline std::string_view to_string(ChargeConvention c) {
  return c == ChargeConvention::single ? "single" : "strict";
}

inline ChargeConvention parse_charge(std::string_view s) {
  if (s == "single") return ChargeConvention::single;
  if (s == "strict") return ChargeConvention::strict;
  throw std::invalid_argument("unknown charge convention: " + std::string(s));
}

inline std::string_view to_string(MinibatchSampling m) {
  return m == MinibatchSampling::without_replacement ? "without" : "with";
}

inline MinibatchSampling parse_sampling(std::string_view s) {
  if (s == "without") return MinibatchSampling::without_replacement;
  if (s == "with") return MinibatchSampling::with_replacement;
  throw std::invalid_argument("unknown minibatch sampling: " + std::string(s));
}

/// Shortest decimal that round-trips.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct BenchSettings {
  double passes = 50.0;
  double b_frac = 1e-4;
  double alpha = 1.25;
  double m0_frac = 0.005;
  double B0_frac = 0.001;
  int grid_lo = -10;
  int grid_hi = 10;
  double trim = 0.05;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double inner_mult = 2.0;  // m = inner_mult * n for SVRG / SARAH / Katyusha
  double optimum_passes = 5000.0;
  double katyusha_scale = 1.0;
  ChargeConvention charge = ChargeConvention::single;
  MinibatchSampling sampling = MinibatchSampling::without_replacement;
  L2Mode l2 = L2Mode::smooth;
  Loss loss = Loss::logistic;

  ordered_json to_json() const {
    return ordered_json{{"passes", passes},
                        {"b-frac", b_frac},
                        {"alpha", alpha},
                        {"m0-frac", m0_frac},
                        {"B0-frac", B0_frac},
                        {"eta-grid", std::to_string(grid_lo) + ":" + std::to_string(grid_hi)},
                        {"trim", trim},
                        {"seed", seed},
                        {"inner-mult", inner_mult},
                        {"optimum-passes", optimum_passes},
                        {"katyusha-scale", katyusha_scale},
                        {"charge", to_string(charge)},
                        {"minibatch", to_string(sampling)},
                        {"l2", to_string(l2)},
                        {"loss", to_string(loss)}};
  }
};

/// Parses "lo:hi" (inclusive) into a pair.
inline std::pair<int, int> parse_grid(std::string_view s) {
  const auto colon = s.find(':');
  auto parse_int = [&](std::string_view t) {
    int v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      throw std::invalid_argument("bad eta grid '" + std::string(s) + "'");
    return v;
  };
  if (colon == std::string_view::npos) {
    const int v = parse_int(s);
    return {v, v};
  }
  const int lo = parse_int(s.substr(0, colon));
  const int hi = parse_int(s.substr(colon + 1));
  if (lo > hi) throw std::invalid_argument("eta grid lower bound exceeds upper bound");
  return {lo, hi};
}

/// Trimmed problem ready for solvers, with its smoothness estimate.
struct Workload {
  std::shared_ptr<const FiniteSumProblem> problem;
  SmoothnessEstimate smoothness;
  double L = 0.0;  // aggregate L_i, plus 2/n when the L2 term is folded in
  std::size_t raw_rows = 0;
  std::size_t features = 0;
  int classes = 0;
};

inline Workload prepare_workload(const Dataset& data, const BenchSettings& s) {
  Workload w;
  w.raw_rows = data.rows();
  w.features = data.cols();
  std::shared_ptr<const ComponentModel> model;
  if (s.loss == Loss::logistic) {
    if (!data.is_classification())
      throw std::invalid_argument("logistic loss needs positive integer labels");
    MulticlassLogistic full(data.features, data.labels, std::max(2, data.classes));
    auto t = trim_outliers(full, s.trim);
    w.smoothness = std::move(t.estimate);
    w.classes = t.model.classes();
    model = std::make_shared<MulticlassLogistic>(std::move(t.model));
  } else {
    LeastSquares full(data.features, data.targets);
    auto t = trim_outliers(full, s.trim);
    w.smoothness = std::move(t.estimate);
    model = std::make_shared<LeastSquares>(std::move(t.model));
  }
  const double lambda = 1.0 / static_cast<double>(model->size());
  w.L = w.smoothness.aggregate;
  switch (s.l2) {
    case L2Mode::smooth:
      w.problem = std::make_shared<FiniteSumProblem>(model, lambda);
      w.L += 2.0 * lambda;
      break;
    case L2Mode::composite:
      w.problem = std::make_shared<FiniteSumProblem>(model, 0.0, Regularizer::l2_scaled(lambda));
      break;
    case L2Mode::none:
      w.problem = std::make_shared<FiniteSumProblem>(model);
      break;
  }
  return w;
}

inline std::size_t minibatch_size(double frac, std::size_t n) {
  const auto b = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  return std::clamp<std::size_t>(b, 1, n);
}

inline ScsgConfig make_scsg_config(const BenchSettings& s, std::size_t n, double eta,
                                   std::uint64_t seed, double passes) {
  ScsgConfig c;
  c.alpha = s.alpha;
  c.b = minibatch_size(s.b_frac, n);
  c.m0 = s.m0_frac * static_cast<double>(n);
  c.B0 = std::min(s.B0_frac * static_cast<double>(n), static_cast<double>(n));
  c.eta = eta;
  c.pass_budget = passes;
  c.seed = seed;
  c.charge = s.charge;
  c.sampling = s.sampling;
  return c;
}

inline BaselineConfig make_baseline_config(const BenchSettings& s, std::size_t n, double eta,
                                           std::uint64_t seed, double passes) {
  BaselineConfig c;
  c.eta = eta;
  c.b = minibatch_size(s.b_frac, n);
  c.inner_loop = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(s.inner_mult * static_cast<double>(n))));
  c.pass_budget = passes;
  c.seed = seed;
  c.charge = s.charge;
  c.sampling = s.sampling;
  c.katyusha_scale = s.katyusha_scale;
  return c;
}

/// Seed for grid point `exponent` of `algo`: hash of (base seed, label).
inline std::uint64_t run_seed(std::uint64_t base, Algorithm algo, int exponent) {
  return derive_seed(base, fnv1a(std::string(to_string(algo)) + ":" + std::to_string(exponent)));
}

inline SolverResult run_algorithm(Algorithm algo, const FiniteSumProblem& p,
                                  const BenchSettings& s, double eta, std::uint64_t seed,
                                  const Vector& x0, double passes) {
  SolverResult r;
  std::map<std::string, std::string> snap;
  if (algo == Algorithm::scsg) {
    const ScsgConfig c = make_scsg_config(s, p.n(), eta, seed, passes);
    r = run_scsg(p, c, x0);
    snap = {{"alpha", format_shortest(c.alpha)}, {"m0", format_shortest(c.m0)},
            {"B0", format_shortest(c.B0)}, {"b", std::to_string(c.b)}};
  } else {
    const BaselineConfig c = make_baseline_config(s, p.n(), eta, seed, passes);
    switch (algo) {
      case Algorithm::svrg: r = run_svrg(p, c, x0); break;
      case Algorithm::sarah: r = run_sarah(p, c, x0); break;
      case Algorithm::katyusha_ns: r = run_katyusha_ns(p, c, x0); break;
      case Algorithm::sgd: r = run_sgd(p, c, x0, StepDecay::constant); break;
      case Algorithm::sgd_decay: r = run_sgd(p, c, x0, StepDecay::inverse_t); break;
      case Algorithm::gd: r = run_gd(p, c, x0); break;
      case Algorithm::scsg: break;
    }
    snap = {{"b", std::to_string(c.b)}, {"m", std::to_string(c.inner_loop)}};
    if (algo == Algorithm::katyusha_ns) snap["katyusha_scale"] = format_shortest(c.katyusha_scale);
  }
  snap["eta"] = format_shortest(eta);
  snap["passes"] = format_shortest(passes);
  snap["charge"] = std::string(to_string(s.charge));
  snap["minibatch"] = std::string(to_string(s.sampling));
  r.trace.config = std::move(snap);
  return r;
}

struct SweepEntry {
  int exponent = 0;
  double c = 0.0;
  double eta = 0.0;
  double final_objective = std::numeric_limits<double>::infinity();
  double best_seen = std::numeric_limits<double>::infinity();
  bool diverged = false;
  std::string error;
  SolverResult result;
};

struct SweepResult {
  Algorithm algo = Algorithm::scsg;
  std::vector<SweepEntry> grid;
  std::size_t best = 0;

  const SweepEntry& best_entry() const { return grid.at(best); }
};

class SweepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worker count from the request, capped by BENCH_WORKERS when set.
inline std::size_t effective_workers(std::size_t requested) {
  std::size_t w = std::max<std::size_t>(1, requested);
  if (const char* env = std::getenv("BENCH_WORKERS")) {
    std::size_t cap = 0;
    const std::string_view sv(env);
    const auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), cap);
    if (ec == std::errc() && cap >= 1) w = std::min(w, cap);
  }
  return w;
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::min(std::max<std::size_t>(1, workers), std::max<std::size_t>(1, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// One run per exponent k with eta = 2^k / L; best = smallest final F.
/// Runs that diverge or end non-finite score +inf.
inline SweepResult sweep(const FiniteSumProblem& p, Algorithm algo, int lo, int hi,
                         const BenchSettings& s, double L, const Vector& x0) {
  if (lo > hi) throw std::invalid_argument("sweep: empty grid");
  if (!(L > 0.0)) throw std::invalid_argument("sweep: L must be > 0");
  SweepResult out;
  out.algo = algo;
  out.grid.resize(static_cast<std::size_t>(hi - lo + 1));
  parallel_for(out.grid.size(), effective_workers(s.workers), [&](std::size_t i) {
    SweepEntry& e = out.grid[i];
    e.exponent = lo + static_cast<int>(i);
    e.c = std::ldexp(1.0, e.exponent);
    e.eta = e.c / L;
    try {
      e.result = run_algorithm(algo, p, s, e.eta, run_seed(s.seed, algo, e.exponent), x0,
                               s.passes);
      e.final_objective = e.result.trace.back().objective;
      e.best_seen = e.result.best_objective;
    } catch (const DivergenceError& ex) {
      e.diverged = true;
      e.error = ex.what();
    }
    if (!std::isfinite(e.final_objective)) {
      e.diverged = true;
      e.final_objective = std::numeric_limits<double>::infinity();
    }
  });
  bool any = false;
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    if (out.grid[i].diverged) continue;
    if (!any || out.grid[i].final_objective < out.grid[out.best].final_objective) out.best = i;
    any = true;
  }
  if (!any)
    throw SweepFailure(std::string(to_string(algo)) + ": every run diverged on grid 2^" +
                       std::to_string(lo) + ".." + "2^" + std::to_string(hi) + " / L");
  return out;
}

struct OptimumEstimate {
  Vector x_star;
  double f_star = 0.0;
  double svrg_objective = std::numeric_limits<double>::quiet_NaN();
  bool cross_check_ok = true;
  std::string warning;
  int scsg_exponent = 0;
  int svrg_exponent = 0;
};

/// Long SCSG run at the tuned step (best-seen iterate), cross-checked
/// against an equally long SVRG run.
inline OptimumEstimate estimate_optimum(const FiniteSumProblem& p, const BenchSettings& s,
                                        double L, int scsg_exponent, int svrg_exponent,
                                        const Vector& x0, bool cross_check = true) {
  OptimumEstimate o;
  o.scsg_exponent = scsg_exponent;
  o.svrg_exponent = svrg_exponent;
  const SolverResult r =
      run_algorithm(Algorithm::scsg, p, s, std::ldexp(1.0, scsg_exponent) / L,
                    run_seed(s.seed, Algorithm::scsg, scsg_exponent), x0, s.optimum_passes);
  o.x_star = r.best_x;
  o.f_star = r.best_objective;
  if (cross_check) {
    try {
      const SolverResult v =
          run_algorithm(Algorithm::svrg, p, s, std::ldexp(1.0, svrg_exponent) / L,
                        run_seed(s.seed, Algorithm::svrg, svrg_exponent), x0,
                        s.optimum_passes);
      o.svrg_objective = v.best_objective;
    } catch (const DivergenceError&) {
      o.svrg_objective = std::numeric_limits<double>::infinity();
    }
    if (o.f_star > o.svrg_objective + 1e-9) {
      o.cross_check_ok = false;
      o.warning = "SVRG reached " + format_g17(o.svrg_objective) +
                  ", below the SCSG estimate " + format_g17(o.f_star);
    }
  }
  return o;
}

struct Diagnostics {
  double H = 0.0;    // (1/n) sum ||grad f_i(x*)||^2
  double D_x = 0.0;  // L ||x0 - x*||^2
  double D_H = 0.0;  // H / L
  double D = 0.0;    // max(D_x, D_H)
  double L = 0.0;
  std::optional<double> mu_hint;
  std::optional<double> kappa;

  ordered_json to_json() const {
    ordered_json j{{"H", H}, {"D_x", D_x}, {"D_H", D_H}, {"D", D}, {"L", L}};
    j["mu_hint"] = mu_hint ? ordered_json(*mu_hint) : ordered_json(nullptr);
    j["kappa"] = kappa ? ordered_json(*kappa) : ordered_json(nullptr);
    return j;
  }
};

inline Diagnostics diagnostics(const FiniteSumProblem& p, const Vector& x_star,
                               const Vector& x0, double L,
                               std::optional<double> mu_hint = std::nullopt) {
  p.check_dim(x_star);
  p.check_dim(x0);
  if (!(L > 0.0)) throw std::invalid_argument("diagnostics: L must be > 0");
  Diagnostics d;
  d.L = L;
  IfoCounter eval;
  double h = 0.0;
  for (Index i = 0; i < p.n(); ++i) h += component_gradient(p, i, x_star, eval).squaredNorm();
  d.H = h / static_cast<double>(p.n());
  d.D_x = L * (x0 - x_star).squaredNorm();
  d.D_H = d.H / L;
  d.D = std::max(d.D_x, d.D_H);
  if (mu_hint) {
    if (!(*mu_hint > 0.0)) throw std::invalid_argument("diagnostics: mu hint must be > 0");
    d.mu_hint = mu_hint;
    d.kappa = L / *mu_hint;
  }
  return d;
}

inline double suboptimality_ratio(double f, double f_star, double f0) {
  return (f - f_star) / (f0 - f_star);
}

/// Effective passes at the first sample from which every later sample has
/// suboptimality ratio <= eps; nullopt if the trace never settles there.
inline std::optional<double> time_to_accuracy(const RunTrace& trace, double f_star,
                                              double f0, double eps) {
  if (!(f0 > f_star))
    throw std::invalid_argument("time_to_accuracy: F0 must exceed F*");
  std::optional<std::size_t> first;
  for (std::size_t k = trace.samples.size(); k-- > 0;) {
    if (!(suboptimality_ratio(trace.samples[k].objective, f_star, f0) <= eps)) break;
    first = k;
  }
  if (!first) return std::nullopt;
  return trace.passes(*first);
}

enum class TraceFormat { csv, json };

inline TraceFormat parse_trace_format(std::string_view s) {
  if (s == "csv") return TraceFormat::csv;
  if (s == "json") return TraceFormat::json;
  throw std::invalid_argument("unknown trace format: " + std::string(s));
}

inline void write_trace_csv(std::ostream& out, const RunTrace& t, double f_star, double f0) {
  out << "effective_passes,objective,suboptimality_ratio\n";
  for (std::size_t k = 0; k < t.samples.size(); ++k)
    out << format_g17(t.passes(k)) << ',' << format_g17(t.samples[k].objective) << ','
        << format_g17(suboptimality_ratio(t.samples[k].objective, f_star, f0)) << '\n';
}

inline ordered_json trace_to_json(const RunTrace& t, double f_star, double f0) {
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : t.config) cfg[k] = v;
  ordered_json samples = ordered_json::array();
  for (std::size_t k = 0; k < t.samples.size(); ++k)
    samples.push_back({{"ifo_units", t.samples[k].ifo_units},
                       {"effective_passes", t.passes(k)},
                       {"objective", t.samples[k].objective},
                       {"suboptimality_ratio",
                        suboptimality_ratio(t.samples[k].objective, f_star, f0)}});
  return ordered_json{{"algorithm", t.algorithm}, {"seed", t.seed},   {"n", t.n},
                      {"F_star", f_star},          {"F0", f0},         {"config", cfg},
                      {"samples", samples}};
}

inline void emit_trace(const RunTrace& t, double f_star, double f0,
                       const std::filesystem::path& path, TraceFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file " + path.string());
  if (fmt == TraceFormat::csv)
    write_trace_csv(out, t, f_star, f0);
  else
    out << trace_to_json(t, f_star, f0).dump(2) << '\n';
  if (!out) throw std::runtime_error("error writing trace file " + path.string());
}

struct TraceRow {
  double effective_passes = 0.0;
  double objective = 0.0;
  double suboptimality_ratio = 0.0;
};

inline std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (++lineno == 1) continue;
    if (detail::trim(line).empty()) continue;
    const auto f = detail::split(line, ',');
    TraceRow r;
    if (f.size() != 3 || !detail::parse_double(f[0], r.effective_passes) ||
        !detail::parse_double(f[1], r.objective) ||
        !detail::parse_double(f[2], r.suboptimality_ratio))
      throw ParseError("<trace>", lineno, "malformed trace row");
    rows.push_back(r);
  }
  return rows;
}

struct AccuracyLevel {
  double eps;
  const char* key;
};

inline const std::vector<AccuracyLevel>& accuracy_levels() {
  static const std::vector<AccuracyLevel> levels{
      {1e-1, "1e-1"}, {1e-2, "1e-2"}, {1e-3, "1e-3"}, {1e-4, "1e-4"}};
  return levels;
}

struct BenchmarkReport {
  Workload workload;
  double f0 = 0.0;
  OptimumEstimate optimum;
  std::vector<SweepResult> sweeps;
  ordered_json summary;

  const SweepResult& sweep_for(Algorithm a) const {
    for (const auto& s : sweeps)
      if (s.algo == a) return s;
    throw std::out_of_range("no sweep for " + std::string(to_string(a)));
  }
};

inline std::string trace_file_name(Algorithm a, double c) {
  return std::string(to_string(a)) + "_" + format_shortest(c) + ".csv";
}

/// Trim, estimate L, sweep every algorithm, estimate the optimum and build
/// the summary. Writes per-run CSVs and summary.json when `out_dir` is set.
inline BenchmarkReport run_benchmark(const Dataset& data, const BenchSettings& s,
                                     std::vector<Algorithm> algos,
                                     const std::optional<std::filesystem::path>& out_dir) {
  BenchmarkReport rep;
  rep.workload = prepare_workload(data, s);
  const FiniteSumProblem& p = *rep.workload.problem;
  const double L = rep.workload.L;
  const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(p.dim()));
  {
    IfoCounter eval;
    rep.f0 = full_objective(p, x0, eval);
  }

  // The optimum needs tuned SCSG and SVRG steps even when not requested.
  std::vector<Algorithm> all = algos;
  for (Algorithm need : {Algorithm::scsg, Algorithm::svrg})
    if (std::find(all.begin(), all.end(), need) == all.end()) all.push_back(need);
  for (Algorithm a : all) rep.sweeps.push_back(sweep(p, a, s.grid_lo, s.grid_hi, s, L, x0));

  rep.optimum = estimate_optimum(p, s, L, rep.sweep_for(Algorithm::scsg).best_entry().exponent,
                                 rep.sweep_for(Algorithm::svrg).best_entry().exponent, x0);
  const double f_star = rep.optimum.f_star;

  if (out_dir) std::filesystem::create_directories(*out_dir);

  ordered_json algos_json = ordered_json::object();
  for (Algorithm a : algos) {
    const SweepResult& sw = rep.sweep_for(a);
    const SweepEntry& best = sw.best_entry();
    ordered_json tta = ordered_json::object();
    for (const auto& level : accuracy_levels()) {
      const auto t = rep.f0 > f_star
                         ? time_to_accuracy(best.result.trace, f_star, rep.f0, level.eps)
                         : std::nullopt;
      tta[level.key] = t ? ordered_json(*t) : ordered_json(nullptr);
    }
    ordered_json grid = ordered_json::array();
    for (const SweepEntry& e : sw.grid) {
      ordered_json g{{"exponent", e.exponent}, {"c", e.c}, {"eta", e.eta},
                     {"diverged", e.diverged}};
      g["final_objective"] = e.diverged ? ordered_json(nullptr) : ordered_json(e.final_objective);
      g["best_seen_objective"] = e.diverged ? ordered_json(nullptr) : ordered_json(e.best_seen);
      grid.push_back(std::move(g));
      if (out_dir && !e.diverged)
        emit_trace(e.result.trace, f_star, rep.f0, *out_dir / trace_file_name(a, e.c),
                   TraceFormat::csv);
    }
    algos_json[std::string(to_string(a))] = ordered_json{
        {"best_exponent", best.exponent},
        {"best_c", best.c},
        {"eta", best.eta},
        {"final_objective", best.final_objective},
        {"final_ratio", suboptimality_ratio(best.final_objective, f_star, rep.f0)},
        {"best_seen_objective", best.best_seen},
        {"effective_passes", best.result.trace.passes(best.result.trace.samples.size() - 1)},
        {"time_to_accuracy", tta},
        {"grid", grid}};
  }

  const auto& w = rep.workload;
  rep.summary = ordered_json{
      {"dataset",
       {{"rows", w.raw_rows}, {"rows_after_trim", p.n()}, {"features", w.features},
        {"classes", w.classes}, {"dim", p.dim()}}},
      {"settings", s.to_json()},
      {"L", L},
      {"F0", rep.f0},
      {"optimum",
       {{"F_star", f_star},
        {"scsg_exponent", rep.optimum.scsg_exponent},
        {"svrg_objective", rep.optimum.svrg_objective},
        {"svrg_exponent", rep.optimum.svrg_exponent},
        {"cross_check_ok", rep.optimum.cross_check_ok},
        {"warning", rep.optimum.warning}}},
      {"algorithms", algos_json}};
  if (out_dir) {
    std::ofstream out(*out_dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << rep.summary.dump(2) << '\n';
  }
  return rep;
}

}  // namespace scsg

#endif  // SCSG_HARNESS_HPP
