// bench: step-size sweeps, optimum estimation and diagnostics for SCSG and
// its baselines on LIBSVM / CSV datasets.
//
//   bench run --data d.libsvm --format libsvm --algo all --out results/
//   bench optimum --data d.libsvm --out results/
//   bench diagnostics --data d.libsvm --out results/
//   bench report --out results/
//   bench synth --output data/synthetic.libsvm
//
// Every option may also come from `--config file`, a flat key=value file
// whose keys are the long option names; command-line values win.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scsg/harness.hpp"

namespace fs = std::filesystem;
using scsg::ordered_json;

namespace {

struct Options {
  std::string data;
  std::string format = "libsvm";
  std::string algo = "all";
  std::string eta_grid = "-10:10";
  std::string out = "bench_out";
  std::string charge = "single";
  std::string minibatch = "without";
  std::string l2 = "smooth";
  std::string loss = "logistic";
  std::string optimum_file;
  double mu_hint = 0.0;
  scsg::BenchSettings s;
};

std::vector<scsg::Algorithm> parse_algos(const std::string& spec) {
  using scsg::Algorithm;
  if (spec == "all")
    return {Algorithm::scsg, Algorithm::svrg,      Algorithm::sarah, Algorithm::katyusha_ns,
            Algorithm::sgd,  Algorithm::sgd_decay, Algorithm::gd};
  std::vector<Algorithm> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(scsg::parse_algorithm(tok));
  if (out.empty()) throw std::invalid_argument("no algorithm selected");
  return out;
}

void add_data_options(CLI::App* sub, Options& o) {
  sub->add_option("--data", o.data, "Dataset path")->required();
  sub->add_option("--format", o.format, "libsvm | csv")->capture_default_str();
  sub->add_option("--loss", o.loss, "logistic | least-squares")->capture_default_str();
  sub->add_option("--trim", o.s.trim, "Fraction of largest-L_i rows removed")
      ->capture_default_str();
  sub->add_option("--l2", o.l2, "smooth | composite | none: placement of (1/n)||x||^2")
      ->capture_default_str();
}

void add_solver_options(CLI::App* sub, Options& o) {
  sub->add_option("--passes", o.s.passes, "Effective passes per sweep run")
      ->capture_default_str();
  sub->add_option("--b-frac", o.s.b_frac, "Minibatch size as a fraction of n")
      ->capture_default_str();
  sub->add_option("--alpha", o.s.alpha, "SCSG growth factor")->capture_default_str();
  sub->add_option("--m0-frac", o.s.m0_frac, "SCSG m0 as a fraction of n")->capture_default_str();
  sub->add_option("--B0-frac", o.s.B0_frac, "SCSG B0 as a fraction of n")->capture_default_str();
  sub->add_option("--eta-grid", o.eta_grid, "Exponent range lo:hi, eta = 2^k / L")
      ->capture_default_str();
  sub->add_option("--seed", o.s.seed, "Base seed")->capture_default_str();
  sub->add_option("--workers", o.s.workers, "Parallel sweep runs (capped by BENCH_WORKERS)");
  sub->add_option("--inner-mult", o.s.inner_mult, "Inner loop m = inner-mult * n (SVRG/SARAH/Katyusha)")
      ->capture_default_str();
  sub->add_option("--optimum-passes", o.s.optimum_passes, "Passes for optimum estimation")
      ->capture_default_str();
  sub->add_option("--katyusha-scale", o.s.katyusha_scale, "Katyusha step alpha_s = scale * eta / tau1")
      ->capture_default_str();
  sub->add_option("--charge", o.charge, "single | strict inner-step IFO charging")
      ->capture_default_str();
  sub->add_option("--minibatch", o.minibatch, "without | with replacement")
      ->capture_default_str();
}

void finalize(Options& o) {
  o.s.charge = scsg::parse_charge(o.charge);
  o.s.sampling = scsg::parse_sampling(o.minibatch);
  o.s.l2 = scsg::parse_l2_mode(o.l2);
  o.s.loss = scsg::parse_loss(o.loss);
  std::tie(o.s.grid_lo, o.s.grid_hi) = scsg::parse_grid(o.eta_grid);
}

scsg::Dataset load(const Options& o) {
  return scsg::load_dataset(o.data, scsg::parse_data_format(o.format));
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string show(const ordered_json& v) {
  if (v.is_null()) return "-";
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v.get<double>());
    return buf;
  }
  return v.dump();
}

void print_summary(const ordered_json& summary) {
  std::printf("F0 = %.17g  F* = %.17g  L = %.6g\n", summary["F0"].get<double>(),
              summary["optimum"]["F_star"].get<double>(), summary["L"].get<double>());
  if (const auto& w = summary["optimum"]["warning"]; w.is_string() && !w.get<std::string>().empty())
    std::printf("warning: %s\n", w.get<std::string>().c_str());
  std::printf("%-12s %6s %12s %12s %10s %10s %10s %10s\n", "algo", "k", "eta", "ratio",
              "T(1e-1)", "T(1e-2)", "T(1e-3)", "T(1e-4)");
  for (const auto& [name, a] : summary["algorithms"].items()) {
    const auto& t = a["time_to_accuracy"];
    std::printf("%-12s %6d %12.4g %12.4g %10s %10s %10s %10s\n", name.c_str(),
                a["best_exponent"].get<int>(), a["eta"].get<double>(),
                a["final_ratio"].get<double>(), show(t.value("1e-1", ordered_json())).c_str(),
                show(t.value("1e-2", ordered_json())).c_str(),
                show(t.value("1e-3", ordered_json())).c_str(),
                show(t.value("1e-4", ordered_json())).c_str());
  }
}

// Inserts `--key value` pairs from a key=value file after the subcommand
// name, so later command-line occurrences take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto v = scsg::detail::trim(line);
      if (v.empty() || v.front() == '#') continue;
      const auto eq = v.find('=');
      if (eq == std::string_view::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
      injected.push_back("--" + std::string(scsg::detail::trim(v.substr(0, eq))));
      injected.push_back(std::string(scsg::detail::trim(v.substr(eq + 1))));
    }
    break;
  }
  if (!injected.empty() && !args.empty())
    args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

scsg::OptimumEstimate compute_optimum(const scsg::Workload& w, const Options& o) {
  const auto& p = *w.problem;
  const scsg::Vector x0 = scsg::Vector::Zero(static_cast<Eigen::Index>(p.dim()));
  const auto sc = scsg::sweep(p, scsg::Algorithm::scsg, o.s.grid_lo, o.s.grid_hi, o.s, w.L, x0);
  const auto sv = scsg::sweep(p, scsg::Algorithm::svrg, o.s.grid_lo, o.s.grid_hi, o.s, w.L, x0);
  return scsg::estimate_optimum(p, o.s, w.L, sc.best_entry().exponent,
                                sv.best_entry().exponent, x0);
}

ordered_json optimum_json(const scsg::OptimumEstimate& opt, double f0) {
  ordered_json x = ordered_json::array();
  for (double v : opt.x_star) x.push_back(v);
  return ordered_json{{"F_star", opt.f_star},
                      {"F0", f0},
                      {"scsg_exponent", opt.scsg_exponent},
                      {"svrg_exponent", opt.svrg_exponent},
                      {"svrg_objective", opt.svrg_objective},
                      {"cross_check_ok", opt.cross_check_ok},
                      {"warning", opt.warning},
                      {"x_star", x}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark driver for SCSG and baseline finite-sum solvers"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Options o;
  o.s.workers = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Sweep step sizes for each algorithm and write traces");
  add_data_options(run, o);
  add_solver_options(run, o);
  run->add_option("--algo", o.algo, "Comma list of scsg,svrg,sarah,katyusha-ns,sgd,sgd-decay,gd or all")
      ->capture_default_str();
  run->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* opt = app.add_subcommand("optimum", "Estimate F* with a long tuned SCSG run");
  add_data_options(opt, o);
  add_solver_options(opt, o);
  opt->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* diag = app.add_subcommand("diagnostics", "Report H, D_x, D_H and D at the optimum");
  add_data_options(diag, o);
  add_solver_options(diag, o);
  diag->add_option("--out", o.out, "Output directory")->capture_default_str();
  diag->add_option("--optimum", o.optimum_file, "optimum.json to reuse (default <out>/optimum.json)");
  diag->add_option("--mu-hint", o.mu_hint, "Strong convexity hint for kappa");

  auto* report = app.add_subcommand("report", "Print the summary of a finished run");
  report->add_option("--out", o.out, "Output directory of `bench run`")->capture_default_str();

  std::size_t synth_n = 2000, synth_p = 20;
  int synth_k = 3;
  std::uint64_t synth_seed = 7;
  std::string synth_path = "synthetic.libsvm";
  auto* synth = app.add_subcommand("synth", "Write a synthetic multiclass LIBSVM dataset");
  synth->add_option("--n", synth_n, "Rows")->capture_default_str();
  synth->add_option("--p", synth_p, "Features")->capture_default_str();
  synth->add_option("--classes", synth_k, "Classes")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--output", synth_path, "Destination file")->capture_default_str();

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const fs::path out_dir(o.out);
    if (*run) {
      finalize(o);
      const auto data = load(o);
      const auto rep = scsg::run_benchmark(data, o.s, parse_algos(o.algo), out_dir);
      print_summary(rep.summary);
      std::printf("wrote %s\n", (out_dir / "summary.json").string().c_str());
    } else if (*opt) {
      finalize(o);
      const auto w = scsg::prepare_workload(load(o), o.s);
      scsg::IfoCounter eval;
      const double f0 = scsg::full_objective(
          *w.problem, scsg::Vector::Zero(static_cast<Eigen::Index>(w.problem->dim())), eval);
      const auto est = compute_optimum(w, o);
      fs::create_directories(out_dir);
      write_json(out_dir / "optimum.json", optimum_json(est, f0));
      std::printf("F* = %.17g (SVRG cross-check %.17g)\n", est.f_star, est.svrg_objective);
      if (!est.cross_check_ok) std::printf("warning: %s\n", est.warning.c_str());
    } else if (*diag) {
      finalize(o);
      const auto w = scsg::prepare_workload(load(o), o.s);
      const auto& p = *w.problem;
      const scsg::Vector x0 = scsg::Vector::Zero(static_cast<Eigen::Index>(p.dim()));
      scsg::Vector x_star;
      const fs::path opt_path = o.optimum_file.empty() ? out_dir / "optimum.json"
                                                       : fs::path(o.optimum_file);
      if (fs::exists(opt_path)) {
        std::ifstream in(opt_path);
        const auto j = ordered_json::parse(in);
        const auto xs = j.at("x_star").get<std::vector<double>>();
        x_star = Eigen::Map<const scsg::Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
      } else {
        x_star = compute_optimum(w, o).x_star;
      }
      const auto d = scsg::diagnostics(
          p, x_star, x0, w.L, o.mu_hint > 0.0 ? std::optional<double>(o.mu_hint) : std::nullopt);
      fs::create_directories(out_dir);
      write_json(out_dir / "diagnostics.json", d.to_json());
      std::printf("%s\n", d.to_json().dump(2).c_str());
    } else if (*report) {
      std::ifstream in(out_dir / "summary.json");
      if (!in) throw std::runtime_error("no summary.json in " + out_dir.string());
      print_summary(ordered_json::parse(in));
    } else if (*synth) {
      const auto d = scsg::make_synthetic_multiclass(synth_n, synth_p, synth_k, synth_seed);
      std::ofstream out(synth_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + synth_path);
      scsg::write_libsvm(out, d);
      std::printf("wrote %zu rows to %s\n", d.rows(), synth_path.c_str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
