#include "qpr/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpr/bench.hpp"
#include "qpr/imaging.hpp"
#include "qpr/parallel.hpp"

namespace qpr::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kAlgoHelp =
    "qwf, qrwf, qtaf, qpaf, qraf, qiraf, qaraf, qadraf; a 'pq' prefix (e.g. pqraf) runs the pure-signal variant";

struct SolverFlags {
  int max_iters = 1500;
  double tol = 1e-5;
  std::optional<double> eta, beta, mu, sigma, gamma_trunc, alpha_ad;
  std::optional<std::size_t> batch;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
  app->add_option("--max-iters,--iters", f.max_iters, "Iteration budget T")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", f.tol, "Success threshold on the relative error")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--eta", f.eta,
                  "Step size [qraf/qiraf/qaraf: 6, qpaf: 2.5, qtaf: 1.2, qrwf: 0.8, qwf: 0.2n/sum(psi); "
                  "qadraf adapts]");
  app->add_option("--beta", f.beta, "Reweighting offset [5]");
  app->add_option("--mu", f.mu, "Momentum for qaraf [0.8] or decay for qadraf [1]");
  app->add_option("--sigma", f.sigma, "Perturbation coefficient for qpaf [2]");
  app->add_option("--gamma-trunc", f.gamma_trunc, "Truncation level for qtaf [0.8]");
  app->add_option("--alpha-ad", f.alpha_ad, "Adaptive step numerator for qadraf [0.009]");
  app->add_option("--batch", f.batch, "qiraf mini-batch size [smallest power of two above n/4 - 1]")
      ->check(CLI::PositiveNumber);
}

SolverConfig apply_flags(SolverConfig cfg, const SolverFlags& f) {
  if (f.eta) cfg.eta = f.eta;
  if (f.beta) cfg.beta = *f.beta;
  if (f.mu) cfg.mu = *f.mu;
  if (f.sigma) cfg.sigma = *f.sigma;
  if (f.gamma_trunc) cfg.gamma_trunc = *f.gamma_trunc;
  if (f.alpha_ad) cfg.alpha_ad = *f.alpha_ad;
  if (f.batch) {
    cfg.batch_exp_rule = false;
    cfg.batch_size = *f.batch;
  }
  cfg.max_iters = f.max_iters;
  cfg.tol = f.tol;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

AlgoChoice choose_algo(const std::string& name, bool force_pure) {
  AlgoChoice c;
  try {
    c = parse_algo_choice(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--algo: ") + e.what());
  }
  c.pure = c.pure || force_pure;
  return c;
}

std::vector<AlgoChoice> choose_algos(const std::vector<std::string>& names, bool force_pure) {
  std::vector<AlgoChoice> out;
  for (const auto& n : names) out.push_back(choose_algo(n, force_pure));
  if (out.empty()) throw UsageError("--algos: no algorithms given");
  return out;
}

std::vector<double> ratio_grid(const std::string& text, const char* flag) {
  try {
    return parse_ratio_grid(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::vector<std::size_t> size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const double v : ratio_grid(text, "--d")) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError("--d: sizes must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

class ConfigReport {
 public:
  explicit ConfigReport(std::ostream& err) : err_(err) { err_ << std::setprecision(12) << "resolved config:\n"; }

  template <class T>
  ConfigReport& add(const char* key, const T& value) {
    err_ << "  " << key << " = " << value << '\n';
    return *this;
  }

 private:
  std::ostream& err_;
};

void report_solver(ConfigReport& r, const SolverConfig& cfg, std::optional<double> resolved_eta) {
  r.add("algo", to_string(cfg.algo));
  if (cfg.algo == Algorithm::qadraf) {
    r.add("alpha_ad", cfg.alpha_ad).add("mu", cfg.mu).add("eps_ad", cfg.eps_ad);
  } else if (resolved_eta) {
    r.add("eta", *resolved_eta);
  } else if (cfg.eta) {
    r.add("eta", *cfg.eta);
  } else {
    r.add("eta", "0.2n/sum(psi)");
  }
  switch (cfg.algo) {
    case Algorithm::qraf:
    case Algorithm::qiraf:
    case Algorithm::qadraf:
      r.add("beta", cfg.beta);
      break;
    case Algorithm::qaraf:
      r.add("beta", cfg.beta).add("mu", cfg.mu);
      break;
    case Algorithm::qpaf:
      r.add("sigma", cfg.sigma);
      break;
    case Algorithm::qtaf:
      r.add("gamma_trunc", cfg.gamma_trunc).add("init_fraction", cfg.qtaf_rho);
      break;
    default:
      break;
  }
  if (cfg.algo == Algorithm::qiraf) {
    r.add("batch", cfg.batch_exp_rule ? std::string("power-of-two rule") : std::to_string(cfg.batch_size));
  }
  r.add("max_iters", cfg.max_iters).add("tol", cfg.tol);
}

void report_init(ConfigReport& r, const InitConfig& init) {
  r.add("init", to_string(init.kind));
  switch (init.kind) {
    case InitKind::weighted_max_corr:
      r.add("init_gamma", init.gamma).add("init_card_S", init.card_S ? *init.card_S : 0);
      break;
    case InitKind::truncated:
      r.add("init_alpha_l", init.alpha_l).add("init_alpha_u", init.alpha_u);
      break;
    case InitKind::exponential:
      r.add("init_gamma", init.gamma);
      break;
    case InitKind::plain:
      break;
  }
  r.add("power_iters", init.power_iters);
}

void print_rows(std::ostream& out, const SweepResult& rows) {
  out << std::setprecision(6);
  for (const auto& r : rows) {
    out << r.algo << " d=" << r.d << " ratio=" << r.ratio << " success=" << r.successes << '/' << r.trials
        << " mean_iters=" << r.mean_iters << " mean_time_ms=" << r.mean_time_ms << '\n';
  }
}

// recover ---------------------------------------------------------------------

struct RecoverArgs {
  std::string algo = "qraf";
  bool pure = false;
  std::size_t d = 100;
  double ratio = 9.0;
  std::uint64_t seed = 1;
  int tp = 10;
  std::string trace;
  std::string instance;
  std::string save_instance;
  SolverFlags solver;
};

int run_recover(const RecoverArgs& a, std::ostream& out, std::ostream& err) {
  const AlgoChoice choice = choose_algo(a.algo, a.pure);
  SolverConfig cfg = apply_flags(SolverConfig::defaults(choice.algo), a.solver);
  cfg.trace = !a.trace.empty();

  MeasurementEnsemble ens;
  if (!a.instance.empty()) {
    ens = load_instance(a.instance);
  } else {
    if (!(a.ratio >= 1.0)) throw UsageError("--ratio must be >= 1");
    RngStream rng(a.seed, 0);
    ens = make_instance(a.d, a.ratio, rng, choice.pure ? SignalKind::pure : SignalKind::full);
  }
  if (!a.save_instance.empty()) save_instance(ens, a.save_instance);

  const InitConfig init = default_init(cfg, ens.n());
  ConfigReport r(err);
  r.add("command", "recover").add("d", ens.d()).add("n", ens.n()).add("seed", a.seed).add("pure", choice.pure);
  if (choice.pure) r.add("tp", a.tp);
  report_solver(r, cfg, resolve_step(cfg, ens));
  report_init(r, init);

  const RunRecord rec = run_trial(choice, cfg, PureConfig{a.tp}, ens, RngStream(a.seed, 1));
  if (cfg.trace) write_trace_csv(rec.trace, a.trace);
  out << std::setprecision(17) << "algo=" << choice.name() << " d=" << ens.d() << " n=" << ens.n()
      << " converged=" << rec.converged << " diverged=" << rec.diverged << " iters=" << rec.iters_used
      << " rel_error=" << rec.final_rel_error << " time_ms=" << rec.wall_time_ms << '\n';
  return 0;
}

// sweep / grid ----------------------------------------------------------------

struct SweepArgs {
  std::vector<std::string> algos{"qraf"};
  std::string d = "100";
  std::string ratios = "3:0.5:13";
  int trials = 20;
  std::uint64_t seed = 1;
  int max_iters = 1500;
  double tol = 1e-5;
  std::string signal = "full";
  int tp = 10;
  unsigned threads = 0;
  std::string out;
};

void add_sweep_flags(CLI::App* app, SweepArgs& a) {
  app->add_option("--algos", a.algos, std::string("Comma separated algorithms: ") + kAlgoHelp)
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--d", a.d, "Signal sizes: a value, a comma list or start:step:end")->capture_default_str();
  app->add_option("--ratios", a.ratios, "Oversampling grid n/d: start:step:end or a comma list")
      ->capture_default_str();
  app->add_option("--trials", a.trials, "Instances per cell")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--seed", a.seed, "Base seed")->capture_default_str();
  app->add_option("--max-iters,--iters", a.max_iters, "Iteration budget T")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", a.tol, "Success threshold")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--signal", a.signal, "Signal kind")->capture_default_str()->check(CLI::IsMember({"full", "pure"}));
  app->add_option("--tp", a.tp, "Projection period for pure runs")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--threads", a.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_option("--out", a.out, "Output CSV")->required();
}

int run_sweep(const char* command, const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.signal = parse_signal_kind(a.signal);
  spec.algos = choose_algos(a.algos, spec.signal == SignalKind::pure);
  spec.d_values = size_list(a.d);
  spec.ratios = ratio_grid(a.ratios, "--ratios");
  spec.trials = a.trials;
  spec.seed = a.seed;
  spec.max_iters = a.max_iters;
  spec.tol = a.tol;
  spec.pure.project_every = a.tp;
  spec.threads = a.threads;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ConfigReport r(err);
  r.add("command", command).add("d", a.d).add("ratios", a.ratios).add("trials", a.trials).add("seed", a.seed);
  r.add("signal", a.signal).add("threads", resolve_threads(a.threads));
  for (const auto& c : spec.algos) {
    r.add("algorithm", c.name());
    report_solver(r, sweep_config(c, a.max_iters, a.tol), std::nullopt);
  }

  const SweepResult rows = std::string(command) == "grid" ? grid_sweep(spec) : success_sweep(spec);
  write_sweep_csv(rows, a.out);
  print_rows(out, rows);
  return 0;
}

// bench -----------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> algos{"qwf", "qrwf", "qtaf", "qpaf", "qraf", "qiraf", "qaraf", "qadraf"};
  std::string d = "64,100";
  double ratio = 9.0;
  int trials = 20;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string trace_out;
  std::size_t trace_d = 64;
};

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto algos = choose_algos(a.algos, false);
  const auto sizes = size_list(a.d);
  if (!(a.ratio >= 1.0)) throw UsageError("--ratio must be >= 1");

  ConfigReport r(err);
  r.add("command", "bench").add("d", a.d).add("ratio", a.ratio).add("trials", a.trials).add("seed", a.seed);
  r.add("threads", resolve_threads(a.threads));
  for (const auto& c : algos) report_solver(r, sweep_config(c, 1500, 1e-5), std::nullopt);

  const SweepResult rows = compete_table(algos, sizes, a.ratio, a.trials, a.seed, a.threads);
  if (!a.out.empty()) write_sweep_csv(rows, a.out);
  print_rows(out, rows);
  if (!a.trace_out.empty()) write_traces_csv(convergence_trace(algos, a.trace_d, a.ratio, a.seed), a.trace_out);
  return 0;
}

// image -----------------------------------------------------------------------

struct ImageArgs {
  std::string input;
  std::string generate = "64x64";
  std::size_t block = 8;
  double ratio = 9.0;
  std::string algo = "pqraf";
  int tp = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::string metrics;
  std::string sign = "truth";
  std::string conc = "per-channel";
  unsigned threads = 0;
  SolverFlags solver;
};

RgbImage load_or_generate(const ImageArgs& a) {
  if (!a.input.empty()) return read_png(a.input);
  const auto x = a.generate.find('x');
  std::size_t w = 0;
  std::size_t h = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("missing 'x'");
    w = std::stoul(a.generate.substr(0, x));
    h = std::stoul(a.generate.substr(x + 1));
  } catch (const std::exception&) {
    throw UsageError("--generate: expected WIDTHxHEIGHT, got '" + a.generate + "'");
  }
  if (w == 0 || h == 0) throw UsageError("--generate: dimensions must be positive");
  return make_test_image(w, h);
}

int run_image(const ImageArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.ratio >= 1.0)) throw UsageError("--ratio must be >= 1");
  const bool mono = a.algo == "raf-mono";
  const bool conc = a.algo == "raf-conc";
  const RgbImage img = load_or_generate(a);
  ImageJob job;
  try {
    job = decompose(img, a.block);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ImageOptions opts;
  opts.ratio = a.ratio;
  opts.seed = a.seed;
  opts.threads = a.threads;
  opts.sign = a.sign == "truth" ? SignResolution::truth : SignResolution::nonnegative_mean;
  opts.conc = a.conc == "stacked" ? ConcMeasurements::stacked : ConcMeasurements::per_channel;

  ConfigReport r(err);
  r.add("command", "image").add("source", a.input.empty() ? "generated " + a.generate : a.input);
  r.add("width", img.width).add("height", img.height).add("block", a.block).add("ratio", a.ratio);
  r.add("method", a.algo).add("seed", a.seed).add("sign", a.sign).add("threads", resolve_threads(a.threads));

  ImageRecovery result;
  if (mono || conc) {
    const SolverConfig cfg = apply_flags(real_raf_defaults(), a.solver);
    report_solver(r, cfg, cfg.eta);
    if (conc) r.add("conc_measurements", a.conc);
    result = mono ? raf_mono(job, cfg, opts) : raf_conc(job, cfg, opts);
  } else {
    const AlgoChoice choice = choose_algo(a.algo, true);
    const SolverConfig cfg = apply_flags(SolverConfig::defaults(choice.algo), a.solver);
    r.add("tp", a.tp);
    report_solver(r, cfg, std::nullopt);
    result = recover_image(job, cfg, PureConfig{a.tp}, opts);
  }

  if (!a.out.empty()) write_png(result.image, a.out);
  if (!a.metrics.empty()) write_metrics_csv(result.metrics, a.metrics);
  int converged = 0;
  for (const auto& b : result.metrics.per_block) converged += b.converged ? 1 : 0;
  out << std::setprecision(17) << "method=" << a.algo << " blocks=" << result.metrics.per_block.size()
      << " converged=" << converged << " psnr=" << result.metrics.psnr << " ssim=" << result.metrics.ssim << '\n';
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion phase retrieval: solvers, sweeps and color image recovery", "qpr"};
  app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  app.require_subcommand(1);

  RecoverArgs rec;
  auto* recover = app.add_subcommand("recover", "Recover one random signal");
  recover->add_option("--algo", rec.algo, kAlgoHelp)->capture_default_str();
  recover->add_flag("--pure", rec.pure, "Pure signal with periodic phase-factor projection");
  recover->add_option("--d", rec.d, "Signal length")->capture_default_str()->check(CLI::PositiveNumber);
  recover->add_option("--ratio", rec.ratio, "Oversampling n/d")->capture_default_str();
  recover->add_option("--seed", rec.seed, "Seed")->capture_default_str();
  recover->add_option("--tp", rec.tp, "Projection period for pure runs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  recover->add_option("--trace", rec.trace, "Write iter,rel_error CSV");
  recover->add_option("--instance", rec.instance, "Load the instance from a file instead of generating it")
      ->check(CLI::ExistingFile);
  recover->add_option("--save-instance", rec.save_instance, "Write the instance used");
  add_solver_flags(recover, rec.solver);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Success rate against oversampling");
  add_sweep_flags(sweep, sw);

  SweepArgs gr;
  gr.d = "30:30:300";
  gr.ratios = "3:0.5:10";
  gr.trials = 30;
  auto* grid = app.add_subcommand("grid", "Success rate over a (d, n/d) grid");
  add_sweep_flags(grid, gr);

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Iteration and time comparison at fixed n/d");
  bench->add_option("--algos", be.algos, kAlgoHelp)->delimiter(',')->capture_default_str();
  bench->add_option("--d", be.d, "Signal sizes")->capture_default_str();
  bench->add_option("--ratio", be.ratio, "Oversampling n/d")->capture_default_str();
  bench->add_option("--trials", be.trials, "Trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", be.seed, "Base seed")->capture_default_str();
  bench->add_option("--threads", be.threads, "Worker threads (0 = all cores)")->capture_default_str();
  bench->add_option("--out", be.out, "Comparison table CSV");
  bench->add_option("--trace-out", be.trace_out, "Convergence traces CSV on one shared instance");
  bench->add_option("--trace-d", be.trace_d, "Signal size for the traces")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  ImageArgs im;
  im.solver.max_iters = 300;
  auto* image = app.add_subcommand("image", "Blockwise color image recovery");
  auto* input = image->add_option("--input", im.input, "RGB PNG (no alpha)")->check(CLI::ExistingFile);
  image->add_option("--generate", im.generate, "Use a generated WIDTHxHEIGHT test image when --input is absent")
      ->capture_default_str()
      ->excludes(input);
  image->add_option("--block", im.block, "Block side in pixels")->capture_default_str()->check(CLI::PositiveNumber);
  image->add_option("--ratio", im.ratio, "Oversampling n/d per block")->capture_default_str();
  image->add_option("--algo", im.algo, std::string(kAlgoHelp) + "; also raf-mono, raf-conc")->capture_default_str();
  image->add_option("--tp", im.tp, "Projection period")->capture_default_str()->check(CLI::PositiveNumber);
  image->add_option("--seed", im.seed, "Seed")->capture_default_str();
  image->add_option("--out", im.out, "Reconstructed PNG");
  image->add_option("--metrics", im.metrics, "Per-block metrics CSV");
  image->add_option("--sign", im.sign, "Sign choice: from the true block, or nonnegative mean")
      ->capture_default_str()
      ->check(CLI::IsMember({"truth", "nonnegative"}));
  image->add_option("--conc", im.conc, "raf-conc measurements: ratio*d or ratio*3d")
      ->capture_default_str()
      ->check(CLI::IsMember({"per-channel", "stacked"}));
  image->add_option("--threads", im.threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_solver_flags(image, im.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (recover->parsed()) return run_recover(rec, out, err);
    if (sweep->parsed()) return run_sweep("sweep", sw, out, err);
    if (grid->parsed()) return run_sweep("grid", gr, out, err);
    if (bench->parsed()) return run_bench(be, out, err);
    if (image->parsed()) return run_image(im, out, err);
  } catch (const UsageError& e) {
    err << "qpr: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "qpr: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace qpr::cli
