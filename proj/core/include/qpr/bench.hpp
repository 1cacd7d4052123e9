#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qpr/pure.hpp"

namespace qpr {

/// A solver plus whether it runs through the pure projection wrapper.
/// Parsed from names such as "qraf" or "pqraf".
struct AlgoChoice {
  Algorithm algo = Algorithm::qraf;
  bool pure = false;

  std::string name() const;
};

AlgoChoice parse_algo_choice(std::string_view name);

/// "start:step:end" (inclusive), a comma list, or a single value.
std::vector<double> parse_ratio_grid(std::string_view text);

struct SweepSpec {
  std::vector<AlgoChoice> algos;
  std::vector<std::size_t> d_values;
  std::vector<double> ratios;
  int trials = 20;
  int max_iters = 1500;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  SignalKind signal = SignalKind::full;  ///< pq algorithms always use pure signals
  PureConfig pure;
  unsigned threads = 0;

  void validate() const;
};

struct SweepRow {
  std::string algo;
  std::size_t d = 0;
  double ratio = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_iters = 0.0;    ///< over converged trials; NaN if none
  double mean_time_ms = 0.0;  ///< over converged trials; NaN if none
};

using SweepResult = std::vector<SweepRow>;

/// The instance used for trial t of cell (d, ratio). Every algorithm in a
/// sweep sees the same instance for the same key.
MeasurementEnsemble trial_instance(std::uint64_t seed, std::size_t d, double ratio, int trial, SignalKind kind);

/// Solver settings for one algorithm: its defaults with the run budget applied.
SolverConfig sweep_config(const AlgoChoice& choice, int max_iters, double tol);

/// Initialization plus iterations for one trial (pure wrapper when requested).
RunRecord run_trial(const AlgoChoice& choice, const SolverConfig& cfg, const PureConfig& pure,
                    const MeasurementEnsemble& ens, RngStream rng);

/// Every (algo, d, ratio) cell, `trials` instances each, rows in
/// (algo, d, ratio) order.
SweepResult success_sweep(const SweepSpec& spec);

/// success_sweep over the full d x ratio grid; rows of a d slice equal the
/// corresponding success_sweep rows.
SweepResult grid_sweep(const SweepSpec& spec);

/// Fixed-ratio comparison across algorithms and signal sizes.
SweepResult compete_table(const std::vector<AlgoChoice>& algos, const std::vector<std::size_t>& d_values,
                          double ratio, int trials, std::uint64_t seed, unsigned threads = 0);

struct AlgoTrace {
  std::string algo;
  std::vector<TracePoint> points;
};

/// Error curves of several algorithms on one shared instance. Runs until
/// max_iters or until the error drops below floor.
std::vector<AlgoTrace> convergence_trace(const std::vector<AlgoChoice>& algos, std::size_t d, double ratio,
                                         std::uint64_t seed, int max_iters = 1500, double floor = 1e-15);

/// "algo,d,ratio,trials,successes,success_rate,mean_iters,mean_time_ms"
void write_sweep_csv(const SweepResult& rows, const std::filesystem::path& path);
/// "algo,iter,rel_error"
void write_traces_csv(const std::vector<AlgoTrace>& traces, const std::filesystem::path& path);

}  // namespace qpr
