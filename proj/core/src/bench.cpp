#include "qpr/bench.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "qpr/parallel.hpp"

namespace qpr {

namespace {

double parse_number(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t cell_key(std::size_t d, double ratio, int trial) {
  std::uint64_t k = mix64(static_cast<std::uint64_t>(d));
  k = mix64(k ^ static_cast<std::uint64_t>(std::llround(ratio * 1e6)));
  return mix64(k ^ static_cast<std::uint64_t>(trial));
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::string AlgoChoice::name() const { return (pure ? "p" : "") + std::string(to_string(algo)); }

AlgoChoice parse_algo_choice(std::string_view name) {
  if (name.size() > 3 && name.substr(0, 2) == "pq") return {parse_algorithm(name.substr(1)), true};
  return {parse_algorithm(name), false};
}

std::vector<double> parse_ratio_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
      throw std::invalid_argument("ratio grid must look like start:step:end");
    }
    const double start = parse_number(text.substr(0, a));
    const double step = parse_number(text.substr(a + 1, b - a - 1));
    const double end = parse_number(text.substr(b + 1));
    if (!(step > 0.0) || end < start) throw std::invalid_argument("ratio grid needs step > 0 and end >= start");
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto piece = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_number(piece));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void SweepSpec::validate() const {
  if (algos.empty()) throw std::invalid_argument("sweep: no algorithms");
  if (d_values.empty()) throw std::invalid_argument("sweep: no signal sizes");
  if (ratios.empty()) throw std::invalid_argument("sweep: empty ratio grid");
  for (const double r : ratios) {
    if (!(r >= 1.0)) throw std::invalid_argument("sweep: ratios must be >= 1");
  }
  for (const auto d : d_values) {
    if (d == 0) throw std::invalid_argument("sweep: d must be >= 1");
  }
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("sweep: max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("sweep: tol must be > 0");
  if (pure.project_every < 1) throw std::invalid_argument("sweep: projection period must be >= 1");
}

MeasurementEnsemble trial_instance(std::uint64_t seed, std::size_t d, double ratio, int trial, SignalKind kind) {
  RngStream rng(seed, cell_key(d, ratio, trial));
  return make_instance(d, ratio, rng, kind);
}

SolverConfig sweep_config(const AlgoChoice& choice, int max_iters, double tol) {
  SolverConfig cfg = SolverConfig::defaults(choice.algo);
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  return cfg;
}

RunRecord run_trial(const AlgoChoice& choice, const SolverConfig& cfg, const PureConfig& pure,
                    const MeasurementEnsemble& ens, RngStream rng) {
  return choice.pure ? solve_pure(ens, cfg, pure, std::move(rng)) : solve(ens, cfg, std::move(rng));
}

SweepResult success_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Cell {
    AlgoChoice algo;
    std::size_t d;
    double ratio;
  };
  std::vector<Cell> cells;
  for (const auto& a : spec.algos) {
    for (const auto d : spec.d_values) {
      for (const double r : spec.ratios) cells.push_back({a, d, r});
    }
  }
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<RunRecord> records(cells.size() * trials);
  parallel_for(records.size(), spec.threads, [&](std::size_t task) {
    const Cell& c = cells[task / trials];
    const int t = static_cast<int>(task % trials);
    const SignalKind kind = c.algo.pure ? SignalKind::pure : spec.signal;
    const auto ens = trial_instance(spec.seed, c.d, c.ratio, t, kind);
    const auto cfg = sweep_config(c.algo, spec.max_iters, spec.tol);
    RngStream rng(spec.seed, cell_key(c.d, c.ratio, t));
    records[task] = run_trial(c.algo, cfg, spec.pure, ens, rng.derive(static_cast<std::uint64_t>(c.algo.algo) + 1));
    records[task].estimate = QVector();  // not needed, free memory early
  });

  SweepResult rows;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    SweepRow row;
    row.algo = cells[ci].algo.name();
    row.d = cells[ci].d;
    row.ratio = cells[ci].ratio;
    row.trials = spec.trials;
    double iters = 0.0;
    double time = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& rec = records[ci * trials + t];
      if (!rec.converged) continue;
      ++row.successes;
      iters += rec.iters_used;
      time += rec.wall_time_ms;
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_iters = row.successes > 0 ? iters / row.successes : nan;
    row.mean_time_ms = row.successes > 0 ? time / row.successes : nan;
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepResult grid_sweep(const SweepSpec& spec) { return success_sweep(spec); }

SweepResult compete_table(const std::vector<AlgoChoice>& algos, const std::vector<std::size_t>& d_values,
                          double ratio, int trials, std::uint64_t seed, unsigned threads) {
  SweepSpec spec;
  spec.algos = algos;
  spec.d_values = d_values;
  spec.ratios = {ratio};
  spec.trials = trials;
  spec.seed = seed;
  spec.threads = threads;
  return success_sweep(spec);
}

std::vector<AlgoTrace> convergence_trace(const std::vector<AlgoChoice>& algos, std::size_t d, double ratio,
                                         std::uint64_t seed, int max_iters, double floor) {
  std::vector<AlgoTrace> out;
  for (const auto& a : algos) {
    const SignalKind kind = a.pure ? SignalKind::pure : SignalKind::full;
    const auto ens = trial_instance(seed, d, ratio, 0, kind);
    SolverConfig cfg = sweep_config(a, max_iters, floor);
    cfg.trace = true;
    RngStream rng(seed, cell_key(d, ratio, 0));
    auto rec = run_trial(a, cfg, PureConfig{}, ens, rng.derive(static_cast<std::uint64_t>(a.algo) + 1));
    out.push_back({a.name(), std::move(rec.trace)});
  }
  return out;
}

void write_sweep_csv(const SweepResult& rows, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "algo,d,ratio,trials,successes,success_rate,mean_iters,mean_time_ms\n";
  for (const auto& r : rows) {
    out << r.algo << ',' << r.d << ',' << r.ratio << ',' << r.trials << ',' << r.successes << ',' << r.success_rate
        << ',' << r.mean_iters << ',' << r.mean_time_ms << '\n';
  }
}

void write_traces_csv(const std::vector<AlgoTrace>& traces, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "algo,iter,rel_error\n";
  for (const auto& t : traces) {
    for (const auto& p : t.points) out << t.algo << ',' << p.iter << ',' << p.rel_error << '\n';
  }
}

}  // namespace qpr
