#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qpr/solvers.hpp"
#include "support.hpp"

using namespace qpr;
using qpr::testing::random_vector;

namespace {

// Directional-derivative constants, found once by the central-difference
// oracle below and frozen here.
constexpr double kAmplitudeConstant = 2.0;
constexpr double kIntensityConstant = 4.0;
constexpr double kPerturbedConstant = 2.0;

template <class Loss>
double central_difference(Loss&& f, const QVector& z, const QVector& h, double t) {
  return (f(z + h * t) - f(z - h * t)) / (2.0 * t);
}

double real_inner(const QVector& g, const QVector& h) { return inner(g, h).a; }

struct Triple {
  MeasurementEnsemble ens;
  QVector z;
  QVector h;
};

Triple random_triple(std::uint64_t key) {
  RngStream rng(77, key);
  Triple t{make_instance(2, 4.0, rng), random_vector(rng, 2), random_vector(rng, 2)};
  return t;
}

}  // namespace

TEST(GradientConstant, OracleMatchesFrozenValues) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto t = random_triple(k);
    const auto eps = perturbation(t.ens, 2.0);
    const double step = 1e-6;
    const double amp = central_difference([&](const QVector& v) { return loss_amplitude(t.ens, v); }, t.z, t.h, step);
    const double inten =
        central_difference([&](const QVector& v) { return loss_intensity(t.ens, v); }, t.z, t.h, step);
    const double pert =
        central_difference([&](const QVector& v) { return loss_perturbed(t.ens, v, eps); }, t.z, t.h, step);
    EXPECT_NEAR(amp / real_inner(grad_qrwf(t.ens, t.z), t.h), kAmplitudeConstant, 1e-4 * kAmplitudeConstant);
    EXPECT_NEAR(inten / real_inner(grad_qwf(t.ens, t.z), t.h), kIntensityConstant, 1e-4 * kIntensityConstant);
    EXPECT_NEAR(pert / real_inner(grad_qpaf(t.ens, t.z, 2.0), t.h), kPerturbedConstant, 1e-4 * kPerturbedConstant);
  }
}

TEST(Gradients, VanishAtTheTruthUpToPhase) {
  RngStream rng(1, 0);
  const auto ens = make_instance(8, 6.0, rng);
  const QVector x = *ens.x_true * qpr::testing::random_unit(rng);
  EXPECT_LE(norm(grad_qraf(ens, x, 5.0)), 1e-13);
  EXPECT_LE(norm(grad_qrwf(ens, x)), 1e-13);
  EXPECT_LE(norm(grad_qtaf(ens, x, 0.8)), 1e-13);
  EXPECT_LE(norm(grad_qpaf(ens, x, 2.0)), 1e-13);
  EXPECT_LE(norm(grad_qwf(ens, x)), 1e-13);
}

TEST(Gradients, ReweightLimitRecoversUnweightedFlow) {
  RngStream rng(2, 0);
  const auto ens = make_instance(5, 6.0, rng);
  const QVector z = random_vector(rng, 5);
  EXPECT_LE(norm(grad_qraf(ens, z, 0.0) - grad_qrwf(ens, z)), 1e-13 * norm(grad_qrwf(ens, z)));
  EXPECT_DOUBLE_EQ(reweight(2.0, 1.0, 5.0), 2.0 / 7.0);
  EXPECT_DOUBLE_EQ(reweight(2.0, 0.0, 5.0), 1.0);
}

TEST(Gradients, TruncationDropsSmallRows) {
  RngStream rng(3, 0);
  const auto ens = make_instance(4, 5.0, rng);
  const QVector z = random_vector(rng, 4);
  // a huge truncation level keeps every row, which is the unweighted flow
  EXPECT_LE(norm(grad_qtaf(ens, z, 1e12) - grad_qrwf(ens, z)), 1e-12);
  // a tiny one drops every row whose modulus is below psi
  const QVector g = grad_qtaf(ens, z, 1e-12);
  QVector expect(4);
  for (std::size_t k = 0; k < ens.n(); ++k) {
    const Quaternion u = inner(ens.alpha(k), z.span());
    if (abs(u) < ens.psi[k]) continue;
    const double c = 1.0 - ens.psi[k] / abs(u);
    for (std::size_t l = 0; l < 4; ++l) expect[l] += ens.alpha(k)[l] * (c * u);
  }
  expect *= 1.0 / static_cast<double>(ens.n());
  EXPECT_LE(norm(g - expect), 1e-13);
}

TEST(Gradients, MiniBatchOverAllRowsEqualsFullGradient) {
  RngStream rng(4, 0);
  const auto ens = make_instance(6, 5.0, rng);
  const QVector z = random_vector(rng, 6);
  std::vector<std::size_t> rows(ens.n());
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = k;
  EXPECT_LE(norm(grad_qraf_rows(ens, z, 5.0, rows) - grad_qraf(ens, z, 5.0)), 1e-14);
}

TEST(Gradients, LengthMismatchThrows) {
  RngStream rng(5, 0);
  const auto ens = make_instance(3, 4.0, rng);
  EXPECT_THROW(grad_qraf(ens, QVector(4), 5.0), std::invalid_argument);
  EXPECT_THROW(loss_amplitude(ens, QVector(2)), std::invalid_argument);
}

TEST(Config, Defaults) {
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qraf).eta, 6.0);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qraf).beta, 5.0);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qaraf).mu, 0.8);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qadraf).mu, 1.0);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qadraf).alpha_ad, 0.009);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qpaf).eta, 2.5);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qtaf).eta, 1.2);
  EXPECT_EQ(SolverConfig::defaults(Algorithm::qrwf).eta, 0.8);
  EXPECT_FALSE(SolverConfig::defaults(Algorithm::qwf).eta.has_value());
  EXPECT_EQ(qiraf_batch_size(900), 256u);
  EXPECT_EQ(qiraf_batch_size(576), 256u);
  EXPECT_EQ(qiraf_batch_size(4), 1u);
  EXPECT_EQ(qiraf_batch_size(8), 2u);
}

TEST(Config, DefaultInitPerAlgorithm) {
  SolverConfig cfg = SolverConfig::defaults(Algorithm::qtaf);
  auto init = default_init(cfg, 600);
  EXPECT_EQ(init.kind, InitKind::weighted_max_corr);
  EXPECT_EQ(init.gamma, 0.0);
  EXPECT_EQ(init.card_S, 100u);
  EXPECT_EQ(default_init(SolverConfig::defaults(Algorithm::qrwf), 10).kind, InitKind::truncated);
  EXPECT_EQ(default_init(SolverConfig::defaults(Algorithm::qpaf), 10).kind, InitKind::exponential);
  EXPECT_EQ(default_init(SolverConfig::defaults(Algorithm::qwf), 10).kind, InitKind::plain);
  EXPECT_EQ(default_init(SolverConfig::defaults(Algorithm::qiraf), 900).card_S, 207u);
}

TEST(Config, QwfStepIsDataDependent) {
  MeasurementEnsemble ens;
  ens.a = QMatrix::identity(2);
  ens.psi = {1.0, 3.0};
  EXPECT_DOUBLE_EQ(resolve_step(SolverConfig::defaults(Algorithm::qwf), ens), 0.2 * 2.0 / 4.0);
}

TEST(Config, ValidationAndParsing) {
  SolverConfig cfg;
  cfg.mu = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.eta = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_iters = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  for (const auto a : all_algorithms()) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("QRAF"), std::invalid_argument);
  EXPECT_EQ(all_algorithms().size(), 8u);
}

TEST(Run, TruthAsStartNeedsNoIterations) {
  RngStream rng(6, 0);
  const auto ens = make_instance(8, 6.0, rng);
  const auto rec = run(ens, *ens.x_true, SolverConfig::defaults(Algorithm::qraf), RngStream(1, 1));
  EXPECT_TRUE(rec.converged);
  EXPECT_EQ(rec.iters_used, 0);
  EXPECT_EQ(rec.final_rel_error, 0.0);
}

TEST(Run, HugeStepDivergesAndKeepsLastFiniteIterate) {
  RngStream rng(7, 0);
  const auto ens = make_instance(8, 6.0, rng);
  SolverConfig cfg = SolverConfig::defaults(Algorithm::qwf);
  cfg.eta = 1e150;
  const auto rec = solve(ens, cfg, RngStream(1, 1));
  EXPECT_TRUE(rec.diverged);
  EXPECT_FALSE(rec.converged);
  EXPECT_TRUE(std::isinf(rec.final_rel_error));
  EXPECT_TRUE(all_finite(rec.estimate));
}

TEST(Run, WithoutTruthStopsOnStationarity) {
  RngStream rng(8, 0);
  auto ens = make_instance(8, 8.0, rng);
  const QVector x = *ens.x_true;
  ens.x_true.reset();
  const auto rec = solve(ens, SolverConfig::defaults(Algorithm::qaraf), RngStream(1, 1));
  EXPECT_FALSE(rec.converged);
  EXPECT_TRUE(std::isnan(rec.final_rel_error));
  EXPECT_LT(rec.iters_used, 1500);
  EXPECT_LT(dist(rec.estimate, x), 1e-8);
}

TEST(Run, TraceRecordsEveryCheck) {
  RngStream rng(9, 0);
  const auto ens = make_instance(16, 9.0, rng);
  SolverConfig cfg = SolverConfig::defaults(Algorithm::qraf);
  cfg.trace = true;
  const auto rec = solve(ens, cfg, RngStream(1, 1));
  ASSERT_TRUE(rec.converged);
  ASSERT_EQ(rec.trace.size(), static_cast<std::size_t>(rec.iters_used) + 1);
  EXPECT_EQ(rec.trace.front().iter, 0);
  EXPECT_EQ(rec.trace.back().rel_error, rec.final_rel_error);
  EXPECT_LT(rec.final_rel_error, cfg.tol);
  EXPECT_GE(rec.trace[rec.trace.size() - 2].rel_error, cfg.tol);

  const auto path = std::filesystem::temp_directory_path() / "qpr_test_trace.csv";
  write_trace_csv(rec.trace, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iter,rel_error");
  std::filesystem::remove(path);
}

TEST(Run, EverySolverRecoversAnEasyInstance) {
  RngStream rng(10, 0);
  const auto ens = make_instance(16, 12.0, rng);
  for (const auto a : all_algorithms()) {
    SolverConfig cfg = SolverConfig::defaults(a);
    cfg.max_iters = 3000;
    const auto rec = solve(ens, cfg, RngStream(2, 2));
    EXPECT_TRUE(rec.converged) << to_string(a);
    EXPECT_LT(dist(rec.estimate, *ens.x_true), 1e-5) << to_string(a);
  }
}

TEST(Run, SameStreamsGiveIdenticalRuns) {
  RngStream rng(11, 0);
  const auto ens = make_instance(16, 9.0, rng);
  const auto cfg = SolverConfig::defaults(Algorithm::qiraf);
  const auto a = solve(ens, cfg, RngStream(3, 4));
  const auto b = solve(ens, cfg, RngStream(3, 4));
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.iters_used, b.iters_used);
}

TEST(Iteration, AdaptiveStepWithUnitDecayIsConstant) {
  RngStream rng(12, 0);
  const auto ens = make_instance(8, 8.0, rng);
  SolverIteration it(ens, random_vector(rng, 8), SolverConfig::defaults(Algorithm::qadraf), RngStream(0, 0));
  it.step();
  EXPECT_DOUBLE_EQ(it.step_size(), 0.009 / std::sqrt(1e-6));
  it.step();
  EXPECT_DOUBLE_EQ(it.step_size(), 0.009 / std::sqrt(1e-6));
}

TEST(Iteration, MomentumFirstStepIsPlainGradientStep) {
  RngStream rng(13, 0);
  const auto ens = make_instance(8, 8.0, rng);
  const QVector z0 = random_vector(rng, 8);
  SolverIteration acc(ens, z0, SolverConfig::defaults(Algorithm::qaraf), RngStream(0, 0));
  SolverIteration plain(ens, z0, SolverConfig::defaults(Algorithm::qraf), RngStream(0, 0));
  acc.step();
  plain.step();
  EXPECT_EQ(acc.iterate(), plain.iterate());
  // second step: gradient taken at z1 + mu (z1 - z0)
  const QVector z1 = acc.iterate();
  QVector look = z1;
  look.axpy(0.8, z1 - z0);
  QVector expect = look;
  expect.axpy(-6.0, grad_qraf(ens, look, 5.0));
  acc.step();
  EXPECT_LE(norm(acc.iterate() - expect), 1e-14);
}
