#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qpr/cli.hpp"
#include "qpr/imaging.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qpr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = qpr::cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qpr_test_cli_" + name);
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("recover"), std::string::npos);
  EXPECT_EQ(run({"recover", "--help"}).code, 0);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"recover", "--no-such-flag"}).code, 1);
  EXPECT_EQ(run({"recover", "--algo", "nope"}).code, 1);
  EXPECT_EQ(run({"recover", "--ratio", "0.5"}).code, 1);
  EXPECT_EQ(run({"sweep", "--ratios", "3:1:5"}).code, 1);  // --out is required
}

TEST(Cli, RuntimeErrorsExitTwo) {
  const auto path = temp_file("garbage.txt");
  std::ofstream(path) << "garbage\n";
  const auto r = run({"recover", "--instance", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, RecoverWritesTraceAndReportsConfig) {
  const auto trace = temp_file("trace.csv");
  const auto r = run({"recover", "--algo", "qraf", "--d", "8", "--ratio", "10", "--seed", "3", "--trace", trace.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("converged=1"), std::string::npos);
  EXPECT_NE(r.err.find("eta"), std::string::npos);
  const auto lines = read_lines(trace);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0], "iter,rel_error");
  EXPECT_EQ(lines[1].rfind("0,", 0), 0u);
  std::filesystem::remove(trace);
}

TEST(Cli, RecoverPureAndInstanceRoundTrip) {
  const auto inst = temp_file("inst.txt");
  const auto a = run({"recover", "--algo", "pqraf", "--d", "8", "--ratio", "10", "--save-instance", inst.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("algo=pqraf"), std::string::npos);
  const auto b = run({"recover", "--algo", "pqraf", "--instance", inst.string()});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out.substr(0, a.out.find("time_ms")), b.out.substr(0, b.out.find("time_ms")));
  std::filesystem::remove(inst);
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto cfg = temp_file("cfg.ini");
  std::ofstream(cfg) << "[recover]\nd=5\nratio=12\n";
  const auto r = run({"--config", cfg.string(), "recover"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d=5 n=60"), std::string::npos);
  std::filesystem::remove(cfg);
}

TEST(Cli, SweepWritesCsv) {
  const auto out = temp_file("sweep.csv");
  const auto r = run({"sweep", "--algos", "qraf,pqraf", "--d", "6", "--ratios", "4,10", "--trials", "2", "--out",
                      out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = read_lines(out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "algo,d,ratio,trials,successes,success_rate,mean_iters,mean_time_ms");
  EXPECT_EQ(lines[3].rfind("pqraf,6,4,2,", 0), 0u);
  std::filesystem::remove(out);
}

TEST(Cli, BenchWritesTableAndTraces) {
  const auto out = temp_file("bench.csv");
  const auto tr = temp_file("traces.csv");
  const auto r = run({"bench", "--algos", "qraf,qaraf", "--d", "8", "--ratio", "10", "--trials", "2", "--out",
                      out.string(), "--trace-out", tr.string(), "--trace-d", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_lines(out).size(), 3u);
  const auto traces = read_lines(tr);
  ASSERT_GT(traces.size(), 2u);
  EXPECT_EQ(traces[0], "algo,iter,rel_error");
  std::filesystem::remove(out);
  std::filesystem::remove(tr);
}

TEST(Cli, ImageWritesPngAndMetrics) {
  const auto png = temp_file("out.png");
  const auto csv = temp_file("metrics.csv");
  const auto r = run({"image", "--generate", "16x16", "--block", "4", "--out", png.string(), "--metrics", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("blocks=16 converged=16"), std::string::npos);
  const auto img = qpr::read_png(png);
  EXPECT_EQ(img.width, 16u);
  EXPECT_EQ(read_lines(csv).size(), 19u);
  EXPECT_EQ(run({"image", "--generate", "15x16", "--block", "4"}).code, 1);
  std::filesystem::remove(png);
  std::filesystem::remove(csv);
}

TEST(Cli, InstalledExecutableRuns) {
  const std::string cmd = std::string(QPR_EXE) + " recover --d 4 --ratio 10 > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_NE(std::system((std::string(QPR_EXE) + " --bogus > /dev/null 2>&1").c_str()), 0);
}
