#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "oracles.hpp"

namespace qagarch::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qagarch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const std::string kBundledSeries = testing::data_path("arch1_paper.csv");

TEST_F(CliTest, SimulateWritesRequestedRows) {
  const auto path = (dir_ / "sim.csv").string();
  const auto r = run({"simulate", "--p", "1", "--q", "0", "--omega", "0.8", "--alpha", "0.3", "--n", "100",
                      "--seed", "7", "--out", path});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = slurp(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
  EXPECT_TRUE(text.starts_with("t,x\n1,"));
  EXPECT_NE(r.out.find("theoretical variance"), std::string::npos);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::vector<std::string> args{"--seed", "7", "simulate", "--omega", "0.8", "--alpha", "0.3", "--n", "50"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.out.starts_with("t,x\n"));
  // Summary went to stderr because stdout carries the CSV.
  EXPECT_NE(a.err.find("sample variance"), std::string::npos);
}

TEST_F(CliTest, SimulateRejectsNonStationaryParameters) {
  const auto r = run({"simulate", "--omega", "0.5", "--alpha", "0.6", "--beta", "0.5"});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_NE(r.err.find("sum(alpha) + sum(beta) < 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownFlagIsInvalidInput) {
  EXPECT_EQ(run({"simulate", "--bogus"}).code, kExitInvalidInput);
  EXPECT_EQ(run({}).code, kExitInvalidInput);
  EXPECT_EQ(run({"estimate", "--input", (dir_ / "missing.csv").string()}).code, kExitInvalidInput);
}

TEST_F(CliTest, LocalizePrintsScanAndBox) {
  const auto r = run({"--csv", "localize", "--input", kBundledSeries, "--out-dir", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.starts_with("coordinate,lower,upper\nomega,"));
  const auto scan = slurp(dir_ / "scan.csv");
  EXPECT_TRUE(scan.starts_with("omega,derivative\n"));
  EXPECT_EQ(std::count(scan.begin(), scan.end(), '\n'), 6);
  EXPECT_NE(r.err.find("omega_bar = 0.8001"), std::string::npos);
}

TEST_F(CliTest, EstimateSchemaIsSharedAcrossMethods) {
  std::string header;
  for (const std::string method : {"quadfit", "nelder-mead", "bfgs"}) {
    const auto out = dir_ / method;
    const auto r = run({"estimate", "--input", kBundledSeries, "--method", method, "--out-dir", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* file : {"estimate.csv", "box.csv", "cut.csv", "fits.csv"}) {
      ASSERT_TRUE(fs::exists(out / file)) << method << ' ' << file;
    }
    const auto text = slurp(out / "estimate.csv");
    const auto first = text.substr(0, text.find('\n'));
    if (header.empty()) header = first;
    EXPECT_EQ(first, header);
    EXPECT_NE(text.find('\n' + method + ','), std::string::npos);
  }
  EXPECT_EQ(header, "method,omega,alpha1,objective,evaluations,flags");
  const auto cut = slurp(dir_ / "quadfit" / "cut.csv");
  EXPECT_EQ(std::count(cut.begin(), cut.end(), '\n'), 101);
}

TEST_F(CliTest, EstimateDumpsTerms) {
  const auto terms = dir_ / "terms.csv";
  const auto r = run({"estimate", "--input", kBundledSeries, "--method", "bfgs", "--dump-terms", terms.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = slurp(terms);
  EXPECT_TRUE(text.starts_with("t,sigma2,q_t\n2,"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 100);
}

TEST_F(CliTest, CsvOnStdoutIsClean) {
  const auto r = run({"--csv", "estimate", "--input", kBundledSeries, "--method", "nelder-mead"});
  ASSERT_EQ(r.code, kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, BenchmarkCsvColumns) {
  const auto path = dir_ / "bench.csv";
  const auto r = run({"--seed", "3", "--jobs", "2", "benchmark", "--omega", "1.2", "--alpha", "0.6", "--n", "100",
                      "--reps", "5", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = slurp(path);
  EXPECT_TRUE(text.starts_with("scenario,method,n,rmse_omega,rmse_alpha1,combined,failures\n")) << text;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  const auto again = run({"--seed", "3", "--jobs", "1", "--csv", "benchmark", "--omega", "1.2", "--alpha", "0.6",
                          "--n", "100", "--reps", "5"});
  EXPECT_EQ(again.out, text);
}

TEST_F(CliTest, PlotSeriesAndCut) {
  const auto est = dir_ / "est";
  ASSERT_EQ(run({"estimate", "--input", kBundledSeries, "--out-dir", est.string()}).code, kExitOk);
  const auto plots = dir_ / "plots";
  const auto r = run({"plot", "--input", kBundledSeries, "--estimate-dir", est.string(), "--out-dir", plots.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"series.svg", "cut_omega.svg", "cut_alpha1.svg"}) {
    const auto svg = slurp(plots / f);
    EXPECT_TRUE(svg.starts_with("<svg")) << f;
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
  }
  EXPECT_NE(slurp(plots / "cut_omega.svg").find("vertex "), std::string::npos);
  const auto again = dir_ / "plots2";
  ASSERT_EQ(run({"plot", "--input", kBundledSeries, "--estimate-dir", est.string(), "--out-dir", again.string()}).code,
            kExitOk);
  EXPECT_EQ(slurp(plots / "cut_omega.svg"), slurp(again / "cut_omega.svg"));
}

TEST_F(CliTest, PlotOfEmptyDirectoryLeavesNothing) {
  const auto empty = dir_ / "empty";
  fs::create_directories(empty);
  const auto plots = dir_ / "plots";
  const auto r = run({"plot", "--input", kBundledSeries, "--estimate-dir", empty.string(), "--out-dir", plots.string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_FALSE(fs::exists(plots));
}

TEST_F(CliTest, PlotOfBaselineEstimateIsRejected) {
  const auto est = dir_ / "bfgs";
  ASSERT_EQ(run({"estimate", "--input", kBundledSeries, "--method", "bfgs", "--out-dir", est.string()}).code, kExitOk);
  const auto r = run({"plot", "--estimate-dir", est.string(), "--out-dir", (dir_ / "plots").string()});
  EXPECT_EQ(r.code, kExitInvalidInput);
  EXPECT_FALSE(fs::exists(dir_ / "plots"));
}

TEST_F(CliTest, ReproduceReportsEveryCheck) {
  const auto r = run({"--csv", "reproduce-paper", "--data-dir", QAGARCH_TEST_DATA_DIR});
  // Exit code reflects the checklist outcome; on the bundled data some checks fail.
  EXPECT_TRUE(r.code == kExitOk || r.code == kExitCheckFailed);
  EXPECT_TRUE(r.out.starts_with("check,measured,target,tolerance,status\n"));
  const auto rows = std::count(r.out.begin(), r.out.end(), '\n') - 1;
  EXPECT_GE(rows, 5 + 10 + 3 + 5 + 1);
  EXPECT_EQ(r.code == kExitOk, r.out.find(",FAIL\n") == std::string::npos);
  EXPECT_NE(r.out.find("d/domega at (0.8001, 0.5)"), std::string::npos);
}

TEST_F(CliTest, ReproduceMissingDataIsInvalidInput) {
  EXPECT_EQ(run({"reproduce-paper", "--data-dir", dir_.string()}).code, kExitInvalidInput);
}

}  // namespace
}  // namespace qagarch::cli
