#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lraaa/io.hpp"

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lraaa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lraaa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string dir() {
  const char* d = std::getenv("LRAAA_TMPDIR");
  return d ? d : std::filesystem::temp_directory_path().string();
}

}  // namespace

TEST(Cli, MissingFlagIsUsageError) {
  const CliRun r = run({"fit", "--out", "x.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
}

TEST(Cli, GenerateFitEvalReport) {
  const std::string g = dir() + "/cli_sep.json", m = dir() + "/cli_model.json", t = dir() + "/cli_trace.dat",
                    v = dir() + "/cli_values.dat", e = dir() + "/cli_errors.dat";
  ASSERT_EQ(run({"generate", "--model", "separable", "--order", "2", "--points", "6", "--out", g}).code, 0);
  const CliRun f = run({"fit", "--input", g, "--algorithm", "lr-paaa", "--rank", "1", "--tol", "1e-10", "--out", m, "--trace", t});
  ASSERT_EQ(f.code, 0) << f.err;
  const lraaa::DatTable trace = lraaa::parse_dat(lraaa::read_text_file(t));
  EXPECT_EQ(trace.schema, "lraaa-trace/1");
  EXPECT_EQ(trace.names.front(), "iteration");
  const auto col = std::find(trace.names.begin(), trace.names.end(), "max_error") - trace.names.begin();
  ASSERT_LT(static_cast<std::size_t>(col), trace.names.size());
  EXPECT_LE(trace.columns[static_cast<std::size_t>(col)].back(), 1e-10);

  ASSERT_EQ(run({"eval", "--model", m, "--input", g, "--out", v}).code, 0);
  EXPECT_EQ(lraaa::parse_dat(lraaa::read_text_file(v)).columns.front().size(), 36u);
  ASSERT_EQ(run({"report", "--model", m, "--input", g, "--validation", g, "--out", e}).code, 0);
  EXPECT_EQ(lraaa::parse_dat(lraaa::read_text_file(e)).columns.front().size(), 2u);
}

TEST(Cli, SeededTraceIsReproducible) {
  const std::string g = dir() + "/cli_trig.json";
  ASSERT_EQ(run({"generate", "--model", "trig3", "--points", "12", "--out", g}).code, 0);
  std::string traces[2];
  for (int i = 0; i < 2; ++i) {
    const std::string t = dir() + "/cli_trig_trace" + std::to_string(i) + ".dat";
    ASSERT_EQ(run({"fit", "--input", g, "--rank", "2", "--seed", "7", "--max-iter", "6", "--out", dir() + "/cli_trig_model.json",
                   "--trace", t})
                  .code,
              0);
    traces[i] = lraaa::read_text_file(t);
  }
  EXPECT_EQ(traces[0], traces[1]);
}

TEST(Cli, MemoryBudgetExit3) {
  const std::string g = dir() + "/cli_budget.json";
  ASSERT_EQ(run({"generate", "--model", "trig3", "--points", "20", "--out", g}).code, 0);
  const CliRun r = run({"fit", "--input", g, "--algorithm", "paaa", "--memory-budget", "1e4", "--out", dir() + "/cli_budget_model.json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("lr-paaa"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, BadInputExit2) {
  const std::string g = dir() + "/cli_bad.json";
  {
    std::ofstream os(g);
    os << "{\"format\": 3";
  }
  EXPECT_EQ(run({"fit", "--input", g, "--out", dir() + "/cli_bad_model.json"}).code, 2);
  EXPECT_EQ(run({"fit", "--input", dir() + "/does_not_exist.json", "--out", dir() + "/x.json"}).code, 2);
}
