#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sumcheck/suites.hpp"

using namespace sumcheck;

namespace {

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

GridConfig small_charsum() {
  GridConfig g;
  g.pairs = {{3, 5}, {5, 3}};
  g.characters = "first";
  g.corr_q_values = {1, 2};
  g.corr_n2t_values = {0, 1};
  g.weil_max = 13;
  return g;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;  // sentinel: nothing thrown
}

}  // namespace

TEST(GridConfig, DefaultsAreValid) {
  GridConfig g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_FALSE(g.echo().empty());
}

TEST(GridConfig, EqualModuliRejected) {
  GridConfig g;
  g.pairs = {{5, 5}};
  try {
    g.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigInvalid);
    EXPECT_NE(std::string(e.what()).find("charsum.pairs"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { run_suite("charsum", [] {
                           GridConfig g;
                           g.pairs = {{7, 7}};
                           return g;
                         }()); }),
            ErrorCode::ConfigInvalid);
}

TEST(GridConfig, FieldDiagnostics) {
  GridConfig g;
  g.n_min = -500;
  EXPECT_EQ(code_of([&] { g.validate(); }), ErrorCode::ConfigInvalid);
  g = GridConfig{};
  g.stubs = {"bogus"};
  EXPECT_EQ(code_of([&] { g.validate(); }), ErrorCode::ConfigInvalid);
  g = GridConfig{};
  g.toy_C = 8;  // Q/C below 5
  EXPECT_EQ(code_of([&] { g.validate(); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { run_suite("nope", GridConfig{}); }), ErrorCode::ConfigInvalid);
}

TEST(GridConfig, IniFile) {
  const auto path = temp_path("sumcheck_cfg_test.ini");
  write_file(path, "[general]\njobs = 3\n[charsum]\npairs = 5:7, 7:5\nq = 1,2\n[delta]\nn_range = -4:6\nstubs = one,dfi\n");
  auto g = load_config(path);
  EXPECT_EQ(g.jobs, 3);
  ASSERT_EQ(g.pairs.size(), 2u);
  EXPECT_EQ(g.pairs[1], (std::pair<i64, i64>{7, 5}));
  EXPECT_EQ(g.q_values, (std::vector<i64>{1, 2}));
  EXPECT_EQ(g.n_min, -4);
  EXPECT_EQ(g.n_max, 6);
  EXPECT_EQ(g.stubs, (std::vector<std::string>{"one", "dfi"}));
  EXPECT_EQ(g.m_values, GridConfig{}.m_values);

  write_file(path, "[general]\ntolerance = 0.5   ; comment\n[delta]\nstubs = one # two\n");
  g = load_config(path);
  EXPECT_EQ(g.tolerance, 0.5);
  EXPECT_EQ(g.stubs, (std::vector<std::string>{"one"}));

  write_file(path, "[charsum]\npairs = 3:3\n");
  EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::ConfigInvalid);
  write_file(path, "[charsum]\nunknown = 1\n");
  EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::ConfigInvalid);
  write_file(path, "[delta]\nQ = forty\n");
  EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::ConfigInvalid);
  std::filesystem::remove(path);
}

TEST(RunSuite, CharsumSmallGridPasses) {
  auto r = run_suite("charsum", small_charsum());
  EXPECT_EQ(r.exit_status(), 0);
  EXPECT_GT(r.passed, 100);
  EXPECT_EQ(r.failed, 0);
  i64 tally = 0;
  for (auto& c : r.cases) tally += c.monitored ? 0 : 1;
  EXPECT_EQ(tally, r.passed + r.failed);
  EXPECT_EQ(r.total, static_cast<i64>(r.cases.size()));
}

TEST(RunSuite, DeltaAtQ40) {
  GridConfig g;
  g.rearrangement_pairs = {{3, 5}};
  g.rearrangement_Q = {10};
  g.n_min = -3;
  g.n_max = 3;
  auto r = run_suite("delta", g);
  EXPECT_EQ(r.exit_status(), 0);
  for (auto& c : r.cases)
    if (c.identity == "delta-symbol") EXPECT_LE(c.diff, 1e-6);
}

TEST(RunSuite, DeterministicAcrossJobs) {
  auto g = small_charsum();
  g.jobs = 1;
  const auto a = render_report(run_suite("charsum", g), ReportFormat::Json);
  g.jobs = 4;
  const auto b = render_report(run_suite("charsum", g), ReportFormat::Json);
  EXPECT_EQ(a, b);
}

TEST(RunSuite, ExitStatus) {
  VerificationReport r;
  CaseResult ok, soft, hard;
  soft.monitored = true;
  soft.pass = false;
  r.cases = {ok, soft};
  r.tally();
  EXPECT_EQ(r.exit_status(), 0);
  EXPECT_EQ(r.monitored_flagged, 1);
  hard.pass = false;
  r.cases.push_back(hard);
  r.tally();
  EXPECT_EQ(r.exit_status(), 1);
  r.numeric_failure = true;
  EXPECT_EQ(r.exit_status(), 3);
}

TEST(RunSuite, NumericFailureIsReported) {
  GridConfig g;
  g.c_max = 1;
  g.voronoi_N = {20};
  g.coeff_budget = 40;
  auto r = run_suite("voronoi-gl2", g);
  EXPECT_TRUE(r.numeric_failure);
  EXPECT_EQ(r.exit_status(), 3);
  ASSERT_FALSE(r.errors.empty());
  EXPECT_NE(r.errors[0].find("TruncationBudgetExceeded"), std::string::npos);
}

TEST(EmitReport, ByteIdenticalFiles) {
  auto g = small_charsum();
  const auto p1 = temp_path("sumcheck_r1.json"), p2 = temp_path("sumcheck_r2.json");
  emit_report(run_suite("charsum", g), ReportFormat::Json, p1);
  emit_report(run_suite("charsum", g), ReportFormat::Json, p2);
  EXPECT_EQ(read_file(p1), read_file(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST(EmitReport, CsvRows) {
  GridConfig g;
  g.trace_primes = {5};
  g.trace_tuples = 2;
  g.cancel_min = 5;
  g.cancel_max = 11;
  g.cancel_tuples = 4;
  auto r = run_suite("cancellation", g);
  const auto csv = render_report(r, ReportFormat::Csv);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("suite,identity,inputs,kind,pass", 0), 0u);
  i64 rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, static_cast<i64>(r.cases.size()));
}

TEST(EmitReport, JsonRoundTrip) {
  GridConfig g;
  g.c_max = 2;
  g.voronoi_N = {30};
  auto r = run_suite("voronoi-gl2", g);
  auto j = nlohmann::json::parse(render_report(r, ReportFormat::Json, true));
  EXPECT_EQ(j["suite"], "voronoi-gl2");
  EXPECT_EQ(j["summary"]["cases"].get<i64>(), r.total);
  EXPECT_TRUE(j.contains("wall_seconds"));
  ASSERT_EQ(j["cases"].size(), r.cases.size());
  for (auto& c : j["cases"]) {
    EXPECT_TRUE(c["pass"].get<bool>());
    EXPECT_TRUE(c.contains("error_estimate"));
    EXPECT_TRUE(c["inputs"].contains("N"));
  }
  EXPECT_FALSE(nlohmann::json::parse(render_report(r, ReportFormat::Json)).contains("wall_seconds"));
}

TEST(EmitReport, IoError) {
  VerificationReport r;
  EXPECT_EQ(code_of([&] { emit_report(r, ReportFormat::Json, "/nonexistent-dir/x/report.json"); }), ErrorCode::IoError);
  EXPECT_EQ(code_of([] { parse_format("xml"); }), ErrorCode::ConfigInvalid);
}
