#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sumcheck/arith.hpp"

namespace sumcheck {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct CaseResult {
  std::string suite;
  std::string identity;  // short name of the identity or bound being checked
  KeyValues inputs;
  bool has_sides = false;  // lhs/rhs filled, otherwise value
  cplx lhs, rhs, value;
  double diff = 0;
  double tolerance = 0;
  double error_estimate = 0;
  bool pass = true;
  bool monitored = false;  // reported only, never affects the exit status
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<CaseResult> cases;
  KeyValues config;
  std::map<std::string, i64> skipped;  // reason -> count
  std::vector<std::string> errors;     // numeric failures, in case order
  i64 total = 0, passed = 0, failed = 0, monitored = 0, monitored_flagged = 0;
  double wall_seconds = 0;
  bool numeric_failure = false;

  void tally();
  // 0 pass, 1 hard assertion failed, 3 numeric failure
  int exit_status() const;
};

struct GridConfig {
  int jobs = 1;
  double tolerance = 0;  // > 0 replaces every hard tolerance

  // charsum
  std::vector<std::pair<i64, i64>> pairs{{3, 5}, {5, 3}, {5, 7}, {7, 5}, {11, 3}, {3, 11}};
  std::vector<i64> q_values{1, 2, 4};
  std::vector<i64> r_values{1, 2};
  std::vector<i64> n2_values{1, 2, 3};
  std::vector<i64> m_values{1, 2};
  std::string characters = "all";  // all | first
  std::vector<i64> corr_q_values{1, 2, 3};
  std::vector<i64> corr_n2t_values{0, 1, 2};
  i64 weil_max = 101;

  // delta
  double delta_Q = 40;
  i64 n_min = -20, n_max = 20;
  std::vector<double> rearrangement_Q{10, 20, 31};
  std::vector<std::pair<i64, i64>> rearrangement_pairs{{3, 5}, {5, 3}, {5, 7}, {7, 5}};
  std::vector<std::string> stubs{"one", "rational", "dfi"};
  int zeta_nodes = 12;

  // cancellation
  std::vector<i64> trace_primes{3, 5, 7, 11, 13};
  int trace_tuples = 20;
  i64 cancel_min = 5, cancel_max = 97;
  int cancel_tuples = 50;
  std::uint64_t seed = 20240501;

  // voronoi-gl2
  i64 c_max = 5;
  std::vector<double> voronoi_N{20, 30, 40, 50};
  i64 coeff_budget = 20000;
  std::string tau_cache;  // empty: no disk cache

  // decay / transforms toy
  double toy_N = 1e4, toy_m1 = 10, toy_m2 = 7;
  i64 toy_C = 4;
  double localization_A = 50;

  // throws ConfigInvalid naming the offending field
  void validate() const;
  KeyValues echo() const;
};

// INI file with sections [general], [charsum], [delta], [cancellation], [voronoi], [decay];
// keys not present keep the values of base
GridConfig load_config(const std::string& path, GridConfig base = {});

const std::vector<std::string>& suite_names();

VerificationReport run_suite(const std::string& name, const GridConfig& cfg);

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& s);
// wall-clock time is left out unless timing is set, so identical runs give identical bytes
std::string render_report(const VerificationReport& r, ReportFormat f, bool timing = false);
void emit_report(const VerificationReport& r, ReportFormat f, const std::string& path, bool timing = false);

}  // namespace sumcheck
