#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sumcheck/suites.hpp"

using namespace sumcheck;

namespace {

struct Common {
  std::string config, report, format = "json";
  std::optional<int> jobs;
  std::optional<double> tolerance;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI file with [general], [charsum], [delta], ... sections")->check(CLI::ExistingFile);
  app->add_option("--report", c.report, "write the report here (stdout when omitted)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--tolerance", c.tolerance, "replace every hard tolerance")->check(CLI::PositiveNumber);
  app->add_flag("--timing", c.timing, "include wall-clock seconds in the report");
}

std::pair<i64, i64> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ConfigInvalid, "n-range: expected lo:hi, got '" + s + "'");
  try {
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, "n-range: expected integers lo:hi, got '" + s + "'");
  }
}

int run(const std::string& suite, const Common& c, GridConfig cfg) {
  if (c.jobs) cfg.jobs = *c.jobs;
  if (c.tolerance) cfg.tolerance = *c.tolerance;
  const auto fmt = parse_format(c.format);
  auto rep = run_suite(suite, cfg);
  std::FILE* summary = c.report.empty() ? stderr : stdout;
  if (c.report.empty())
    std::cout << render_report(rep, fmt, c.timing);
  else
    emit_report(rep, fmt, c.report, c.timing);
  std::fprintf(summary, "%s: %lld cases, %lld passed, %lld failed, %lld monitored (%lld flagged)", suite.c_str(),
               static_cast<long long>(rep.total), static_cast<long long>(rep.passed), static_cast<long long>(rep.failed),
               static_cast<long long>(rep.monitored), static_cast<long long>(rep.monitored_flagged));
  i64 skipped = 0;
  for (auto& [_, n] : rep.skipped) skipped += n;
  std::fprintf(summary, ", %lld skipped, %.1f s\n", static_cast<long long>(skipped), rep.wall_seconds);
  for (auto& e : rep.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  return rep.exit_status();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumcheck: brute-force verification of character sum, delta-method and transform identities"};
  app.require_subcommand(1);

  Common common;
  std::optional<double> Q;
  std::optional<i64> m1, m2;
  std::string n_range, stub;
  std::optional<i64> c_max, budget;
  std::vector<double> Ns;
  std::string tau_cache;
  std::optional<double> toy_N, toy_M1, toy_C, loc_A;

  struct Sub {
    const char* name;
    const char* suite;
    const char* help;
  };
  const Sub subs[] = {{"verify-charsum", "charsum", "character sum factorizations, correlation structure, Weil bounds"},
                      {"verify-delta", "delta", "DFI delta symbol, rearrangement and detectors"},
                      {"scan-cancellation", "cancellation", "trace-function calculus and the shifted-correlation statistic"},
                      {"voronoi-gl2", "voronoi-gl2", "GL2 Voronoi identity on Ramanujan's Delta"},
                      {"scan-decay", "decay", "H/K decay scans, W-dagger localization, Psi- decay"},
                      {"transforms", "transforms", "I, J, R transforms, gamma factor and Psi checks"},
                      {"all", "all", "every suite"}};
  std::map<CLI::App*, std::string> suite_of;
  for (auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common);
    suite_of[sub] = s.suite;
    const std::string name = s.name;
    if (name == "verify-delta") {
      sub->add_option("--Q", Q, "delta-symbol Q")->check(CLI::PositiveNumber);
      sub->add_option("--m1", m1, "M1 for the rearrangement checks (with --m2)");
      sub->add_option("--m2", m2, "M2 for the rearrangement checks (with --m1)");
      sub->add_option("--n-range", n_range, "lo:hi");
      sub->add_option("--stub", stub, "omega stub")->check(CLI::IsMember({"one", "rational", "dfi", "all"}));
    }
    if (name == "voronoi-gl2") {
      sub->add_option("--c-max", c_max, "largest modulus c")->check(CLI::PositiveNumber);
      sub->add_option("--N", Ns, "N values")->delimiter(',');
      sub->add_option("--budget", budget, "coefficient budget");
      sub->add_option("--tau-cache", tau_cache, "tau(n) table file, one integer per line");
    }
    if (name == "scan-decay" || name == "transforms") {
      sub->add_option("--toy-N", toy_N, "toy N");
      sub->add_option("--toy-M1", toy_M1, "toy M1");
      sub->add_option("--toy-C", toy_C, "toy C");
    }
    if (name == "scan-decay") sub->add_option("--A", loc_A, "W-dagger localization frequency");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    GridConfig cfg;
    if (!common.config.empty()) cfg = load_config(common.config, cfg);
    if (Q) cfg.delta_Q = *Q;
    if (m1 || m2) {
      if (!(m1 && m2)) throw Error(ErrorCode::ConfigInvalid, "--m1 and --m2 go together");
      cfg.rearrangement_pairs = {{*m1, *m2}};
    }
    if (!n_range.empty()) std::tie(cfg.n_min, cfg.n_max) = parse_range(n_range);
    if (!stub.empty() && stub != "all") cfg.stubs = {stub};
    if (c_max) cfg.c_max = *c_max;
    if (!Ns.empty()) cfg.voronoi_N = Ns;
    if (budget) cfg.coeff_budget = *budget;
    if (!tau_cache.empty()) cfg.tau_cache = tau_cache;
    if (toy_N) cfg.toy_N = *toy_N;
    if (toy_M1) cfg.toy_m1 = *toy_M1;
    if (toy_C) cfg.toy_C = static_cast<i64>(*toy_C);
    if (loc_A) cfg.localization_A = *loc_A;
    for (auto& [sub, suite] : suite_of)
      if (sub->parsed()) return run(suite, common, cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    switch (e.code()) {
      case ErrorCode::QuadratureFailure:
      case ErrorCode::TruncationBudgetExceeded:
      case ErrorCode::PoleProximity:
        return 3;
      default:
        return 2;
    }
  }
  return 2;
}
