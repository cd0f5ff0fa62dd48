#include "sumcheck/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "sumcheck/characters.hpp"
#include "sumcheck/charsum.hpp"
#include "sumcheck/delta.hpp"
#include "sumcheck/expsums.hpp"
#include "sumcheck/oscillatory.hpp"
#include "sumcheck/special.hpp"
#include "sumcheck/transforms.hpp"

namespace sumcheck {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(i64 v) { return std::to_string(v); }

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (auto& x : xs) s += (s.empty() ? "" : ",") + num(x);
  return s;
}

std::string join_pairs(const std::vector<std::pair<i64, i64>>& xs) {
  std::string s;
  for (auto& [a, b] : xs) s += (s.empty() ? "" : ",") + num(a) + ":" + num(b);
  return s;
}

std::string join_str(const std::vector<std::string>& xs) {
  std::string s;
  for (auto& x : xs) s += (s.empty() ? "" : ",") + x;
  return s;
}

bool numeric_code(ErrorCode c) {
  return c == ErrorCode::QuadratureFailure || c == ErrorCode::TruncationBudgetExceeded || c == ErrorCode::PoleProximity;
}

// ---------------------------------------------------------------------------
// work queue: tasks run on a pool, results land in task order
// ---------------------------------------------------------------------------

using Task = std::function<std::vector<CaseResult>()>;

struct TaskOutcome {
  std::vector<CaseResult> cases;
  std::string error;
  bool numeric = false;
};

void run_tasks(const std::string& suite, std::vector<std::pair<std::string, Task>>& tasks, int jobs,
               VerificationReport& rep) {
  std::vector<TaskOutcome> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        out[i].cases = tasks[i].second();
      } catch (const Error& e) {
        out[i].error = tasks[i].first + ": " + e.what();
        out[i].numeric = numeric_code(e.code());
      } catch (const std::exception& e) {
        out[i].error = tasks[i].first + ": " + e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto& c : out[i].cases) {
      c.suite = suite;
      rep.cases.push_back(std::move(c));
    }
    if (!out[i].error.empty()) {
      CaseResult c;
      c.suite = suite;
      c.identity = tasks[i].first;
      c.pass = false;
      c.note = out[i].error;
      rep.cases.push_back(std::move(c));
      rep.errors.push_back(out[i].error);
      if (out[i].numeric) rep.numeric_failure = true;
    }
  }
}

CaseResult sides(std::string identity, KeyValues in, cplx lhs, cplx rhs, double tol, bool relative) {
  CaseResult c;
  c.identity = std::move(identity);
  c.inputs = std::move(in);
  c.has_sides = true;
  c.lhs = lhs;
  c.rhs = rhs;
  c.diff = std::abs(lhs - rhs);
  c.tolerance = relative ? tol * (1 + std::abs(lhs)) : tol;
  c.pass = c.diff <= c.tolerance;
  return c;
}

CaseResult bound(std::string identity, KeyValues in, double value, double limit, bool monitored = false) {
  CaseResult c;
  c.identity = std::move(identity);
  c.inputs = std::move(in);
  c.value = value;
  c.diff = value;
  c.tolerance = limit;
  c.pass = value <= limit;
  c.monitored = monitored;
  return c;
}

double pick(const GridConfig& cfg, double dflt) { return cfg.tolerance > 0 ? cfg.tolerance : dflt; }

std::vector<DirichletCharacter> chars_for(i64 p, const GridConfig& cfg) {
  auto all = primitive_characters(p);
  if (cfg.characters == "first" && !all.empty()) all.resize(1);
  return all;
}

// ---------------------------------------------------------------------------
// charsum: factorizations, correlation structure, Weil
// ---------------------------------------------------------------------------

void charsum_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  const double tol = pick(cfg, 1e-8);
  for (auto [M1, M2] : cfg.pairs) {
    FactoredModulus M(M1, M2);
    for (auto& chi1 : chars_for(M1, cfg))
      for (auto& chi2 : chars_for(M2, cfg)) {
        std::vector<CharSumInstance> insts;
        for (i64 q : cfg.q_values)
          for (i64 r : cfg.r_values)
            for (i64 n1 : divisors(q * r))
              for (i64 m : cfg.m_values)
                for (int sm : {1, -1}) {
                  CharSumInstance s;
                  s.M = M;
                  s.q = q;
                  s.r = r;
                  s.n1 = n1;
                  s.m = m;
                  s.sign_m = sm;
                  s.chi1 = chi1;
                  s.chi2 = chi2;
                  try {
                    s.validate();
                  } catch (const Error& e) {
                    ++rep.skipped[std::string("charsum: ") + e.what()];
                    continue;
                  }
                  insts.push_back(s);
                }
        if (insts.empty()) continue;
        const std::string name = "c-factorization M=" + num(M1) + "x" + num(M2) + " chi=" + chi1.label() + chi2.label();
        tasks.emplace_back(name, [insts, tol, &cfg] {
          std::vector<CaseResult> out;
          for (auto s : insts) {
            const auto row1 = c1_bruteforce_row(s), row2 = c2_bruteforce_row(s);
            for (i64 n2 : cfg.n2_values)
              for (int sn : {1, -1}) {
                s.n2 = n2;
                s.sign_n2 = sn;
                const auto idx = static_cast<std::size_t>(mod(s.n2_eff(), s.kl_modulus()));
                KeyValues in{{"M1", num(s.M.m1)}, {"M2", num(s.M.m2)}, {"chi1", s.chi1.label()}, {"chi2", s.chi2.label()},
                             {"q", num(s.q)},     {"r", num(s.r)},     {"n1", num(s.n1)},          {"n2", num(sn * n2)},
                             {"m", num(s.sign_m * s.m)}};
                out.push_back(sides("c1-factorization", in, row1[idx], c1_factored(s), tol, true));
                out.push_back(sides("c2-factorization", in, row2[idx], c2_factored(s), tol, true));
              }
          }
          return out;
        });
      }
  }

  // correlation sums on the same grid with q = q1 q2, q' = q1 q2'
  for (auto [M1, M2] : cfg.pairs) {
    FactoredModulus M(M1, M2);
    for (auto& chi1 : chars_for(M1, cfg))
      for (auto& chi2 : chars_for(M2, cfg)) {
        std::vector<CorrelationInstance> insts;
        for (i64 q1 : cfg.corr_q_values)
          for (i64 q2 : cfg.corr_q_values)
            for (i64 q2p : cfg.corr_q_values)
              for (i64 r : cfg.r_values)
                for (i64 n1 : divisors(q1 * r))
                  for (i64 m : cfg.m_values)
                    for (i64 mp : cfg.m_values)
                      for (int sm : {1, -1})
                        for (i64 n2t : cfg.corr_n2t_values) {
                          CorrelationInstance c;
                          c.M = M;
                          c.chi1 = chi1;
                          c.chi2 = chi2;
                          c.q1 = q1;
                          c.q2 = q2;
                          c.q2p = q2p;
                          c.r = r;
                          c.n1 = n1;
                          c.m = m;
                          c.mp = mp;
                          c.sign_m = sm;
                          c.n2t = n2t;
                          try {
                            c.validate();
                          } catch (const Error& e) {
                            ++rep.skipped[std::string("correlation: ") + e.what()];
                            continue;
                          }
                          insts.push_back(c);
                        }
        if (insts.empty()) continue;
        const std::string name = "correlation M=" + num(M1) + "x" + num(M2) + " chi=" + chi1.label() + chi2.label();
        const double rtol = pick(cfg, 1e-10);
        tasks.emplace_back(name, [insts, tol, rtol] {
          std::vector<CaseResult> out;
          for (auto& c : insts) {
            KeyValues in{{"M1", num(c.M.m1)}, {"M2", num(c.M.m2)}, {"chi1", c.chi1.label()}, {"chi2", c.chi2.label()},
                         {"q1", num(c.q1)},   {"q2", num(c.q2)},   {"q2p", num(c.q2p)},       {"r", num(c.r)},
                         {"n1", num(c.n1)},   {"m", num(c.sign_m * c.m)}, {"mp", num(c.sign_m * c.mp)}, {"n2t", num(c.n2t)}};
            const cplx C = correlation_C(c), C1 = correlation_C1(c), C2 = correlation_C2(c);
            out.push_back(sides("correlation-crt", in, C, correlation_prefactor(c) * C1 * C2, tol, true));
            out.push_back(sides("c2-reindexing", in, C2, correlation_C2_reindexed(c), rtol, false));
            if (c.n2t == 0) {
              auto z = bound("c2-zero-structure", in, std::abs(C2), c2_zero_bound(c), true);
              if (c.q2 != c.q2p && std::abs(C2) > 1e-9) z.note = "nonzero at n2t = 0 with q2 != q2'";
              out.push_back(z);
            }
          }
          return out;
        });
      }
  }

  for (i64 p = 2; p <= cfg.weil_max; ++p) {
    if (!is_prime(p)) continue;
    tasks.emplace_back("weil p=" + num(p), [p] {
      auto t = kloosterman_table(p);
      double worst = 0, worst_kl = 0;
      for (i64 m = 1; m < p; ++m)
        for (i64 n = 1; n < p; ++n) worst = std::max(worst, std::abs((*t)(m, n)));
      for (i64 n = 1; n < p; ++n) worst_kl = std::max(worst_kl, std::abs(kl2_normalized(n, p)));
      const double root = std::sqrt(static_cast<double>(p));
      return std::vector<CaseResult>{bound("weil-bound", {{"p", num(p)}}, worst, 2 * root + 1e-9),
                                     bound("kl2-bound", {{"p", num(p)}}, worst_kl, 2 + 1e-12)};
    });
  }
  run_tasks("charsum", tasks, cfg.jobs, rep);
}

// ---------------------------------------------------------------------------
// delta: DFI delta symbol, rearrangement, detectors
// ---------------------------------------------------------------------------

void delta_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  std::vector<i64> ns;
  for (i64 n = cfg.n_min; n <= cfg.n_max; ++n) ns.push_back(n);

  const double dtol = pick(cfg, 1e-6);
  tasks.emplace_back("delta-symbol Q=" + num(cfg.delta_Q), [&cfg, ns, dtol] {
    DfiWeight w(DeltaParams{cfg.delta_Q});
    const auto d = w.delta(ns);
    std::vector<CaseResult> out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double want = ns[i] == 0 ? 1.0 : 0.0;
      auto c = sides("delta-symbol", {{"Q", num(cfg.delta_Q)}, {"n", num(ns[i])}}, d[i], want, dtol, false);
      out.push_back(c);
    }
    return out;
  });

  // one DFI weight per Q, shared by the rearrangement tasks
  auto weights = std::make_shared<std::map<double, std::shared_ptr<DfiWeight>>>();
  for (double Q : cfg.rearrangement_Q) (*weights)[Q] = std::make_shared<DfiWeight>(DeltaParams{Q});
  const ZetaGrid grid = ZetaGrid::gauss(cfg.zeta_nodes, -2, 2);
  const double rtol = pick(cfg, 1e-10);
  for (auto [M1, M2] : cfg.rearrangement_pairs)
    for (double Q : cfg.rearrangement_Q)
      for (const auto& stub : cfg.stubs) {
        tasks.emplace_back("rearrangement M=" + num(M1) + "x" + num(M2) + " Q=" + num(Q) + " " + stub,
                           [=] {
                             FactoredModulus M(M1, M2);
                             auto w = weights->at(Q);
                             OmegaStub om;
                             if (stub == "one")
                               om = [](i64, double) { return 1.0; };
                             else if (stub == "rational")
                               om = [](i64 q, double z) { return 1.0 / (1.0 + static_cast<double>(q) + z * z); };
                             else
                               om = [w](i64 q, double z) { return w->omega(q, z); };
                             std::vector<CaseResult> out;
                             for (i64 n : ns) {
                               auto r = rearrangement_check(n, Q, M, om, grid);
                               out.push_back(sides("rearrangement",
                                                   {{"M1", num(M1)}, {"M2", num(M2)}, {"Q", num(Q)}, {"stub", stub}, {"n", num(n)}},
                                                   r.lhs, r.rhs, rtol, false));
                             }
                             return out;
                           });
      }

  for (auto [M1, M2] : cfg.rearrangement_pairs)
    tasks.emplace_back("detectors M=" + num(M1) + "x" + num(M2), [=, &cfg] {
      FactoredModulus M(M1, M2);
      std::vector<CaseResult> out;
      for (double Q : cfg.rearrangement_Q) {
        const auto a = ledger_lhs(Q, M), b = ledger_rhs(Q, M);
        CaseResult c;
        c.identity = "rearrangement-ledger";
        c.inputs = {{"M1", num(M1)}, {"M2", num(M2)}, {"Q", num(Q)}};
        c.value = static_cast<double>(a.size());
        c.pass = a == b;
        if (!c.pass) c.note = "term ledgers differ";
        out.push_back(c);
      }
      for (i64 q = 1; q <= 30; ++q) {
        if (std::gcd(q, M1) != 1) continue;
        CaseResult c;
        c.identity = "unit-bijection";
        c.inputs = {{"q", num(q)}, {"M1", num(M1)}};
        c.pass = unit_bijection_check(q, M1);
        c.value = c.pass ? 1 : 0;
        out.push_back(c);
      }
      for (i64 n : ns) {
        auto [v, want] = congruence_detector_check(n, M1);
        out.push_back(sides("congruence-detector", {{"n", num(n)}, {"M1", num(M1)}}, v, static_cast<double>(want), 1e-12, false));
      }
      return out;
    });
  run_tasks("delta", tasks, cfg.jobs, rep);
}

// ---------------------------------------------------------------------------
// cancellation: trace-function calculus and the shifted-correlation statistic
// ---------------------------------------------------------------------------

double max_diff(const FieldFn& a, const FieldFn& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void cancellation_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  const double tol = pick(cfg, 1e-10);
  for (i64 p : cfg.trace_primes) {
    const auto chars = primitive_characters(p);
    for (std::size_t ci = 0; ci < chars.size(); ++ci) {
      // tuples drawn in the main thread so the grid does not depend on scheduling
      std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(p) * 1000 + ci);
      std::uniform_int_distribution<i64> u(1, p - 1);
      std::vector<TraceFunctionParams> tps;
      for (int t = 0; t < cfg.trace_tuples; ++t) tps.push_back({u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 0, chars[ci]});
      tasks.emplace_back("trace-calculus p=" + num(p) + " chi=" + chars[ci].label(), [tps, p, tol] {
        std::vector<CaseResult> out;
        for (auto tp : tps) {
          KeyValues in{{"p", num(p)}, {"chi1", tp.chi1.label()}, {"alpha", num(tp.alpha)}, {"beta", num(tp.beta)},
                       {"gamma", num(tp.gamma)}, {"alpha_p", num(tp.alpha_p)}, {"beta_p", num(tp.beta_p)},
                       {"gamma_p", num(tp.gamma_p)}};
          const auto oracle = finite_fourier(l_table(tp.alpha, tp.beta, p, tp.chi1));
          FieldFn closed(static_cast<std::size_t>(p));
          for (i64 v = 0; v < p; ++v) closed[static_cast<std::size_t>(v)] = l_hat_closed_form(tp.alpha, tp.beta, v, tp.chi1);
          out.push_back(bound("l-hat-closed-form", in, max_diff(closed, oracle), tol));
          out.push_back(bound("z-closed-form", in,
                              max_diff(z_transform(tp.alpha, tp.beta, tp.gamma, tp.chi1), z_chain(tp.alpha, tp.beta, tp.gamma, tp.chi1)),
                              tol));
          double worst = 0;
          for (i64 eta = 0; eta < p; ++eta) {
            tp.eta = eta;
            auto r = plancherel_check(tp);
            worst = std::max(worst, std::abs(r.lhs - r.rhs));
          }
          out.push_back(bound("shifted-plancherel", in, worst, tol));
        }
        return out;
      });
    }
  }

  for (i64 p = cfg.cancel_min; p <= cfg.cancel_max; ++p) {
    if (!is_prime(p) || p < 3) continue;
    const auto chars = primitive_characters(p);
    std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(p) << 20));
    std::uniform_int_distribution<i64> u(1, p - 1);
    std::uniform_int_distribution<std::size_t> uc(0, chars.size() - 1);
    std::vector<TraceFunctionParams> tps;
    while (static_cast<int>(tps.size()) < cfg.cancel_tuples) {
      TraceFunctionParams tp{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 0, chars[uc(rng)]};
      if (!degenerate_tuple(tp)) tps.push_back(tp);
    }
    // a degenerate tuple: alpha' = alpha, beta' gamma' = beta gamma
    const i64 a = u(rng), b = u(rng), g = u(rng);
    tps.push_back({a, b, g, a, g, b, 0, chars[uc(rng)]});
    tasks.emplace_back("cancellation p=" + num(p), [tps, p] {
      std::vector<CaseResult> out;
      const double pd = static_cast<double>(p);
      for (auto& tp : tps) {
        KeyValues in{{"p", num(p)}, {"chi1", tp.chi1.label()}, {"alpha", num(tp.alpha)}, {"beta", num(tp.beta)},
                     {"gamma", num(tp.gamma)}, {"alpha_p", num(tp.alpha_p)}, {"beta_p", num(tp.beta_p)},
                     {"gamma_p", num(tp.gamma_p)}};
        auto st = cancellation_statistic(tp);
        if (st.degenerate) {
          const double ratio = std::abs(st.values[0]) / pd;
          CaseResult c = bound("degenerate-diagonal", in, ratio, 3.0, true);
          c.pass = ratio >= 1.0 / 3.0 && ratio <= 3.0;
          c.note = "|sum at eta = 0| / M1";
          out.push_back(c);
        }
        CaseResult c = bound("shifted-correlation-ratio", in, st.max_ratio, 10.0, true);
        c.error_estimate = st.mean_ratio;
        c.note = "max over eta != 0 of |sum| / sqrt(M1); error_estimate holds the mean";
        out.push_back(c);
      }
      return out;
    });
  }
  run_tasks("cancellation", tasks, cfg.jobs, rep);
}

// ---------------------------------------------------------------------------
// voronoi-gl2
// ---------------------------------------------------------------------------

void voronoi_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  const auto phi = SmoothWeight::plateau(1, 1.25, 1.75, 2);
  double nmax = 0;
  for (double N : cfg.voronoi_N) nmax = std::max(nmax, N);
  const i64 need = std::max<i64>(cfg.coeff_budget, static_cast<i64>(std::ceil(nmax * phi.hi())) + 1);
  auto table = std::make_shared<std::vector<__int128>>(cfg.tau_cache.empty() ? tau_coefficients(need)
                                                                             : tau_coefficients_cached(need, cfg.tau_cache));
  const double tol = pick(cfg, 1e-5);
  for (i64 c = 1; c <= cfg.c_max; ++c)
    for (double N : cfg.voronoi_N)
      tasks.emplace_back("voronoi-gl2 c=" + num(c) + " N=" + num(N), [=, &cfg] {
        Gl2Voronoi v(phi, N, c, cfg.coeff_budget, tol, *table);
        std::vector<CaseResult> out;
        for (i64 a = 1; a <= c; ++a) {
          if (std::gcd(a, c) != 1) continue;
          auto r = v.check(a);
          auto cr = sides("gl2-voronoi", {{"a", num(a)}, {"c", num(c)}, {"N", num(N)}, {"phi", phi.describe()}}, r.lhs, r.rhs,
                          tol, true);
          cr.error_estimate = r.truncation_estimate;
          cr.note = "dual terms " + num(r.dual_terms);
          out.push_back(cr);
        }
        return out;
      });
  run_tasks("voronoi-gl2", tasks, cfg.jobs, rep);
}

// ---------------------------------------------------------------------------
// decay and transforms
// ---------------------------------------------------------------------------

OscParams toy_params(const GridConfig& cfg) {
  OscParams p;
  p.N = cfg.toy_N;
  p.m1 = cfg.toy_m1;
  p.m2 = cfg.toy_m2;
  p.Q = std::sqrt(p.N / p.m1);
  p.q = p.qp = cfg.toy_C;
  return p;
}

KeyValues toy_inputs(const OscParams& p) {
  return {{"N", num(p.N)}, {"M1", num(p.m1)}, {"M2", num(p.m2)}, {"C", num(p.q)}, {"m", num(p.m)}, {"mp", num(p.mp)}};
}

void decay_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  const OscParams base = toy_params(cfg);
  struct Scan {
    DecayVariant v;
    int si, sj;
  };
  for (Scan s : {Scan{DecayVariant::H, -1, 1}, Scan{DecayVariant::H, 1, -1}, Scan{DecayVariant::K, -1, 1}}) {
    const std::string tag = std::string(s.v == DecayVariant::H ? "H" : "K") + (s.si > 0 ? "+" : "-") + (s.sj > 0 ? "+" : "-");
    tasks.emplace_back("decay " + tag, [=] {
      OscParams p = base;
      if (s.v == DecayVariant::K) {
        p.m = 2;
        p.mp = 3;
      }
      auto r = h_decay_scan(p, default_x_grid(p), s.v, s.si, s.sj);
      KeyValues in = toy_inputs(p);
      in.emplace_back("variant", tag);
      std::vector<CaseResult> out;
      auto c = bound(s.v == DecayVariant::H ? "h-tail-ratio" : "k-tail-ratio", in, r.tail_ratio, 1e-3);
      c.pass = r.pass;
      c.note = "max |X| > 10 Q/C over max |X| <= Q/C; peak " + num(r.peak) + " at X = " + num(r.X_peak);
      out.push_back(c);
      auto z = bound("h-zero-size", in, r.h0, r.c_over_q, true);
      z.note = "|H(0)| against C/Q";
      out.push_back(z);
      auto d = bound("dual-mass-extent", in, r.dual_mass_X, 10 * r.band, true);
      d.note = "|X| holding 99.9% of the scanned mass";
      out.push_back(d);
      return out;
    });
  }
  tasks.emplace_back("w-dagger", [&cfg, base] {
    std::vector<CaseResult> out;
    const double A = cfg.localization_A;
    auto L = w_dagger_localization(A, base.W);
    auto c = bound("w-dagger-localization", {{"A", num(A)}, {"window_lo", num(L.window_lo)}, {"window_hi", num(L.window_hi)}},
                   1 - L.mass_fraction, 0.01);
    c.value = L.mass_fraction;
    c.note = "share of the tau mass outside [Xi/4, 4 Xi], Xi = 2 pi A";
    out.push_back(c);
    out.push_back(bound("w-dagger-size", {{"A", num(A)}}, L.max_ratio_to_bound, 10, true));
    const cplx off = w_dagger(A, cplx(0.5, -kTwoPi * A), base.W), on = w_dagger(A, cplx(0.5, 3 * kPi * A), base.W);
    auto d = bound("w-dagger-decay", {{"A", num(A)}, {"tau_off", num(kTwoPi * A)}, {"tau_on", num(-3 * kPi * A)}},
                   std::abs(off) / std::abs(on), 1e-4);
    d.value = off;
    out.push_back(d);
    return out;
  });
  tasks.emplace_back("psi-minus-maass", [] {
    std::vector<CaseResult> out;
    const auto m = SpectralParams::maass(1.0);
    const auto phi = SmoothWeight::plateau(1, 1.25, 1.75, 2);
    for (double x : {25.0, 50.0, 100.0, 200.0, 400.0, 1000.0}) {
      const cplx v = psi_transform(-1, x, phi, m);
      auto c = bound("psi-minus-decay", {{"x", num(x)}, {"mu", "1"}}, std::abs(v), 1e-6);
      c.value = v;
      out.push_back(c);
    }
    return out;
  });
  run_tasks("decay", tasks, cfg.jobs, rep);
}

void transforms_suite(const GridConfig& cfg, VerificationReport& rep) {
  std::vector<std::pair<std::string, Task>> tasks;
  const OscParams base = toy_params(cfg);
  tasks.emplace_back("j-transform", [base, &cfg] {
    OscParams p = base;
    p.q = p.qp = 3;
    TauOptions fine, deep;
    fine.refine = 2;
    deep.trunc = 1e-13;
    const auto a = frak_j(1, 0.05, 3, 1.0, p), b = frak_j(1, 0.05, 3, 1.0, p, fine), c = frak_j(1, 0.05, 3, 1.0, p, deep);
    KeyValues in = toy_inputs(p);
    in.insert(in.end(), {{"x", "0.05"}, {"zeta", "1"}, {"sign", "+"}});
    auto r = sides("j-refinement", in, a.value, b.value, pick(cfg, 1e-6) * std::abs(b.value), false);
    r.error_estimate = a.error;
    auto t = sides("j-truncation", in, std::abs(a.value), std::abs(c.value), pick(cfg, 1e-9) * std::abs(c.value), false);
    t.note = "tau window " + num(a.tau_lo) + ".." + num(a.tau_hi) + " vs " + num(c.tau_lo) + ".." + num(c.tau_hi);
    return std::vector<CaseResult>{r, t};
  });
  tasks.emplace_back("i-transform", [base] {
    std::vector<CaseResult> out;
    double sup = 0;
    for (double y = 1; y <= 2; y += 0.01) sup = std::max(sup, std::abs(bessel_kernel(1, 4 * kPi * std::sqrt(y), base.gl2)));
    for (double x : {0.01, 0.1, 0.5, 1.0})
      for (double z : {-1.5, 0.3, 1.0}) {
        const auto v = frak_i(1, x, base.q, z, base);
        auto c = bound("i-small-bound", {{"x", num(x)}, {"zeta", num(z)}}, std::abs(v.value), std::sqrt(x) * sup * 1.0001);
        c.value = v.value;
        c.error_estimate = v.error;
        out.push_back(c);
      }
    return out;
  });
  tasks.emplace_back("r-transform", [base, &cfg] {
    const OscParams p = base;
    const double y1 = 1000 * p.N / (16 * 70.0 * 70.0), y2 = 1000 / (64.0 * 1000);
    IFunction f = [&](double z) { return frak_i(-1, y1, p.q, z, p).value; };
    IFunction g = [](double z) { return cplx(std::cos(z), 0.5 * z); };
    IFunction h = [&](double z) { return 2.0 * f(z) - cplx(0, 3) * g(z); };
    const auto rf = frak_r(-1, 1, y1, y2, p.q, p, f), rg = frak_r(-1, 1, y1, y2, p.q, p, g), rh = frak_r(-1, 1, y1, y2, p.q, p, h);
    auto c = sides("r-linearity", {{"y1", num(y1)}, {"y2", num(y2)}, {"q", num(p.q)}}, rh.value,
                   2.0 * rf.value - cplx(0, 3) * rg.value,
                   pick(cfg, 1e-10) * (std::abs(rh.value) + std::abs(rf.value) + std::abs(rg.value)), false);
    c.error_estimate = rf.error;
    return std::vector<CaseResult>{c};
  });
  tasks.emplace_back("gamma", [&cfg] {
    std::vector<CaseResult> out;
    const auto sp0 = SpectralParams::gl3();
    double lo = 1e300, hi = 0, supp = 0;
    for (double t = 5; t <= 50; t += 0.5) {
      const double big = std::abs(gamma_pm(-1, cplx(-0.5, t), sp0)), small = std::abs(gamma_pm(1, cplx(-0.5, t), sp0));
      lo = std::min(lo, big);
      hi = std::max({hi, big, small});
      supp = std::max(supp, small / big);
    }
    auto band = bound("gamma-critical-size", {{"mu", "0,0,0"}, {"tau", "5..50"}}, hi, 50);
    band.pass = lo >= 1.0 / 50 && hi <= 50;
    band.note = "dominant branch min " + num(lo) + ", overall max " + num(hi) + ", suppressed/dominant " + num(supp);
    out.push_back(band);
    for (auto sp : {sp0, SpectralParams::gl3(0.3, -0.1, -0.2)})
      for (cplx s : {cplx(-0.5, 7), cplx(0.2, 30), cplx(-0.5, -400)})
        for (int sign : {1, -1}) {
          const cplx a = gamma_pm(sign, std::conj(s), sp), b = std::conj(gamma_pm(-sign, s, sp));
          out.push_back(sides("gamma-reflection",
                              {{"mu", sp.describe()}, {"s_re", num(s.real())}, {"s_im", num(s.imag())}, {"sign", sign > 0 ? "+" : "-"}},
                              a, b, pick(cfg, 1e-10), true));
        }
    const cplx v = gamma_pm(1, -0.5, SpectralParams::gl3(0.3, -0.1, -0.2));
    CaseResult c;
    c.identity = "gamma-finite";
    c.inputs = {{"mu", "0.3,-0.1,-0.2"}, {"s", "-0.5"}};
    c.value = v;
    c.pass = std::isfinite(v.real()) && std::isfinite(v.imag()) && std::abs(v) > 0;
    out.push_back(c);
    return out;
  });
  tasks.emplace_back("psi", [&cfg] {
    std::vector<CaseResult> out;
    const auto h = SpectralParams::holomorphic(12);
    const auto phi = SmoothWeight::plateau(1, 1.25, 1.75, 2);
    const cplx num100 = psi_transform(1, 100, phi, h), asy = psi_asymptotic(100, phi, h, 3);
    out.push_back(sides("psi-asymptotic", {{"x", "100"}, {"k", "12"}, {"terms", "3"}}, num100, asy, 0.05 * std::abs(num100), false));
    for (double x : {0.7, 12.0, 100.0}) {
      const cplx a = psi_transform(1, x, phi, h), b = psi_transform(1, x, phi.scaled(2), h);
      out.push_back(sides("psi-linearity", {{"x", num(x)}}, b, 2.0 * a, pick(cfg, 1e-12), true));
    }
    const cplx zero = psi_transform(1, 0.0, phi, h);
    out.push_back(sides("psi-at-zero", {{"x", "0"}}, zero, 0.0, 0.0, false));
    return out;
  });
  tasks.emplace_back("psi0", [base] {
    std::vector<CaseResult> out;
    OscParams p = base;
    p.N = 1e6;
    p.Q = std::sqrt(p.N / p.m1);
    p.q = p.qp = 2;
    const double zeta = 2, A = zeta * p.freq(p.q);
    for (int sign : {1, -1})
      for (double f : {0.01, 0.1, 1.0, 1.5, 2.0, 100.0}) {
        auto r = stationary_phase_psi0(sign, f * A * A, p, zeta);
        KeyValues in{{"sign", sign > 0 ? "+" : "-"}, {"x_over_A2", num(f)}, {"A", num(A)}};
        if (!r.predicted_support) {
          auto c = bound("psi0-negligible", in, std::abs(r.numeric), r.threshold);
          c.value = r.numeric;
          out.push_back(c);
        } else if (f == 1.5) {
          // stationary point y = x / A^2 in the middle of supp V
          const double s = std::abs(r.numeric) * std::sqrt(f) * A;
          auto c = bound("psi0-resonance", in, s, 10);
          c.pass = s >= 0.1 && s <= 10;
          c.value = r.numeric;
          c.note = "|numeric| sqrt(x) should be of order one";
          out.push_back(c);
        }
      }
    return out;
  });
  run_tasks("transforms", tasks, cfg.jobs, rep);
}

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

i64 to_int(const std::string& field, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad(field, "not an integer: '" + s + "'");
  }
}

double to_real(const std::string& field, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    bad(field, "not a number: '" + s + "'");
  }
}

std::vector<i64> int_list(const std::string& field, const std::string& s) {
  std::vector<i64> v;
  for (auto& t : split(s, ',')) v.push_back(to_int(field, t));
  if (v.empty()) bad(field, "empty list");
  return v;
}

std::vector<double> real_list(const std::string& field, const std::string& s) {
  std::vector<double> v;
  for (auto& t : split(s, ',')) v.push_back(to_real(field, t));
  if (v.empty()) bad(field, "empty list");
  return v;
}

std::vector<std::pair<i64, i64>> pair_list(const std::string& field, const std::string& s) {
  std::vector<std::pair<i64, i64>> v;
  for (auto& t : split(s, ',')) {
    auto ab = split(t, ':');
    if (ab.size() != 2) bad(field, "expected M1:M2, got '" + t + "'");
    v.emplace_back(to_int(field, ab[0]), to_int(field, ab[1]));
  }
  if (v.empty()) bad(field, "empty list");
  return v;
}

void check_pairs(const std::string& field, const std::vector<std::pair<i64, i64>>& ps) {
  for (auto [a, b] : ps) {
    if (a == b) bad(field, "M1 = M2 = " + num(a) + ", the moduli must be distinct primes");
    if (!is_prime(a) || a == 2) bad(field, "M1 = " + num(a) + " is not an odd prime");
    if (!is_prime(b) || b == 2) bad(field, "M2 = " + num(b) + " is not an odd prime");
  }
}

void check_positive(const std::string& field, const std::vector<i64>& xs) {
  for (i64 x : xs)
    if (x < 1) bad(field, "entries must be positive");
}

}  // namespace

// ===========================================================================
// report
// ===========================================================================

void VerificationReport::tally() {
  total = static_cast<i64>(cases.size());
  passed = failed = monitored = monitored_flagged = 0;
  for (auto& c : cases) {
    if (c.monitored) {
      ++monitored;
      if (!c.pass) ++monitored_flagged;
    } else if (c.pass) {
      ++passed;
    } else {
      ++failed;
    }
  }
}

int VerificationReport::exit_status() const {
  if (numeric_failure) return 3;
  for (auto& c : cases)
    if (!c.monitored && !c.pass) return 1;
  return 0;
}

// ===========================================================================
// config
// ===========================================================================

void GridConfig::validate() const {
  if (jobs < 1 || jobs > 1024) bad("general.jobs", "must lie in [1, 1024]");
  if (!(tolerance >= 0) || tolerance > 1) bad("general.tolerance", "must lie in [0, 1] (0 keeps per-check defaults)");
  check_pairs("charsum.pairs", pairs);
  check_positive("charsum.q", q_values);
  check_positive("charsum.r", r_values);
  check_positive("charsum.n2", n2_values);
  check_positive("charsum.m", m_values);
  check_positive("charsum.corr_q", corr_q_values);
  if (characters != "all" && characters != "first") bad("charsum.characters", "must be 'all' or 'first'");
  for (i64 v : corr_n2t_values)
    if (v < 0) bad("charsum.corr_n2t", "entries must be non-negative");
  if (weil_max < 0 || weil_max > 2000) bad("charsum.weil_max", "must lie in [0, 2000] (below 2 skips the Weil checks)");

  if (!(delta_Q > 1)) bad("delta.Q", "must exceed 1");
  if (n_min > n_max) bad("delta.n_range", "empty range " + num(n_min) + ":" + num(n_max));
  const double nmax = static_cast<double>(std::max(std::abs(n_min), std::abs(n_max)));
  if (4 * nmax > delta_Q * delta_Q) bad("delta.n_range", "|n| must stay within Q^2/4");
  for (double Q : rearrangement_Q)
    if (!(Q >= 1)) bad("delta.rearrangement_Q", "entries must be at least 1");
  check_pairs("delta.pairs", rearrangement_pairs);
  for (auto& s : stubs)
    if (s != "one" && s != "rational" && s != "dfi") bad("delta.stubs", "unknown stub '" + s + "' (one, rational, dfi)");
  if (stubs.empty()) bad("delta.stubs", "empty list");
  if (zeta_nodes < 2 || zeta_nodes > 200) bad("delta.zeta_nodes", "must lie in [2, 200]");

  for (i64 p : trace_primes)
    if (!is_prime(p) || p == 2) bad("cancellation.trace_primes", num(p) + " is not an odd prime");
  if (trace_tuples < 1) bad("cancellation.trace_tuples", "must be positive");
  if (cancel_min < 3 || cancel_max < cancel_min) bad("cancellation.range", "need 3 <= min <= max");
  if (cancel_tuples < 1) bad("cancellation.tuples", "must be positive");

  if (c_max < 1) bad("voronoi.c_max", "must be positive");
  for (double N : voronoi_N)
    if (!(N > 0)) bad("voronoi.N", "entries must be positive");
  if (coeff_budget < 1 || coeff_budget > 100000) bad("voronoi.budget", "must lie in [1, 100000]");

  if (!(toy_N > 0 && toy_m1 > 0 && toy_m2 > 0)) bad("decay.N/M1/M2", "must be positive");
  if (toy_C < 1) bad("decay.C", "must be positive");
  const double band = std::sqrt(toy_N / toy_m1) / static_cast<double>(toy_C);
  if (band < 5 || band > 50) bad("decay.C", "Q/C = " + num(band) + " must lie in [5, 50]");
  if (!(localization_A > 0)) bad("decay.A", "must be positive");
}

KeyValues GridConfig::echo() const {
  // jobs is left out: it never changes a result
  return {{"general.tolerance", num(tolerance)},
          {"charsum.pairs", join_pairs(pairs)},
          {"charsum.q", join(q_values)},
          {"charsum.r", join(r_values)},
          {"charsum.n2", join(n2_values)},
          {"charsum.m", join(m_values)},
          {"charsum.characters", characters},
          {"charsum.corr_q", join(corr_q_values)},
          {"charsum.corr_n2t", join(corr_n2t_values)},
          {"charsum.weil_max", num(weil_max)},
          {"delta.Q", num(delta_Q)},
          {"delta.n_range", num(n_min) + ":" + num(n_max)},
          {"delta.rearrangement_Q", join(rearrangement_Q)},
          {"delta.pairs", join_pairs(rearrangement_pairs)},
          {"delta.stubs", join_str(stubs)},
          {"delta.zeta_nodes", num(static_cast<i64>(zeta_nodes))},
          {"cancellation.trace_primes", join(trace_primes)},
          {"cancellation.trace_tuples", num(static_cast<i64>(trace_tuples))},
          {"cancellation.range", num(cancel_min) + ":" + num(cancel_max)},
          {"cancellation.tuples", num(static_cast<i64>(cancel_tuples))},
          {"cancellation.seed", std::to_string(seed)},
          {"voronoi.c_max", num(c_max)},
          {"voronoi.N", join(voronoi_N)},
          {"voronoi.budget", num(coeff_budget)},
          {"voronoi.tau_cache", tau_cache},
          {"decay.N", num(toy_N)},
          {"decay.M1", num(toy_m1)},
          {"decay.M2", num(toy_m2)},
          {"decay.C", num(toy_C)},
          {"decay.A", num(localization_A)}};
}

namespace {

// the INI reader keeps "value ; comment" whole
std::string strip_inline_comment(const std::string& v) {
  std::size_t cut = v.size();
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] == ';' || v[i] == '#') && std::isspace(static_cast<unsigned char>(v[i - 1]))) {
      cut = i;
      break;
    }
  auto end = cut;
  while (end > 0 && std::isspace(static_cast<unsigned char>(v[end - 1]))) --end;
  return v.substr(0, end);
}

}  // namespace

GridConfig load_config(const std::string& path, GridConfig cfg) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path + ": " + e.what());
  }
  using Setter = std::function<void(const std::string& field, const std::string& v)>;
  const std::map<std::string, Setter> keys{
      {"general.jobs", [&](auto& f, auto& v) { cfg.jobs = static_cast<int>(to_int(f, v)); }},
      {"general.tolerance", [&](auto& f, auto& v) { cfg.tolerance = to_real(f, v); }},
      {"charsum.pairs", [&](auto& f, auto& v) { cfg.pairs = pair_list(f, v); }},
      {"charsum.q", [&](auto& f, auto& v) { cfg.q_values = int_list(f, v); }},
      {"charsum.r", [&](auto& f, auto& v) { cfg.r_values = int_list(f, v); }},
      {"charsum.n2", [&](auto& f, auto& v) { cfg.n2_values = int_list(f, v); }},
      {"charsum.m", [&](auto& f, auto& v) { cfg.m_values = int_list(f, v); }},
      {"charsum.characters", [&](auto&, auto& v) { cfg.characters = v; }},
      {"charsum.corr_q", [&](auto& f, auto& v) { cfg.corr_q_values = int_list(f, v); }},
      {"charsum.corr_n2t", [&](auto& f, auto& v) { cfg.corr_n2t_values = int_list(f, v); }},
      {"charsum.weil_max", [&](auto& f, auto& v) { cfg.weil_max = to_int(f, v); }},
      {"delta.Q", [&](auto& f, auto& v) { cfg.delta_Q = to_real(f, v); }},
      {"delta.n_range",
       [&](auto& f, auto& v) {
         auto ab = split(v, ':');
         if (ab.size() != 2) bad(f, "expected lo:hi");
         cfg.n_min = to_int(f, ab[0]);
         cfg.n_max = to_int(f, ab[1]);
       }},
      {"delta.rearrangement_Q", [&](auto& f, auto& v) { cfg.rearrangement_Q = real_list(f, v); }},
      {"delta.pairs", [&](auto& f, auto& v) { cfg.rearrangement_pairs = pair_list(f, v); }},
      {"delta.stubs", [&](auto&, auto& v) { cfg.stubs = split(v, ','); }},
      {"delta.zeta_nodes", [&](auto& f, auto& v) { cfg.zeta_nodes = static_cast<int>(to_int(f, v)); }},
      {"cancellation.trace_primes", [&](auto& f, auto& v) { cfg.trace_primes = int_list(f, v); }},
      {"cancellation.trace_tuples", [&](auto& f, auto& v) { cfg.trace_tuples = static_cast<int>(to_int(f, v)); }},
      {"cancellation.range",
       [&](auto& f, auto& v) {
         auto ab = split(v, ':');
         if (ab.size() != 2) bad(f, "expected lo:hi");
         cfg.cancel_min = to_int(f, ab[0]);
         cfg.cancel_max = to_int(f, ab[1]);
       }},
      {"cancellation.tuples", [&](auto& f, auto& v) { cfg.cancel_tuples = static_cast<int>(to_int(f, v)); }},
      {"cancellation.seed", [&](auto& f, auto& v) { cfg.seed = static_cast<std::uint64_t>(to_int(f, v)); }},
      {"voronoi.c_max", [&](auto& f, auto& v) { cfg.c_max = to_int(f, v); }},
      {"voronoi.N", [&](auto& f, auto& v) { cfg.voronoi_N = real_list(f, v); }},
      {"voronoi.budget", [&](auto& f, auto& v) { cfg.coeff_budget = to_int(f, v); }},
      {"voronoi.tau_cache", [&](auto&, auto& v) { cfg.tau_cache = v; }},
      {"decay.N", [&](auto& f, auto& v) { cfg.toy_N = to_real(f, v); }},
      {"decay.M1", [&](auto& f, auto& v) { cfg.toy_m1 = to_real(f, v); }},
      {"decay.M2", [&](auto& f, auto& v) { cfg.toy_m2 = to_real(f, v); }},
      {"decay.C", [&](auto& f, auto& v) { cfg.toy_C = to_int(f, v); }},
      {"decay.A", [&](auto& f, auto& v) { cfg.localization_A = to_real(f, v); }},
  };
  for (auto& [section, body] : tree) {
    if (body.empty()) {
      if (!body.data().empty()) bad(section, "top-level keys are not allowed; use a [section]");
      continue;
    }
    for (auto& [key, val] : body) {
      const std::string field = section + "." + key;
      auto it = keys.find(field);
      if (it == keys.end()) bad(field, "unknown key");
      it->second(field, strip_inline_comment(val.data()));
    }
  }
  cfg.validate();
  return cfg;
}

// ===========================================================================
// suites
// ===========================================================================

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"charsum", "delta", "cancellation", "voronoi-gl2", "decay", "transforms", "all"};
  return names;
}

VerificationReport run_suite(const std::string& name, const GridConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.suite = name;
  rep.config = cfg.echo();
  const std::map<std::string, std::function<void(const GridConfig&, VerificationReport&)>> table{
      {"charsum", charsum_suite}, {"delta", delta_suite}, {"cancellation", cancellation_suite},
      {"voronoi-gl2", voronoi_suite}, {"decay", decay_suite}, {"transforms", transforms_suite}};
  if (name == "all") {
    for (auto& n : suite_names())
      if (n != "all") table.at(n)(cfg, rep);
  } else {
    auto it = table.find(name);
    if (it == table.end()) bad("suite", "unknown suite '" + name + "'");
    it->second(cfg, rep);
  }
  rep.tally();
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  bad("format", "must be json or csv, got '" + s + "'");
}

namespace {

nlohmann::ordered_json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report(const VerificationReport& r, ReportFormat f, bool timing) {
  if (f == ReportFormat::Csv) {
    std::ostringstream os;
    os << "suite,identity,inputs,kind,pass,lhs_re,lhs_im,rhs_re,rhs_im,value_re,value_im,diff,tolerance,error_estimate,note\n";
    for (auto& c : r.cases) {
      std::string in;
      for (auto& [k, v] : c.inputs) in += (in.empty() ? "" : ";") + k + "=" + v;
      os << csv_field(c.suite) << ',' << csv_field(c.identity) << ',' << csv_field(in) << ','
         << (c.monitored ? "monitored" : "hard") << ',' << (c.pass ? "true" : "false") << ',';
      if (c.has_sides)
        os << csv_num(c.lhs.real()) << ',' << csv_num(c.lhs.imag()) << ',' << csv_num(c.rhs.real()) << ',' << csv_num(c.rhs.imag())
           << ",,,";
      else
        os << ",,,," << csv_num(c.value.real()) << ',' << csv_num(c.value.imag()) << ',';
      os << csv_num(c.diff) << ',' << csv_num(c.tolerance) << ',' << csv_num(c.error_estimate) << ',' << csv_field(c.note) << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (auto& [k, v] : r.config) cfg[k] = v;
  j["summary"] = {{"cases", r.total},
                  {"passed", r.passed},
                  {"failed", r.failed},
                  {"monitored", r.monitored},
                  {"monitored_flagged", r.monitored_flagged},
                  {"skipped", [&] {
                     i64 s = 0;
                     for (auto& [_, n] : r.skipped) s += n;
                     return s;
                   }()},
                  {"exit_status", r.exit_status()}};
  if (timing) j["wall_seconds"] = r.wall_seconds;
  auto& sk = j["skipped"] = nlohmann::ordered_json::object();
  for (auto& [reason, n] : r.skipped) sk[reason] = n;
  j["errors"] = r.errors;
  auto& cases = j["cases"] = nlohmann::ordered_json::array();
  for (auto& c : r.cases) {
    nlohmann::ordered_json e;
    e["suite"] = c.suite;
    e["identity"] = c.identity;
    auto& in = e["inputs"] = nlohmann::ordered_json::object();
    for (auto& [k, v] : c.inputs) in[k] = v;
    if (c.has_sides) {
      e["lhs_re"] = jnum(c.lhs.real());
      e["lhs_im"] = jnum(c.lhs.imag());
      e["rhs_re"] = jnum(c.rhs.real());
      e["rhs_im"] = jnum(c.rhs.imag());
    } else {
      e["value_re"] = jnum(c.value.real());
      e["value_im"] = jnum(c.value.imag());
    }
    e["diff"] = jnum(c.diff);
    e["tolerance"] = jnum(c.tolerance);
    e["error_estimate"] = jnum(c.error_estimate);
    e["kind"] = c.monitored ? "monitored" : "hard";
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    cases.push_back(std::move(e));
  }
  return j.dump(1) + "\n";
}

void emit_report(const VerificationReport& r, ReportFormat f, const std::string& path, bool timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << render_report(r, f, timing);
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace sumcheck
