#include "sumcheck/charsum.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace sumcheck {

namespace {

void fail(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

// true iff every prime of a divides b
bool divides_power(i64 a, i64 b) {
  for (i64 p : prime_factors(a))
    if (b % p != 0) return false;
  return true;
}

void check_chars(const FactoredModulus& M, const DirichletCharacter& chi1, const DirichletCharacter& chi2) {
  if (chi1.modulus() != M.m1 || !chi1.is_primitive()) fail("chi1 must be primitive mod M1");
  if (chi2.modulus() != M.m2 || !chi2.is_primitive()) fail("chi2 must be primitive mod M2");
}

// sum over units a mod qM1 of E(a) S(-r conj(a), n2; c'), E as below, for every n2
std::vector<cplx> brute_row(const CharSumInstance& s, bool second) {
  s.validate();
  const i64 M1 = s.M.m1, M2 = s.M.m2, M = s.M.m, q = s.q;
  const i64 qm1 = q * M1, c = s.kl_modulus();
  const i64 qbar = mod_inverse(q, M1);
  const i64 m = s.m_eff();
  auto kt = kloosterman_table(c);
  DirichletCharacter chib = product_character(s.chi1, s.chi2).conj();
  RootTable eqM(q * M), eqM2(q * M2);
  std::vector<cplx> row(static_cast<std::size_t>(c));
  std::vector<ComplexAccumulator> acc(static_cast<std::size_t>(c));
  for (i64 a : units(qm1)) {
    const i64 abar = mod_inverse(a, qm1);
    ComplexAccumulator ea;
    for (i64 cc = 0; cc < M; ++cc) {
      cplx x = chib(cc);
      if (x == cplx{0.0, 0.0}) continue;
      const bool on_class = mod(cc + qbar * a * M2, M1) == 0;
      if (on_class != second) continue;
      const i64 X = a * M2 + cc * q;
      if (!second) {
        // inverse taken mod qM, the denominator of e(m X^{-1}/(qM))
        ea += x * eqM(mulmod(m, mod_inverse(X, q * M), q * M));
      } else {
        // X = 0 mod M1; the character is e(m (X/M1)^{-1} / (qM2))
        ea += x * eqM2(mulmod(m, mod_inverse(X / M1, q * M2), q * M2));
      }
    }
    const cplx E = ea.value();
    const i64 first = mod(-s.r * abar, c);
    for (i64 n2 = 0; n2 < c; ++n2) acc[static_cast<std::size_t>(n2)] += E * (*kt)(first, n2);
  }
  for (i64 n2 = 0; n2 < c; ++n2) row[static_cast<std::size_t>(n2)] = acc[static_cast<std::size_t>(n2)].value();
  return row;
}

// sum_{d|q} d mu(q/d) sum*_{u mod k, n1 u = conj(M2)^2 m (d)} e(n2 conj(M1 u)/k)
cplx b_sum_impl(i64 n1, i64 n2, i64 m, i64 q, i64 r, i64 M1, i64 M2) {
  const i64 k = q * r / n1;
  ComplexAccumulator acc;
  for (auto [d, mu] : moebius_divisor_scan(q)) {
    if (mu == 0) continue;
    for (i64 u : units(k)) {
      if (mod(m - mulmod(mulmod(M2 * M2, n1, d), u, d), d) != 0) continue;
      acc += static_cast<double>(d * mu) * additive_char(mulmod(n2, mod_inverse(mulmod(M1, u, k), k), k), k);
    }
  }
  return acc.value();
}

// count form: q2 conj(u') - q2' conj(u) = s n2t (mod K)
cplx c2_reindexed_impl(const CorrelationInstance& c, i64 m, i64 mp, i64 n2t) {
  const i64 q = c.q(), qp = c.qp(), k = q * c.r / c.n1, kp = qp * c.r / c.n1, K = c.k_part();
  const i64 M2 = c.M.m2;
  auto admissible = [&](i64 qq, i64 kk, i64 mm) {
    // (weight, conj(u) mod kk) pairs
    std::vector<std::pair<i64, i64>> out;
    for (auto [d, mu] : moebius_divisor_scan(qq)) {
      if (mu == 0) continue;
      const i64 t = d == 1 ? 0 : mulmod(mulmod(mod_inverse(M2, d), mod_inverse(M2, d), d), mod(c.sign_m * mm, d), d);
      for (i64 u : units(kk)) {
        if (mod(c.n1 * u - t, d) != 0) continue;
        out.emplace_back(d * mu, mod_inverse(u, kk));
      }
    }
    return out;
  };
  auto A = admissible(q, k, m), B = admissible(qp, kp, mp);
  const i64 target = mod(c.sign_n2 * n2t, K);
  i64 total = 0;
  for (auto& [wa, ua] : A)
    for (auto& [wb, ub] : B)
      if (mod(c.q2 * ub - c.q2p * ua - target, K) == 0) total += wa * wb;
  return {static_cast<double>(total), 0.0};
}

cplx c2_direct_impl(const CorrelationInstance& c, i64 m, i64 mp, i64 n2t) {
  const i64 K = c.k_part(), M1 = c.M.m1, M2 = c.M.m2;
  const i64 m1bar = mod_inverse(M1, K);
  ComplexAccumulator acc;
  for (i64 v = 0; v < K; ++v) {
    const i64 n2 = c.sign_n2 * v;
    cplx b = b_sum_impl(c.n1, n2, c.sign_m * m, c.q(), c.r, M1, M2);
    cplx bp = b_sum_impl(c.n1, n2, c.sign_m * mp, c.qp(), c.r, M1, M2);
    acc += b * std::conj(bp) * additive_char(mulmod(m1bar, mulmod(n2t, v, K), K), K);
  }
  return acc.value() / static_cast<double>(K);
}

}  // namespace

void CharSumInstance::validate() const {
  const i64 M1 = M.m1, M2 = M.m2;
  if (M1 == 0 || M2 == 0) fail("modulus not set");
  if (n1 < 1 || m < 1 || q < 1 || r < 1) fail("n1, m, q, r must be positive");
  if (std::gcd(q, M.m) != 1) fail("gcd(q, M) = " + std::to_string(std::gcd(q, M.m)));
  if (std::gcd(r, M.m) != 1) fail("gcd(r, M) = " + std::to_string(std::gcd(r, M.m)));
  if (r >= std::min(M1, M2)) fail("r >= min(M1, M2)");
  if ((q * r) % n1 != 0) fail("n1 does not divide q r");
  if (std::gcd(n1, M1) != 1) fail("gcd(n1, M1) = " + std::to_string(std::gcd(n1, M1)));
  if (std::gcd(m, M2) != 1) fail("gcd(m, M2) = " + std::to_string(std::gcd(m, M2)));
  if (std::abs(sign_n2) != 1 || std::abs(sign_m) != 1) fail("signs must be +1 or -1");
  check_chars(M, chi1, chi2);
}

std::vector<cplx> c1_bruteforce_row(const CharSumInstance& inst) { return brute_row(inst, false); }
std::vector<cplx> c2_bruteforce_row(const CharSumInstance& inst) { return brute_row(inst, true); }

cplx c1_bruteforce(const CharSumInstance& inst) {
  auto row = c1_bruteforce_row(inst);
  return row[static_cast<std::size_t>(mod(inst.n2_eff(), inst.kl_modulus()))];
}

cplx c2_bruteforce(const CharSumInstance& inst) {
  auto row = c2_bruteforce_row(inst);
  return row[static_cast<std::size_t>(mod(inst.n2_eff(), inst.kl_modulus()))];
}

cplx b_sum(i64 n1, i64 n2, i64 m, i64 q, i64 r, const FactoredModulus& M) {
  if (n1 < 1 || (q * r) % n1 != 0)
    throw Error(ErrorCode::DivisibilityViolation, "n1 = " + std::to_string(n1) + " does not divide q r");
  return b_sum_impl(n1, n2, m, q, r, M.m1, M.m2);
}

cplx d_sum(i64 n1, i64 n2, i64 m, i64 q, i64 r, const FactoredModulus& M, const DirichletCharacter& chi1) {
  const i64 M1 = M.m1, M2 = M.m2;
  for (auto [x, name] : {std::pair{q, "q"}, std::pair{r, "r"}, std::pair{n1, "n1"}})
    if (std::gcd(x, M1) != 1) throw Error(ErrorCode::NonUnit, std::string(name) + " not a unit mod M1");
  const i64 k = q * r / n1;
  const i64 alpha = mulmod(m, mod_inverse(mulmod(q, M2, M1), M1), M1);
  const i64 k2 = mulmod(k, k, M1);
  const FieldFn kl = kl2_table(M1);
  ComplexAccumulator acc;
  for (i64 a = 1; a < M1; ++a) {
    const i64 arg = mulmod(-r * mod(n2, M1), mod_inverse(mulmod(a, k2, M1), M1), M1);
    acc += l_sum(alpha, M2, a, M1, chi1) * kl[static_cast<std::size_t>(arg)];
  }
  return acc.value();
}

cplx c1_factored(const CharSumInstance& s) {
  s.validate();
  const i64 M1 = s.M.m1, M2 = s.M.m2, m = s.m_eff(), n2 = s.n2_eff();
  const cplx pre = s.chi1(s.q) * s.chi2(mulmod(mulmod(s.q, s.q, M2), mulmod(M1, mod_inverse(m, M2), M2), M2)) *
                   gauss_sum(s.chi2).value * static_cast<double>(M1);
  return pre * b_sum(s.n1, n2, m, s.q, s.r, s.M) * d_sum(s.n1, n2, m, s.q, s.r, s.M, s.chi1);
}

cplx c2_factored(const CharSumInstance& s) {
  s.validate();
  const i64 M1 = s.M.m1, M2 = s.M.m2, m = s.m_eff(), n2 = s.n2_eff();
  if (mod(n2, M1) == 0) return {0.0, 0.0};
  const i64 k = s.q * s.r / s.n1;
  // chi1(q conj(M2 r n2) k^2): the conj(n2) factor is required for agreement with the direct sum
  const i64 a1 = mulmod(mulmod(s.q, mod_inverse(mulmod(mulmod(M2, s.r, M1), n2, M1), M1), M1), mulmod(k, k, M1), M1);
  const i64 a2 = mulmod(mulmod(s.q, s.q, M2), mod_inverse(mulmod(m, M1, M2), M2), M2);
  const cplx t1 = gauss_sum(s.chi1).value;
  return s.chi1(a1) * s.chi2(a2) * t1 * t1 * gauss_sum(s.chi2).value * b_sum(s.n1, n2, M1 * M1 * m, s.q, s.r, s.M);
}

void CorrelationInstance::validate() const {
  if (q1 < 1 || q2 < 1 || q2p < 1) fail("q1, q2, q2' must be positive");
  if (mp < 1) fail("m' must be positive");
  if (!divides_power(q1, n1 * r)) fail("q1 does not divide (n1 r)^infinity");
  if (std::gcd(q2, n1 * r) != 1) fail("gcd(q2, n1 r) != 1");
  if (std::gcd(q2p, n1 * r) != 1) fail("gcd(q2', n1 r) != 1");
  if (std::gcd(q2, q1) != 1 || std::gcd(q2p, q1) != 1) fail("q2, q2' must be coprime to q1");
  if (std::gcd(m, M.m1) != 1 || std::gcd(mp, M.m1) != 1) fail("m, m' must be units mod M1");
  base(false).validate();
  base(true).validate();
}

CharSumInstance CorrelationInstance::base(bool primed) const {
  CharSumInstance s;
  s.n1 = n1;
  s.n2 = 1;
  s.m = primed ? mp : m;
  s.q = primed ? qp() : q();
  s.r = r;
  s.M = M;
  s.chi1 = chi1;
  s.chi2 = chi2;
  s.sign_n2 = 1;
  s.sign_m = sign_m;
  return s;
}

cplx correlation_C(const CorrelationInstance& c) {
  c.validate();
  auto a = c1_bruteforce_row(c.base(false));
  auto b = c1_bruteforce_row(c.base(true));
  const i64 P = c.period();
  const i64 ca = static_cast<i64>(a.size()), cb = static_cast<i64>(b.size());
  ComplexAccumulator acc;
  for (i64 v = 0; v < P; ++v) {
    const i64 n2 = c.sign_n2 * v;
    acc += a[static_cast<std::size_t>(mod(n2, ca))] * std::conj(b[static_cast<std::size_t>(mod(n2, cb))]) *
           additive_char(mulmod(c.n2t, v, P), P);
  }
  return acc.value() / static_cast<double>(P);
}

cplx correlation_prefactor(const CorrelationInstance& c) {
  const i64 M1 = c.M.m1, M2 = c.M.m2;
  auto pre = [&](i64 q, i64 m) {
    return c.chi1(q) * c.chi2(mulmod(mulmod(q, q, M2), mulmod(M1, mod_inverse(c.sign_m * m, M2), M2), M2)) *
           gauss_sum(c.chi2).value * static_cast<double>(M1);
  };
  return pre(c.q(), c.m) * std::conj(pre(c.qp(), c.mp));
}

cplx correlation_C1(const CorrelationInstance& c) {
  c.validate();
  const i64 M1 = c.M.m1, K = c.k_part();
  const i64 kbar = mod_inverse(K, M1);
  ComplexAccumulator acc;
  for (i64 v = 0; v < M1; ++v) {
    const i64 n2 = c.sign_n2 * v;
    cplx d = d_sum(c.n1, n2, c.sign_m * c.m, c.q(), c.r, c.M, c.chi1);
    cplx dp = d_sum(c.n1, n2, c.sign_m * c.mp, c.qp(), c.r, c.M, c.chi1);
    acc += d * std::conj(dp) * additive_char(mulmod(kbar, mulmod(c.n2t, v, M1), M1), M1);
  }
  return acc.value() / static_cast<double>(M1);
}

TraceFunctionParams correlation_trace_params(const CorrelationInstance& c) {
  const i64 M1 = c.M.m1, M2 = c.M.m2;
  auto alpha = [&](i64 q, i64 m) { return mulmod(c.sign_m * m, mod_inverse(mulmod(q, M2, M1), M1), M1); };
  auto gamma = [&](i64 q) {
    const i64 k = q * c.r / c.n1;
    return mulmod(-c.sign_n2 * c.r, mod_inverse(mulmod(k, k, M1), M1), M1);
  };
  TraceFunctionParams t;
  t.chi1 = c.chi1;
  t.alpha = alpha(c.q(), c.m);
  t.alpha_p = alpha(c.qp(), c.mp);
  t.beta = t.beta_p = mod(M2, M1);
  t.gamma = gamma(c.q());
  t.gamma_p = gamma(c.qp());
  t.eta = mulmod(c.n2t, mod_inverse(c.k_part(), M1), M1);
  for (i64 x : {t.alpha, t.alpha_p, t.beta, t.gamma, t.gamma_p})
    if (x == 0) throw Error(ErrorCode::NonUnit, "trace-function parameter vanishes mod M1");
  return t;
}

bool correlation_degenerate(const CorrelationInstance& c) { return degenerate_tuple(correlation_trace_params(c)); }

cplx correlation_C1_trace(const CorrelationInstance& c) {
  c.validate();
  const TraceFunctionParams t = correlation_trace_params(c);
  const i64 p = c.M.m1;
  const FieldFn kl = kl2_table(p);
  auto conv = [&](i64 a, i64 g) {
    FieldFn K(static_cast<std::size_t>(p));
    for (i64 u = 0; u < p; ++u) K[static_cast<std::size_t>(u)] = kl[static_cast<std::size_t>(mulmod(g, u, p))];
    return mult_convolution(K, l_table(a, t.beta, p, c.chi1));
  };
  FieldFn f = conv(t.alpha, t.gamma), g = conv(t.alpha_p, t.gamma_p);
  ComplexAccumulator acc;
  for (i64 v = 0; v < p; ++v)
    acc += f[static_cast<std::size_t>(v)] * std::conj(g[static_cast<std::size_t>(v)]) * additive_char(t.eta * v, p);
  return acc.value();
}

cplx correlation_C1_plancherel(const CorrelationInstance& c) {
  c.validate();
  const TraceFunctionParams t = correlation_trace_params(c);
  return shifted_correlation(z_transform(t), z_transform_primed(t), t.eta);
}

cplx correlation_C2(const CorrelationInstance& c) {
  c.validate();
  return c2_direct_impl(c, c.m, c.mp, c.n2t);
}

cplx correlation_C2_reindexed(const CorrelationInstance& c) {
  c.validate();
  return c2_reindexed_impl(c, c.m, c.mp, c.n2t);
}

cplx correlation_C2_star(const CorrelationInstance& c) {
  c.validate();
  const i64 s = c.M.m1 * c.M.m1;
  return c2_direct_impl(c, s * c.m, s * c.mp, c.M.m1 * c.n2t);
}

cplx correlation_C2_star_reindexed(const CorrelationInstance& c) {
  c.validate();
  const i64 s = c.M.m1 * c.M.m1;
  return c2_reindexed_impl(c, s * c.m, s * c.mp, c.M.m1 * c.n2t);
}

cplx correlation_D(const CorrelationInstance& c) {
  c.validate();
  auto a = c2_bruteforce_row(c.base(false));
  auto b = c2_bruteforce_row(c.base(true));
  const i64 K = c.k_part(), P = c.period();
  const i64 ca = static_cast<i64>(a.size()), cb = static_cast<i64>(b.size());
  ComplexAccumulator acc;
  for (i64 v = 0; v < P; ++v) {
    const i64 n2 = c.sign_n2 * v;
    acc += a[static_cast<std::size_t>(mod(n2, ca))] * std::conj(b[static_cast<std::size_t>(mod(n2, cb))]) *
           additive_char(mulmod(c.n2t, v, K), K);
  }
  return acc.value() / static_cast<double>(P);
}

double c2_zero_bound(const CorrelationInstance& c) {
  const i64 q = c.q();
  i64 s = 0;
  for (i64 d : divisors(q))
    for (i64 dp : divisors(q)) {
      const i64 g = std::gcd(d, dp);
      if ((c.m - c.mp) % g == 0) s += g;
    }
  return static_cast<double>(q * c.r * s);
}

}  // namespace sumcheck
