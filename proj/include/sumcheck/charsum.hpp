#pragma once

#include <vector>

#include "sumcheck/arith.hpp"
#include "sumcheck/characters.hpp"
#include "sumcheck/expsums.hpp"

namespace sumcheck {

struct CharSumInstance {
  i64 n1 = 1, n2 = 1, m = 1, q = 1, r = 1;
  FactoredModulus M;
  DirichletCharacter chi1, chi2;
  int sign_n2 = 1, sign_m = 1;

  // throws InvariantViolation naming the failed condition
  void validate() const;
  i64 n2_eff() const { return sign_n2 * n2; }
  i64 m_eff() const { return sign_m * m; }
  // modulus of the inner Kloosterman sum, q M1 r / n1
  i64 kl_modulus() const { return q * M.m1 * r / n1; }
};

cplx c1_bruteforce(const CharSumInstance& inst);
cplx c1_factored(const CharSumInstance& inst);
cplx c2_bruteforce(const CharSumInstance& inst);
cplx c2_factored(const CharSumInstance& inst);

// brute-force values for every n2 in [0, kl_modulus()), signs applied to m only
std::vector<cplx> c1_bruteforce_row(const CharSumInstance& inst);
std::vector<cplx> c2_bruteforce_row(const CharSumInstance& inst);

cplx b_sum(i64 n1, i64 n2, i64 m, i64 q, i64 r, const FactoredModulus& M);
cplx d_sum(i64 n1, i64 n2, i64 m, i64 q, i64 r, const FactoredModulus& M, const DirichletCharacter& chi1);

struct CorrelationInstance {
  i64 n1 = 1, q1 = 1, q2 = 1, q2p = 1, r = 1, m = 1, mp = 1;
  FactoredModulus M;
  DirichletCharacter chi1, chi2;
  int sign_n2 = 1, sign_m = 1;
  i64 n2t = 0;

  void validate() const;
  i64 q() const { return q1 * q2; }
  i64 qp() const { return q1 * q2p; }
  // K = q1 q2 q2' r / n1; the full period is M1 K
  i64 k_part() const { return q1 * q2 * q2p * r / n1; }
  i64 period() const { return M.m1 * k_part(); }
  CharSumInstance base(bool primed) const;
};

cplx correlation_C(const CorrelationInstance& c);
// product of the two c1 prefactors chi1(q)chi2(q^2 M1 conj m) tau(chi2) M1, one conjugated
cplx correlation_prefactor(const CorrelationInstance& c);

cplx correlation_C1(const CorrelationInstance& c);        // sum of d_sum products
cplx correlation_C1_trace(const CorrelationInstance& c);  // through K*L
cplx correlation_C1_plancherel(const CorrelationInstance& c);
TraceFunctionParams correlation_trace_params(const CorrelationInstance& c);
bool correlation_degenerate(const CorrelationInstance& c);

cplx correlation_C2(const CorrelationInstance& c);            // direct v-sum
cplx correlation_C2_reindexed(const CorrelationInstance& c);  // double unit congruence count
cplx correlation_C2_star(const CorrelationInstance& c);
cplx correlation_C2_star_reindexed(const CorrelationInstance& c);
// (1/(M1 K)) sum over v mod M1 K of brute-force c2 products, phase e(n2t v / K)
cplx correlation_D(const CorrelationInstance& c);

// q1 q2 r sum_{d, d' | q1 q2, (d,d') | m - m'} (d, d')
double c2_zero_bound(const CorrelationInstance& c);

}  // namespace sumcheck
