#pragma once

#include <memory>
#include <vector>

#include "sumcheck/arith.hpp"
#include "sumcheck/characters.hpp"

namespace sumcheck {

// dense value table on F_p, index = residue
using FieldFn = std::vector<cplx>;

i64 ramanujan_sum(i64 q, i64 b);
cplx ramanujan_sum_units(i64 q, i64 b);
i64 ramanujan_sum_divisor(i64 q, i64 b);

cplx kloosterman(i64 m, i64 n, i64 c);

// S(m, n; c) for all m, n mod c; values are real
class KloostermanTable {
 public:
  explicit KloostermanTable(i64 c);
  i64 modulus() const { return c_; }
  double operator()(i64 m, i64 n) const {
    return t_[static_cast<std::size_t>(mod(m, c_) * c_ + mod(n, c_))];
  }

 private:
  i64 c_;
  std::vector<double> t_;
};

// process-wide memo; safe to call from several threads
std::shared_ptr<const KloostermanTable> kloosterman_table(i64 c);

cplx kl2_normalized(i64 n, i64 p);
FieldFn kl2_table(i64 p);

cplx l_sum(i64 alpha, i64 beta, i64 v, i64 m1, const DirichletCharacter& chi1);
FieldFn l_table(i64 alpha, i64 beta, i64 m1, const DirichletCharacter& chi1);

// p^{-1/2} sum_{u != 0} K(u) L(v/u)
FieldFn mult_convolution(const FieldFn& K, const FieldFn& L);
// p^{-1/2} sum_{u != 0} K(vu) L(1/u); equal to the above for v != 0
FieldFn mult_convolution_reindexed(const FieldFn& K, const FieldFn& L);

// p^{-1/2} sum_a K(a) e(av/p)
FieldFn finite_fourier(const FieldFn& K);

cplx l_hat_closed_form(i64 alpha, i64 beta, i64 v, const DirichletCharacter& chi1);

struct TraceFunctionParams {
  i64 alpha = 1, beta = 1, gamma = 1;
  i64 alpha_p = 1, beta_p = 1, gamma_p = 1;
  i64 eta = 0;
  DirichletCharacter chi1;
};

// closed form for the transform of Kl2(gamma .) * L_{alpha,beta}
FieldFn z_transform(i64 alpha, i64 beta, i64 gamma, const DirichletCharacter& chi1);
FieldFn z_transform(const TraceFunctionParams& p);
FieldFn z_transform_primed(const TraceFunctionParams& p);
// the same function through convolution and finite_fourier
FieldFn z_chain(i64 alpha, i64 beta, i64 gamma, const DirichletCharacter& chi1);

// sum_v Z(v) conj(Z'(v - eta))
cplx shifted_correlation(const FieldFn& Z, const FieldFn& Zp, i64 eta);

struct PlancherelResult {
  cplx lhs;  // sum_v (K*L)(v) conj((K'*L')(v)) e(eta v / p)
  cplx rhs;  // sum_v Z(v) conj(Z'(v - eta))
};
PlancherelResult plancherel_check(const TraceFunctionParams& p);

struct CancellationStats {
  double max_ratio = 0;
  double mean_ratio = 0;
  std::vector<int> histogram;  // bins of width 1 in ratio, last bin open
  std::vector<cplx> values;    // index eta, eta = 0 included
  bool degenerate = false;
};

// alpha = alpha' and beta*gamma = beta'*gamma' makes Z = Z'
bool degenerate_tuple(const TraceFunctionParams& p);

CancellationStats cancellation_statistic(const TraceFunctionParams& p, int bins = 10);

}  // namespace sumcheck
