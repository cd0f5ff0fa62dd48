#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "sumcheck/arith.hpp"
#include "sumcheck/weights.hpp"

namespace sumcheck {

struct DeltaParams {
  double Q = 40;
  SmoothWeight bump = default_bump();
  // raw delta(0); 0 means "compute on first use"
  double normalization = 0;

  static SmoothWeight default_bump();
  void validate() const;
};

// The DFI weight omega(q, zeta) for a fixed Q, built from the Heath-Brown
// function h(x, y) = sum_j (xj)^{-1} (w(xj) - w(|y|/(xj))). Per-q tables are
// built lazily under a lock and never modified afterwards.
class DfiWeight {
 public:
  explicit DfiWeight(DeltaParams p);

  double Q() const { return p_.Q; }
  const DeltaParams& params() const { return p_; }

  double h(double x, double y) const;
  double omega(i64 q, double zeta) const;
  double omega_derivative(i64 q, double zeta) const;
  double operator()(i64 q, double zeta) const { return omega(q, zeta); }
  // |omega(q, zeta)| < 1e-12 max(1, |omega(q, 0)|) for |zeta| beyond this
  double support(i64 q) const;

  // (1/Q) sum_q (1/q) R_q(n) int omega(q, z) e(n z/(qQ)) dz
  double delta_raw(i64 n) const;
  std::vector<double> delta_raw(const std::vector<i64>& ns) const;
  double normalization() const;
  double delta(i64 n) const { return delta_raw(n) / normalization(); }
  std::vector<double> delta(const std::vector<i64>& ns) const;

 private:
  struct Level {
    int panels = 0;
    double half_width = 0;
    std::vector<double> g;  // weight * H(s) at panel nodes, panel-major
  };
  struct Table {
    double x = 0;
    std::vector<std::unique_ptr<Level>> levels;
    double support = -1;
    std::unordered_map<double, double> memo;
  };

  Table& table(i64 q) const;
  const Level& level_for(Table& t, double zeta) const;
  double H(double x, double s) const;
  double omega_impl(Table& t, double zeta, bool derivative) const;
  double integral(i64 q, i64 n, std::vector<double>* partition_hint) const;

  DeltaParams p_;
  std::vector<double> gl_x_, gl_w_;
  mutable std::mutex mu_;
  mutable std::map<i64, std::unique_ptr<Table>> tables_;
  mutable double norm_ = 0;
};

double dfi_weight(i64 q, double zeta, const DfiWeight& w);
double delta_eval(i64 n, const DfiWeight& w);

bool unit_bijection_check(i64 q, i64 m1);
std::pair<cplx, int> congruence_detector_check(i64 n, i64 m1);

using OmegaStub = std::function<double(i64 q, double zeta)>;

struct ZetaGrid {
  std::vector<double> nodes, weights;
  static ZetaGrid gauss(int n, double lo, double hi);
};

struct RearrangementResult {
  cplx lhs, rhs;
};

// lhs: (1/(Q M1)) sum_{q <= Q} (1/q) sum_{b mod M1} sum*_{a mod q} e(n(a + bq)/(q M1)) Omega(q, n/(q Q M1))
// rhs: the same after splitting q by powers of M1 and M2, with Omega(q, t) = sum_k w_k omega(q, z_k) e(t z_k)
RearrangementResult rearrangement_check(i64 n, double Q, const FactoredModulus& M, const OmegaStub& omega,
                                                const ZetaGrid& grid);

struct Rational {
  i64 num = 0, den = 1;
  Rational& operator+=(const Rational& o);
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct LedgerKey {
  i64 modulus = 1;     // additive character e(a n / modulus)
  i64 a = 0;           // unit mod modulus
  i64 weight_q = 1;    // first argument of omega
  i64 phase_div = 1;   // zeta phase is e(n zeta / (phase_div Q))
  auto operator<=>(const LedgerKey&) const = default;
};

// coefficients with the common 1/Q removed
class TermLedger {
 public:
  void add(const LedgerKey& k, Rational c);
  const std::map<LedgerKey, Rational>& entries() const { return entries_; }
  bool operator==(const TermLedger& o) const { return entries_ == o.entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<LedgerKey, Rational> entries_;
};

TermLedger ledger_lhs(double Q, const FactoredModulus& M);
TermLedger ledger_rhs(double Q, const FactoredModulus& M);

}  // namespace sumcheck
