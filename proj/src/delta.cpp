#include "sumcheck/delta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sumcheck/expsums.hpp"
#include "sumcheck/quadrature.hpp"

namespace sumcheck {

namespace {

constexpr int kNodes = 16;
const SmoothWeight& psi_cut() {
  static const SmoothWeight w = SmoothWeight::symmetric(0.25, 0.5);
  return w;
}

i64 floor_q(double Q) { return static_cast<i64>(std::floor(Q + 1e-12)); }

}  // namespace

SmoothWeight DeltaParams::default_bump() { return SmoothWeight::bump(0.5, 1.0).normalized(); }

void DeltaParams::validate() const {
  if (!(Q >= 2)) throw Error(ErrorCode::OutOfRange, "Q must be >= 2");
  if (!(bump.lo() > 0)) throw Error(ErrorCode::OutOfRange, "bump must live in a positive interval");
  if (!std::isfinite(normalization)) throw Error(ErrorCode::OutOfRange, "normalization must be finite");
}

DfiWeight::DfiWeight(DeltaParams p) : p_(std::move(p)) {
  p_.validate();
  gauss_legendre(kNodes, gl_x_, gl_w_);
  if (p_.normalization != 0) norm_ = p_.normalization;
}

double DfiWeight::h(double x, double y) const {
  const SmoothWeight& w = p_.bump;
  const double ay = std::abs(y);
  double s = 0;
  // w(xj) != 0 only for xj in (lo, hi)
  for (i64 j = std::max<i64>(1, static_cast<i64>(std::floor(w.lo() / x))); j * x < w.hi(); ++j) s += w(x * j) / (x * j);
  if (ay > 0) {
    // w(|y|/(xj)) != 0 only for xj in (|y|/hi, |y|/lo)
    for (i64 j = std::max<i64>(1, static_cast<i64>(std::floor(ay / (w.hi() * x)))); j * x * w.lo() < ay; ++j)
      s -= w(ay / (x * j)) / (x * j);
  }
  return s;
}

double DfiWeight::H(double x, double s) const {
  const double c = psi_cut()(s);
  return c == 0 ? 0.0 : c * h(x, s);
}

DfiWeight::Table& DfiWeight::table(i64 q) const {
  // caller holds mu_
  auto it = tables_.find(q);
  if (it != tables_.end()) return *it->second;
  auto t = std::make_unique<Table>();
  t->x = static_cast<double>(q) / p_.Q;
  return *tables_.emplace(q, std::move(t)).first->second;
}

const DfiWeight::Level& DfiWeight::level_for(Table& t, double zeta) const {
  // caller holds mu_; at most half an oscillation per panel
  int base = 64;
  while (base < 16.0 / t.x) base *= 2;
  const double need = std::abs(zeta) / t.x;
  std::size_t L = 0;
  while (base * std::pow(2.0, static_cast<double>(L)) < need) ++L;
  while (t.levels.size() <= L) {
    auto lv = std::make_unique<Level>();
    lv->panels = base << t.levels.size();
    lv->half_width = 0.25 / lv->panels;
    lv->g.resize(static_cast<std::size_t>(lv->panels) * kNodes);
    for (int p = 0; p < lv->panels; ++p) {
      const double c = (2 * p + 1) * lv->half_width;
      for (int k = 0; k < kNodes; ++k)
        lv->g[static_cast<std::size_t>(p * kNodes + k)] = gl_w_[k] * lv->half_width * H(t.x, c + lv->half_width * gl_x_[k]);
    }
    t.levels.push_back(std::move(lv));
  }
  return *t.levels[L];
}

double DfiWeight::omega_impl(Table& t, double zeta, bool derivative) const {
  const Level* lv;
  {
    std::lock_guard<std::mutex> lk(mu_);
    lv = &level_for(t, zeta);
  }
  const double theta = kTwoPi * zeta / t.x, hw = lv->half_width;
  double ck[kNodes], sk[kNodes];
  for (int k = 0; k < kNodes; ++k) {
    ck[k] = std::cos(theta * hw * gl_x_[k]);
    sk[k] = std::sin(theta * hw * gl_x_[k]);
  }
  double total = 0;
  for (int p = 0; p < lv->panels; ++p) {
    const double c = (2 * p + 1) * hw;
    const double* g = &lv->g[static_cast<std::size_t>(p * kNodes)];
    const double cc = std::cos(theta * c), sc = std::sin(theta * c);
    if (!derivative) {
      double A = 0, B = 0;
      for (int k = 0; k < kNodes; ++k) {
        A += g[k] * ck[k];
        B += g[k] * sk[k];
      }
      total += cc * A - sc * B;
    } else {
      // d/dzeta cos(theta s) = -(2 pi s / x) sin(theta s)
      double A = 0, B = 0;
      for (int k = 0; k < kNodes; ++k) {
        const double s = c + hw * gl_x_[k];
        A += g[k] * s * ck[k];
        B += g[k] * s * sk[k];
      }
      total -= (kTwoPi / t.x) * (sc * A + cc * B);
    }
  }
  return 2.0 * total;
}

double DfiWeight::omega(i64 q, double zeta) const {
  if (q < 1 || static_cast<double>(q) > p_.Q) throw Error(ErrorCode::OutOfRange, "q = " + std::to_string(q) + " outside [1, Q]");
  Table* t;
  {
    std::lock_guard<std::mutex> lk(mu_);
    t = &table(q);
    auto it = t->memo.find(zeta);
    if (it != t->memo.end()) return it->second;
  }
  const double v = omega_impl(*t, zeta, false);
  std::lock_guard<std::mutex> lk(mu_);
  t->memo.emplace(zeta, v);
  return v;
}

double DfiWeight::omega_derivative(i64 q, double zeta) const {
  if (q < 1 || static_cast<double>(q) > p_.Q) throw Error(ErrorCode::OutOfRange, "q = " + std::to_string(q) + " outside [1, Q]");
  Table* t;
  {
    std::lock_guard<std::mutex> lk(mu_);
    t = &table(q);
  }
  return omega_impl(*t, zeta, true);
}

double DfiWeight::support(i64 q) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    Table& t = table(q);
    if (t.support >= 0) return t.support;
  }
  const double scale = std::max(1.0, std::abs(omega(q, 0.0)));
  double Z = 4;
  for (;; Z *= 2) {
    if (Z > 1e4) throw Error(ErrorCode::QuadratureFailure, "omega does not decay for q = " + std::to_string(q));
    double m = 0;
    for (int i = 0; i <= 64; ++i) m = std::max(m, std::abs(omega(q, Z * (1.0 + i / 64.0))));
    if (m < 1e-12 * scale) break;
  }
  std::lock_guard<std::mutex> lk(mu_);
  table(q).support = Z;
  return Z;
}

double DfiWeight::integral(i64 q, i64 n, std::vector<double>*) const {
  const double Z = support(q);
  const double f = kTwoPi * static_cast<double>(n) / (static_cast<double>(q) * p_.Q);
  QuadOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  o.initial_intervals = static_cast<int>(std::max(16.0, Z));
  o.max_intervals = 200000;
  auto r = integrate([&](double z) { return omega(q, z) * std::cos(f * z); }, 0.0, Z, o);
  return 2.0 * r.value;
}

std::vector<double> DfiWeight::delta_raw(const std::vector<i64>& ns) const {
  for (i64 n : ns)
    if (4.0 * std::abs(static_cast<double>(n)) > p_.Q * p_.Q)
      throw Error(ErrorCode::OutOfRange, "|n| must be at most Q^2/4");
  std::vector<ComplexAccumulator> acc(ns.size());
  for (i64 q = 1; q <= floor_q(p_.Q); ++q) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const i64 R = ramanujan_sum_divisor(q, ns[i]);
      if (R == 0) continue;
      acc[i] += static_cast<double>(R) / static_cast<double>(q) * integral(q, std::abs(ns[i]), nullptr);
    }
  }
  std::vector<double> out;
  for (auto& a : acc) out.push_back(a.value().real() / p_.Q);
  return out;
}

double DfiWeight::delta_raw(i64 n) const { return delta_raw(std::vector<i64>{n})[0]; }

double DfiWeight::normalization() const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (norm_ != 0) return norm_;
  }
  const double v = delta_raw(0);
  std::lock_guard<std::mutex> lk(mu_);
  if (norm_ == 0) norm_ = v;
  return norm_;
}

std::vector<double> DfiWeight::delta(const std::vector<i64>& ns) const {
  auto v = delta_raw(ns);
  const double c = normalization();
  for (auto& x : v) x /= c;
  return v;
}

double dfi_weight(i64 q, double zeta, const DfiWeight& w) { return w.omega(q, zeta); }
double delta_eval(i64 n, const DfiWeight& w) { return w.delta(n); }

bool unit_bijection_check(i64 q, i64 m1) {
  if (std::gcd(q, m1) != 1) throw Error(ErrorCode::NonCoprime, "gcd(q, M1) = " + std::to_string(std::gcd(q, m1)));
  const i64 mod_all = q * m1;
  std::set<i64> got;
  for (i64 a : units(q))
    for (i64 b : units(m1)) got.insert(mod(a * m1 + b * q, mod_all));
  auto want = units(mod_all);
  return got == std::set<i64>(want.begin(), want.end()) && got.size() == static_cast<std::size_t>(euler_phi(q) * euler_phi(m1));
}

std::pair<cplx, int> congruence_detector_check(i64 n, i64 m1) {
  if (m1 < 2) throw Error(ErrorCode::OutOfRange, "M1 must be >= 2");
  ComplexAccumulator acc;
  for (i64 b = 0; b < m1; ++b) acc += additive_char(n * b, m1);
  return {acc.value() / static_cast<double>(m1), mod(n, m1) == 0 ? 1 : 0};
}

ZetaGrid ZetaGrid::gauss(int n, double lo, double hi) {
  ZetaGrid g;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * x[static_cast<std::size_t>(i)]);
    g.weights.push_back(0.5 * (hi - lo) * w[static_cast<std::size_t>(i)]);
  }
  return g;
}

namespace {

cplx omega_transform(const OmegaStub& omega, const ZetaGrid& g, i64 q, double t) {
  ComplexAccumulator acc;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const double z = g.nodes[k];
    acc += g.weights[k] * omega(q, z) * std::polar(1.0, kTwoPi * t * z);
  }
  return acc.value();
}

cplx unit_sum(i64 n, i64 modulus) {
  ComplexAccumulator acc;
  for (i64 a : units(modulus)) acc += additive_char(mulmod(a, n, modulus), modulus);
  return acc.value();
}

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// visits (modulus, weight_q, denominator) of every right-hand term
template <class F>
void rhs_terms(double Q, const FactoredModulus& M, F visit) {
  const i64 Qf = floor_q(Q), M1 = M.m1, M2 = M.m2;
  for (int l = 0; ipow(M2, l) <= Qf; ++l) {
    const i64 p2 = ipow(M2, l);
    for (i64 q = 1; q * p2 <= Qf; ++q) {
      if (std::gcd(q, M.m) != 1) continue;
      for (int s = 0; s <= 1; ++s) visit(q * (s == 0 ? M1 : 1) * p2, q * p2, q * M1 * p2);
    }
    for (int t = 1; ipow(M1, t) * p2 <= Qf; ++t) {
      const i64 p1 = ipow(M1, t);
      for (i64 q = 1; q * p1 * p2 <= Qf; ++q) {
        if (std::gcd(q, M.m) != 1) continue;
        visit(q * p1 * M1 * p2, q * p1 * p2, q * p1 * M1 * p2);
      }
    }
  }
}

}  // namespace

RearrangementResult rearrangement_check(i64 n, double Q, const FactoredModulus& M, const OmegaStub& omega,
                                                const ZetaGrid& grid) {
  if (!(Q >= 1)) throw Error(ErrorCode::OutOfRange, "Q must be >= 1");
  const i64 Qf = floor_q(Q), M1 = M.m1;
  ComplexAccumulator lhs;
  for (i64 q = 1; q <= Qf; ++q) {
    ComplexAccumulator s;
    for (i64 b = 0; b < M1; ++b)
      for (i64 a : units(q)) s += additive_char(mulmod(n, a + b * q, q * M1), q * M1);
    const double t = static_cast<double>(n) / (static_cast<double>(q) * Q * static_cast<double>(M1));
    lhs += s.value() / static_cast<double>(q) * omega_transform(omega, grid, q, t);
  }
  ComplexAccumulator rhs;
  rhs_terms(Q, M, [&](i64 modulus, i64 wq, i64 den) {
    const double t = static_cast<double>(n) / (static_cast<double>(den) * Q);
    rhs += unit_sum(n, modulus) / static_cast<double>(den) * omega_transform(omega, grid, wq, t);
  });
  return {lhs.value() / (Q * static_cast<double>(M1)), rhs.value() / Q};
}

Rational& Rational::operator+=(const Rational& o) {
  const i64 d = std::lcm(den, o.den);
  num = num * (d / den) + o.num * (d / o.den);
  den = d;
  const i64 g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return *this;
}

void TermLedger::add(const LedgerKey& k, Rational c) {
  auto it = entries_.find(k);
  if (it == entries_.end()) {
    Rational z;
    z += c;
    entries_.emplace(k, z);
    return;
  }
  it->second += c;
  if (it->second.num == 0) entries_.erase(it);
}

TermLedger ledger_lhs(double Q, const FactoredModulus& M) {
  TermLedger L;
  const i64 Qf = floor_q(Q), M1 = M.m1;
  for (i64 q = 1; q <= Qf; ++q)
    for (i64 b = 0; b < M1; ++b)
      for (i64 a : units(q)) {
        const i64 X = mod(a + b * q, q * M1);
        const i64 g = std::gcd(X, q * M1);
        const i64 modulus = q * M1 / g;
        L.add({modulus, mod(X / g, modulus), q, q * M1}, {1, q * M1});
      }
  return L;
}

TermLedger ledger_rhs(double Q, const FactoredModulus& M) {
  TermLedger L;
  rhs_terms(Q, M, [&](i64 modulus, i64 wq, i64 den) {
    for (i64 a : units(modulus)) L.add({modulus, a, wq, den}, {1, den});
  });
  return L;
}

}  // namespace sumcheck
