#include "sumcheck/expsums.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace sumcheck {

namespace {

void require_prime_table(const FieldFn& f) {
  if (!is_prime(static_cast<i64>(f.size())))
    throw Error(ErrorCode::NotPrime, "table length " + std::to_string(f.size()));
}

void require_unit(i64 a, i64 p, const char* name) {
  if (mod(a, p) == 0) throw Error(ErrorCode::NonUnitParameter, std::string(name) + " = 0 mod " + std::to_string(p));
}

}  // namespace

cplx ramanujan_sum_units(i64 q, i64 b) {
  ComplexAccumulator acc;
  for (i64 a : units(q)) acc += additive_char(a * mod(b, q), q);
  return acc.value();
}

i64 ramanujan_sum_divisor(i64 q, i64 b) {
  i64 g = std::gcd(q, mod(b, q) == 0 ? q : mod(b, q));
  i64 s = 0;
  for (i64 d : divisors(g)) s += d * moebius(q / d);
  return s;
}

i64 ramanujan_sum(i64 q, i64 b) {
  if (q < 1) throw Error(ErrorCode::OutOfRange, "q must be >= 1");
  i64 d = ramanujan_sum_divisor(q, b);
  cplx u = ramanujan_sum_units(q, b);
  if (std::abs(u - static_cast<double>(d)) > 1e-10 * (1.0 + std::abs(u)))
    throw Error(ErrorCode::InvariantViolation, "Ramanujan sum forms disagree");
  return d;
}

cplx kloosterman(i64 m, i64 n, i64 c) {
  if (c < 1) throw Error(ErrorCode::OutOfRange, "c must be >= 1");
  ComplexAccumulator acc;
  for (i64 x : units(c)) acc += additive_char(mulmod(m, x, c) + mulmod(n, mod_inverse(x, c), c), c);
  return acc.value();
}

KloostermanTable::KloostermanTable(i64 c) : c_(c), t_(static_cast<std::size_t>(c * c), 0.0) {
  RootTable e(c);
  auto us = units(c);
  std::vector<i64> inv;
  for (i64 x : us) inv.push_back(mod_inverse(x, c));
  for (i64 m = 0; m < c; ++m) {
    for (i64 n = m; n < c; ++n) {
      double s = 0, comp = 0;
      for (std::size_t i = 0; i < us.size(); ++i) {
        double x = e(m * us[i] + n * inv[i]).real();
        double t = s + x;
        comp += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
      }
      t_[static_cast<std::size_t>(m * c + n)] = s + comp;
      t_[static_cast<std::size_t>(n * c + m)] = s + comp;
    }
  }
}

std::shared_ptr<const KloostermanTable> kloosterman_table(i64 c) {
  static std::mutex mu;
  static std::map<i64, std::shared_ptr<const KloostermanTable>> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(c);
    if (it != cache.end()) return it->second;
  }
  auto t = std::make_shared<const KloostermanTable>(c);
  std::lock_guard<std::mutex> lk(mu);
  return cache.emplace(c, t).first->second;
}

cplx kl2_normalized(i64 n, i64 p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  return kloosterman(1, n, p) / std::sqrt(static_cast<double>(p));
}

FieldFn kl2_table(i64 p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  auto t = kloosterman_table(p);
  double s = std::sqrt(static_cast<double>(p));
  FieldFn out(static_cast<std::size_t>(p));
  for (i64 n = 0; n < p; ++n) out[static_cast<std::size_t>(n)] = (*t)(1, n) / s;
  return out;
}

cplx l_sum(i64 alpha, i64 beta, i64 v, i64 m1, const DirichletCharacter& chi1) {
  ComplexAccumulator acc;
  for (i64 b = 1; b < m1; ++b) {
    i64 x = mod(b + mulmod(beta, v, m1), m1);
    if (x == 0) continue;
    acc += std::conj(chi1(b)) * additive_char(mulmod(alpha, mod_inverse(x, m1), m1), m1);
  }
  return acc.value() / std::sqrt(static_cast<double>(m1));
}

FieldFn l_table(i64 alpha, i64 beta, i64 m1, const DirichletCharacter& chi1) {
  FieldFn out(static_cast<std::size_t>(m1));
  for (i64 v = 0; v < m1; ++v) out[static_cast<std::size_t>(v)] = l_sum(alpha, beta, v, m1, chi1);
  return out;
}

FieldFn mult_convolution(const FieldFn& K, const FieldFn& L) {
  require_prime_table(K);
  i64 p = static_cast<i64>(K.size());
  double s = 1.0 / std::sqrt(static_cast<double>(p));
  FieldFn out(K.size());
  for (i64 v = 0; v < p; ++v) {
    ComplexAccumulator acc;
    for (i64 u = 1; u < p; ++u) acc += K[static_cast<std::size_t>(u)] * L[static_cast<std::size_t>(mulmod(v, mod_inverse(u, p), p))];
    out[static_cast<std::size_t>(v)] = acc.value() * s;
  }
  return out;
}

FieldFn mult_convolution_reindexed(const FieldFn& K, const FieldFn& L) {
  require_prime_table(K);
  i64 p = static_cast<i64>(K.size());
  double s = 1.0 / std::sqrt(static_cast<double>(p));
  FieldFn out(K.size());
  for (i64 v = 0; v < p; ++v) {
    ComplexAccumulator acc;
    for (i64 u = 1; u < p; ++u) acc += K[static_cast<std::size_t>(mulmod(v, u, p))] * L[static_cast<std::size_t>(mod_inverse(u, p))];
    out[static_cast<std::size_t>(v)] = acc.value() * s;
  }
  return out;
}

FieldFn finite_fourier(const FieldFn& K) {
  require_prime_table(K);
  i64 p = static_cast<i64>(K.size());
  RootTable e(p);
  double s = 1.0 / std::sqrt(static_cast<double>(p));
  FieldFn out(K.size());
  for (i64 v = 0; v < p; ++v) {
    ComplexAccumulator acc;
    for (i64 a = 0; a < p; ++a) acc += K[static_cast<std::size_t>(a)] * e(a * v);
    out[static_cast<std::size_t>(v)] = acc.value() * s;
  }
  return out;
}

cplx l_hat_closed_form(i64 alpha, i64 beta, i64 v, const DirichletCharacter& chi1) {
  i64 p = chi1.modulus();
  require_unit(alpha, p, "alpha");
  require_unit(beta, p, "beta");
  if (!chi1.is_primitive()) throw Error(ErrorCode::NotPrimitive, chi1.label());
  i64 bi = mod_inverse(beta, p);
  i64 w = mulmod(bi, v, p);
  if (w == 0) return {0.0, 0.0};
  return std::sqrt(static_cast<double>(p)) / gauss_sum(chi1).value * chi1(w) * kl2_normalized(mulmod(w, alpha, p), p);
}

FieldFn z_transform(i64 alpha, i64 beta, i64 gamma, const DirichletCharacter& chi1) {
  i64 p = chi1.modulus();
  require_unit(alpha, p, "alpha");
  require_unit(beta, p, "beta");
  require_unit(gamma, p, "gamma");
  if (!chi1.is_primitive()) throw Error(ErrorCode::NotPrimitive, chi1.label());
  FieldFn kl = kl2_table(p);
  cplx tau = gauss_sum(chi1).value;
  i64 bg = mulmod(beta, gamma, p);
  FieldFn out(static_cast<std::size_t>(p));
  for (i64 v = 1; v < p; ++v) {
    ComplexAccumulator acc;
    for (i64 u = 1; u < p; ++u) {
      i64 uv = mulmod(u, v, p);
      acc += kl[static_cast<std::size_t>(mulmod(bg, u, p))] * chi1(uv) * kl[static_cast<std::size_t>(mulmod(alpha, uv, p))];
    }
    out[static_cast<std::size_t>(v)] = acc.value() / tau;
  }
  return out;
}

FieldFn z_transform(const TraceFunctionParams& p) { return z_transform(p.alpha, p.beta, p.gamma, p.chi1); }

FieldFn z_transform_primed(const TraceFunctionParams& p) {
  return z_transform(p.alpha_p, p.beta_p, p.gamma_p, p.chi1);
}

FieldFn z_chain(i64 alpha, i64 beta, i64 gamma, const DirichletCharacter& chi1) {
  i64 p = chi1.modulus();
  FieldFn kl = kl2_table(p);
  FieldFn K(static_cast<std::size_t>(p));
  for (i64 u = 0; u < p; ++u) K[static_cast<std::size_t>(u)] = kl[static_cast<std::size_t>(mulmod(gamma, u, p))];
  return finite_fourier(mult_convolution(K, l_table(alpha, beta, p, chi1)));
}

cplx shifted_correlation(const FieldFn& Z, const FieldFn& Zp, i64 eta) {
  i64 p = static_cast<i64>(Z.size());
  ComplexAccumulator acc;
  for (i64 v = 0; v < p; ++v) acc += Z[static_cast<std::size_t>(v)] * std::conj(Zp[static_cast<std::size_t>(mod(v - eta, p))]);
  return acc.value();
}

PlancherelResult plancherel_check(const TraceFunctionParams& tp) {
  i64 p = tp.chi1.modulus();
  FieldFn kl = kl2_table(p);
  auto conv = [&](i64 a, i64 b, i64 g) {
    FieldFn K(static_cast<std::size_t>(p));
    for (i64 u = 0; u < p; ++u) K[static_cast<std::size_t>(u)] = kl[static_cast<std::size_t>(mulmod(g, u, p))];
    return mult_convolution(K, l_table(a, b, p, tp.chi1));
  };
  FieldFn f = conv(tp.alpha, tp.beta, tp.gamma);
  FieldFn g = conv(tp.alpha_p, tp.beta_p, tp.gamma_p);
  ComplexAccumulator acc;
  for (i64 v = 0; v < p; ++v)
    acc += f[static_cast<std::size_t>(v)] * std::conj(g[static_cast<std::size_t>(v)]) * additive_char(tp.eta * v, p);
  return {acc.value(), shifted_correlation(z_transform(tp), z_transform_primed(tp), tp.eta)};
}

bool degenerate_tuple(const TraceFunctionParams& tp) {
  i64 p = tp.chi1.modulus();
  return mod(tp.alpha - tp.alpha_p, p) == 0 && mod(tp.beta * tp.gamma - tp.beta_p * tp.gamma_p, p) == 0;
}

CancellationStats cancellation_statistic(const TraceFunctionParams& tp, int bins) {
  i64 p = tp.chi1.modulus();
  FieldFn Z = z_transform(tp), Zp = z_transform_primed(tp);
  CancellationStats st;
  st.degenerate = degenerate_tuple(tp);
  st.histogram.assign(static_cast<std::size_t>(bins), 0);
  double root = std::sqrt(static_cast<double>(p)), sum = 0;
  for (i64 eta = 0; eta < p; ++eta) {
    cplx v = shifted_correlation(Z, Zp, eta);
    st.values.push_back(v);
    if (eta == 0) continue;
    double r = std::abs(v) / root;
    st.max_ratio = std::max(st.max_ratio, r);
    sum += r;
    int b = std::min(bins - 1, static_cast<int>(r));
    ++st.histogram[static_cast<std::size_t>(b)];
  }
  st.mean_ratio = sum / static_cast<double>(p - 1);
  return st;
}

}  // namespace sumcheck
