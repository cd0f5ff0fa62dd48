#include "sumcheck/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sumcheck/quadrature.hpp"
#include "sumcheck/special.hpp"

namespace sumcheck {

SpectralParams SpectralParams::holomorphic(int k) {
  SpectralParams s;
  s.kind = Kind::Holomorphic;
  s.k = k;
  s.validate();
  return s;
}

SpectralParams SpectralParams::maass(double mu, int eps) {
  SpectralParams s;
  s.kind = Kind::Maass;
  s.mu = mu;
  s.eps = eps;
  s.validate();
  return s;
}

SpectralParams SpectralParams::gl3(cplx m1, cplx m2, cplx m3) {
  SpectralParams s;
  s.kind = Kind::GL3;
  s.mus = {m1, m2, m3};
  s.validate();
  return s;
}

void SpectralParams::validate() const {
  switch (kind) {
    case Kind::Holomorphic:
      if (k < 12 || k % 2) throw Error(ErrorCode::OutOfRange, "weight must be even and >= 12");
      break;
    case Kind::Maass:
      if (eps != 1 && eps != -1) throw Error(ErrorCode::OutOfRange, "reflection eigenvalue must be +-1");
      if (!(std::abs(mu) > 1e-8)) throw Error(ErrorCode::OutOfRange, "Maass parameter must be nonzero");
      break;
    case Kind::GL3:
      if (std::abs(mus[0] + mus[1] + mus[2]) > 1e-12)
        throw Error(ErrorCode::OutOfRange, "Langlands parameters must sum to zero");
      break;
  }
}

std::string SpectralParams::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Holomorphic: os << "holomorphic(k=" << k << ")"; break;
    case Kind::Maass: os << "maass(mu=" << mu << ",eps=" << eps << ")"; break;
    case Kind::GL3: os << "gl3(" << mus[0] << "," << mus[1] << "," << mus[2] << ")"; break;
  }
  return os.str();
}

OscParams OscParams::toy() {
  OscParams p;
  p.Q = std::sqrt(p.N / p.m1);
  return p;
}

void OscParams::validate() const {
  if (!(N > 0 && m1 > 0 && m2 > 0)) throw Error(ErrorCode::OutOfRange, "N, M1, M2 must be positive");
  if (std::abs(Q * Q * m1 - N) > 1e-12 * N) throw Error(ErrorCode::InvariantViolation, "Q^2 M1 must equal N");
  if (!(tol > 0 && tol <= 1e-4)) throw Error(ErrorCode::OutOfRange, "tolerance must lie in (0, 1e-4]");
  if (q < 1 || qp < 1 || r < 1) throw Error(ErrorCode::OutOfRange, "q, q', r must be positive");
  if (!(L > 0 && m > 0 && mp > 0 && zeta_scale > 0)) throw Error(ErrorCode::OutOfRange, "L, m, m', zeta scale must be positive");
  gl2.validate();
  gl3.validate();
  if (gl3.kind != SpectralParams::Kind::GL3) throw Error(ErrorCode::OutOfRange, "gl3 slot needs a GL3 triple");
}

// ===========================================================================
// GL2 kernels
// ===========================================================================

namespace {

struct BesselPart {
  cplx coef;
  cplx nu;
};

// J_g^+ as a combination of J_nu
std::vector<BesselPart> plus_parts(const SpectralParams& sp) {
  if (sp.kind == SpectralParams::Kind::Holomorphic) {
    const cplx ik = std::pow(cplx(0, 1), sp.k);
    return {{kTwoPi * ik, cplx(sp.k - 1, 0)}};
  }
  if (sp.kind == SpectralParams::Kind::Maass) {
    // sin(pi i mu) = i sinh(pi mu)
    const cplx s(0, std::sinh(kPi * sp.mu));
    return {{-kPi / s, cplx(0, 2 * sp.mu)}, {kPi / s, cplx(0, -2 * sp.mu)}};
  }
  throw Error(ErrorCode::OutOfRange, "GL2 kernel needs a holomorphic or Maass form");
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::OutOfRange, "sign must be +1 or -1");
}

}  // namespace

cplx bessel_kernel(int sign, double x, const SpectralParams& sp) {
  check_sign(sign);
  if (!(x > 0)) throw Error(ErrorCode::OutOfRange, "kernel needs x > 0");
  if (sign < 0) {
    if (sp.kind == SpectralParams::Kind::Holomorphic) return 0.0;
    if (sp.kind != SpectralParams::Kind::Maass) throw Error(ErrorCode::OutOfRange, "GL2 kernel needs a GL2 form");
    return 4.0 * sp.eps * std::cosh(kPi * sp.mu) * bessel_k_imag(2 * sp.mu, x);
  }
  if (sp.kind == SpectralParams::Kind::Holomorphic) return kTwoPi * std::pow(cplx(0, 1), sp.k) * bessel_j(sp.k - 1, x);
  cplx s = 0;
  for (const auto& p : plus_parts(sp)) s += p.coef * bessel_j(p.nu, x);
  return s;
}

cplx psi_transform(int sign, double x, const SmoothWeight& phi, const SpectralParams& sp, double tol) {
  check_sign(sign);
  if (!(x >= 0)) throw Error(ErrorCode::OutOfRange, "Psi needs x >= 0");
  if (x == 0) {
    if (sign > 0 && sp.kind == SpectralParams::Kind::Holomorphic) return 0.0;
    throw Error(ErrorCode::OutOfRange, "Psi at x = 0 is only defined for the holomorphic + branch");
  }
  const double lo = std::max(phi.lo(), 0.0), hi = phi.hi();
  QuadOptions o;
  o.rel_tol = tol;
  o.abs_tol = tol * 1e-3;
  o.max_intervals = 20000;
  o.initial_intervals = 8 + static_cast<int>(4 * 2 * (std::sqrt(x * hi) - std::sqrt(x * lo)));
  auto f = [&](double y) -> cplx {
    const double w = phi(y);
    return w == 0 ? cplx(0) : w * bessel_kernel(sign, 4 * kPi * std::sqrt(x * y), sp);
  };
  return integrate(f, lo, hi, o).value;
}

cplx psi_asymptotic(double x, const SmoothWeight& phi, const SpectralParams& sp, int terms) {
  if (!(x > 0) || terms < 0) throw Error(ErrorCode::OutOfRange, "asymptotic Psi needs x > 0 and terms >= 0");
  const auto parts = plus_parts(sp);
  // a_j(nu) = prod_{l <= j} (4 nu^2 - (2l - 1)^2) / (j! 8^j)
  std::vector<std::vector<cplx>> a(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    a[p].push_back(1.0);
    for (int j = 1; j <= terms; ++j)
      a[p].push_back(a[p].back() * (4.0 * parts[p].nu * parts[p].nu - double((2 * j - 1) * (2 * j - 1))) / (8.0 * j));
  }
  const cplx I(0, 1);
  auto f = [&](double y) -> cplx {
    const double w = phi(y);
    if (w == 0) return 0.0;
    const double z = 4 * kPi * std::sqrt(x * y);
    cplx s = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const cplx chi = z - parts[p].nu * (kPi / 2) - kPi / 4;
      const cplx ep = std::exp(I * chi), em = std::exp(-I * chi);
      cplx acc = 0, ij = 1;
      double zj = 1;
      for (int j = 0; j <= terms; ++j) {
        acc += a[p][static_cast<std::size_t>(j)] / zj * (ij * ep + std::conj(ij) * em);
        ij *= I;
        zj *= z;
      }
      s += parts[p].coef * std::sqrt(2 / (kPi * z)) * 0.5 * acc;
    }
    return w * s;
  };
  QuadOptions o;
  o.initial_intervals = 8 + static_cast<int>(8 * (std::sqrt(x * phi.hi()) - std::sqrt(x * phi.lo())));
  o.max_intervals = 20000;
  return integrate(f, phi.lo(), phi.hi(), o).value;
}

// ===========================================================================
// Ramanujan tau
// ===========================================================================

std::vector<__int128> tau_coefficients(i64 budget) {
  if (budget < 1 || budget > 100000) throw Error(ErrorCode::OutOfRange, "tau budget must lie in [1, 1e5]");
  const std::size_t n = static_cast<std::size_t>(budget);
  // prod (1 - q^m)^3 = sum (-1)^j (2j + 1) q^{j(j+1)/2}
  std::vector<std::pair<std::size_t, i64>> cube;
  for (i64 j = 0; static_cast<std::size_t>(j * (j + 1) / 2) < n; ++j)
    cube.emplace_back(static_cast<std::size_t>(j * (j + 1) / 2), (j % 2 ? -1 : 1) * (2 * j + 1));
  std::vector<__int128> acc(n, 0), next(n);
  for (auto [e, c] : cube) acc[e] = c;
  for (int step = 1; step < 8; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (auto [e, c] : cube)
      for (std::size_t i = e; i < n; ++i) next[i] += acc[i - e] * c;
    acc.swap(next);
  }
  std::vector<__int128> tau(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) tau[i] = acc[i - 1];
  return tau;
}

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

__int128 parse_int128(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw Error(ErrorCode::IoError, "malformed integer '" + s + "'");
  __int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw Error(ErrorCode::IoError, "malformed integer '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

void save_tau_table(const std::string& path, const std::vector<__int128>& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  for (std::size_t i = 1; i < t.size(); ++i) out << int128_to_string(t[i]) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::vector<__int128> load_tau_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::vector<__int128> t{0};
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) t.push_back(parse_int128(line));
  return t;
}

std::vector<__int128> tau_coefficients_cached(i64 budget, const std::string& path) {
  if (std::filesystem::exists(path)) {
    auto t = load_tau_table(path);
    if (static_cast<i64>(t.size()) > budget) {
      t.resize(static_cast<std::size_t>(budget + 1));
      return t;
    }
  }
  auto t = tau_coefficients(budget);
  save_tau_table(path, t);
  return t;
}

// ===========================================================================
// Voronoi on Delta
// ===========================================================================

namespace {

double lambda_delta(const std::vector<__int128>& tau, i64 m) {
  return static_cast<double>(static_cast<long double>(tau[static_cast<std::size_t>(m)]) /
                             std::pow(static_cast<long double>(m), 5.5L));
}

}  // namespace

Gl2Voronoi::Gl2Voronoi(const SmoothWeight& phi, double N, i64 c, i64 budget, double tol, std::vector<__int128> table)
    : phi_(phi), N_(N), c_(c), budget_(budget), tol_(tol) {
  if (c < 1) throw Error(ErrorCode::OutOfRange, "c must be positive");
  if (!(N > 0) || !(phi.lo() >= 0)) throw Error(ErrorCode::OutOfRange, "N and the support of phi must be positive");
  const i64 need = std::max<i64>(budget, static_cast<i64>(std::ceil(N * phi.hi())) + 1);
  if (static_cast<i64>(table.size()) > need)
    tau_ = std::move(table);
  else
    tau_ = tau_coefficients(need);
}

void Gl2Voronoi::extend(double lhs_scale) {
  if (!psi_.empty()) return;
  const auto sp = SpectralParams::holomorphic(12);
  const double cut = 1e-3 * tol_ * (1 + lhs_scale);
  const double pref = N_ / static_cast<double>(c_);
  for (i64 m = 1;; ++m) {
    if (m > budget_)
      throw Error(ErrorCode::TruncationBudgetExceeded,
                  "dual sum not below tolerance after " + std::to_string(budget_) + " terms (c = " + std::to_string(c_) + ")");
    const double x = static_cast<double>(m) * N_ / static_cast<double>(c_ * c_);
    psi_.push_back(pref * lambda_delta(tau_, m) * psi_transform(1, x, phi_, sp, 1e-12).real());
    const std::size_t window = std::max<std::size_t>(100, psi_.size() / 5);
    if (psi_.size() < 2 * window) continue;
    double mx = 0, sum = 0;
    for (std::size_t i = psi_.size() - window; i < psi_.size(); ++i) {
      mx = std::max(mx, std::abs(psi_[i]));
      sum += std::abs(psi_[i]);
    }
    if (mx < cut) {
      tail_ = sum;
      return;
    }
  }
}

VoronoiResult Gl2Voronoi::check(i64 a) {
  if (std::gcd(a, c_) != 1) throw Error(ErrorCode::NonCoprime, "gcd(a, c) must be 1");
  VoronoiResult res;
  ComplexAccumulator lhs;
  double scale = 0;
  const i64 lo = static_cast<i64>(std::floor(N_ * phi_.lo())), hi = static_cast<i64>(std::ceil(N_ * phi_.hi()));
  for (i64 m = std::max<i64>(1, lo); m <= hi; ++m) {
    const double w = phi_(static_cast<double>(m) / N_);
    if (w == 0) continue;
    const double t = lambda_delta(tau_, m) * w;
    lhs += t * additive_char(mulmod(mod(a, c_), m, c_), c_);
    scale += std::abs(t);
  }
  extend(scale);
  const i64 abar = c_ == 1 ? 0 : mod_inverse(mod(a, c_), c_);
  ComplexAccumulator rhs;
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    const i64 m = static_cast<i64>(i) + 1;
    rhs += psi_[i] * additive_char(mod(-mulmod(abar, m, c_), c_), c_);
  }
  res.lhs = lhs.value();
  res.rhs = rhs.value();
  res.diff = std::abs(res.lhs - res.rhs);
  res.dual_terms = static_cast<i64>(psi_.size());
  res.truncation_estimate = tail_;
  res.pass = res.diff <= tol_ * (1 + std::abs(res.lhs));
  return res;
}

VoronoiResult gl2_voronoi_check(i64 a, i64 c, const SmoothWeight& phi, double N, i64 coeff_budget) {
  Gl2Voronoi v(phi, N, c, coeff_budget);
  return v.check(a);
}

// ===========================================================================
// stationary phase, Gamma factors, Mellin side
// ===========================================================================

Psi0Result stationary_phase_psi0(int sign, double x, const OscParams& p, double zeta, double window) {
  check_sign(sign);
  if (!(x > 0) || zeta == 0) throw Error(ErrorCode::OutOfRange, "Psi0 needs x > 0 and zeta != 0");
  p.validate();
  const double A = zeta * p.freq(p.q);
  Psi0Result r;
  r.resonance = A * A;
  r.threshold = 1e-4 * std::pow(x, -0.25);
  r.predicted_support = sign < 0 && x >= r.resonance / window && x <= r.resonance * window;
  QuadOptions o;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-8;  // on the integral before the x^{-1/4} factor: 1e-4 of the threshold
  o.max_intervals = 50000;
  const double lo = p.V.lo(), hi = p.V.hi();
  o.initial_intervals = 8 + static_cast<int>(4 * (std::abs(A) * (hi - lo) + 2 * (std::sqrt(x * hi) - std::sqrt(x * lo))));
  auto f = [&](double y) -> cplx {
    const double w = p.V(y);
    if (w == 0) return 0.0;
    return w * std::pow(y, -0.25) * std::polar(1.0, kTwoPi * (A * y + sign * 2 * std::sqrt(x * y)));
  };
  r.numeric = std::pow(x, -0.25) * integrate(f, lo, hi, o).value;
  return r;
}

namespace {

double pole_distance(cplx z) {
  if (z.real() > 0.5) return 1e300;
  const double n = std::round(z.real());
  return std::abs(z - cplx(std::min(n, 0.0), 0));
}

// prod_j Gamma(num_j) / Gamma(den_j)
cplx gamma_ratio(const std::array<cplx, 3>& num, const std::array<cplx, 3>& den) {
  cplx logsum = 0, direct = 1;
  for (int j = 0; j < 3; ++j) {
    if (pole_distance(num[static_cast<std::size_t>(j)]) < 1e-6)
      throw Error(ErrorCode::PoleProximity, "Gamma pole within 1e-6");
    logsum += lgamma_complex(num[static_cast<std::size_t>(j)]);
    if (pole_distance(den[static_cast<std::size_t>(j)]) < 1e-3)
      direct *= rgamma_complex(den[static_cast<std::size_t>(j)]);
    else
      logsum -= lgamma_complex(den[static_cast<std::size_t>(j)]);
  }
  return direct * std::exp(logsum);
}

// log Gamma(z + 1/2) - log Gamma(z) without the cancellation of two large logs
cplx log_half_shift(cplx z) {
  if (std::abs(z) < 15) return lgamma_complex(z + 0.5) - lgamma_complex(z);
  // 1/2 log z + sum_n -(2 - 2^{-n}) B_{n+1} / (n (n + 1) z^n), n odd
  static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  cplx s = 0.5 * std::log(z), zn = z;
  const cplx z2 = z * z;
  for (int i = 0; i < 8; ++i) {
    const int n = 2 * i + 1;
    s -= (2 - std::ldexp(1.0, -n)) * B[i] / (double(n) * double(n + 1)) / zn;
    zn *= z2;
  }
  return s;
}

// expm1 on the complex plane
cplx expm1_complex(cplx z) {
  const double er = std::expm1(z.real()), sh = std::sin(0.5 * z.imag());
  return {er * std::cos(z.imag()) - 2 * sh * sh, (er + 1) * std::sin(z.imag())};
}

}  // namespace

cplx gamma_pm(int sign, cplx s, const SpectralParams& sp) {
  check_sign(sign);
  if (sp.kind != SpectralParams::Kind::GL3) throw Error(ErrorCode::OutOfRange, "gamma factor needs a GL3 triple");
  std::array<cplx, 3> n1, d1, n2, d2;
  bool near = false;
  for (std::size_t j = 0; j < 3; ++j) {
    const cplx mu = sp.mus[j];
    n1[j] = (1.0 + s + mu) / 2.0;
    d1[j] = (-s - mu) / 2.0;
    n2[j] = (2.0 + s + mu) / 2.0;
    d2[j] = (1.0 - s - mu) / 2.0;
    for (cplx z : {n1[j], d1[j], n2[j], d2[j]}) near = near || pole_distance(z) < 1e-3;
  }
  const cplx pref = 0.5 * std::exp(-3.0 * (s + 0.5) * std::log(kPi));
  if (near) return pref * (gamma_ratio(n1, d1) - cplx(0, sign) * gamma_ratio(n2, d2));
  // pref P1 (1 -+ i P2/P1); the bracket nearly cancels on one side of the critical line
  cplx log_ratio = 0;
  for (std::size_t j = 0; j < 3; ++j) log_ratio += log_half_shift(n1[j]) - log_half_shift(d1[j]);
  const cplx ell = log_ratio + cplx(0, sign * kPi / 2);
  return -pref * gamma_ratio(n1, d1) * expm1_complex(ell);
}

cplx w_dagger(double A, cplx s, const SmoothWeight& W, double tol) {
  const double lo = W.lo(), hi = W.hi();
  if (!(lo > 0)) throw Error(ErrorCode::OutOfRange, "W must be supported in the positive reals");
  QuadOptions o;
  o.rel_tol = tol;
  // absolute floor relative to the trivial bound int |W| v^{sigma - 1}
  o.abs_tol = 0.1 * tol * (hi - lo) * std::max(std::pow(lo, s.real() - 1), std::pow(hi, s.real() - 1));
  o.max_intervals = 50000;
  o.initial_intervals = 8 + static_cast<int>(2 * (std::abs(A) * (hi - lo) + std::abs(s.imag()) * std::log(hi / lo) / kTwoPi));
  const cplx e1 = s - 1.0;
  auto f = [&](double v) -> cplx {
    const double w = W(v);
    if (w == 0) return 0.0;
    return w * std::exp(e1 * std::log(v)) * std::polar(1.0, -kTwoPi * A * v);
  };
  return integrate(f, lo, hi, o).value;
}

}  // namespace sumcheck
