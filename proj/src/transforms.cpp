#include "sumcheck/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>

#include "sumcheck/delta.hpp"
#include "sumcheck/quadrature.hpp"

namespace sumcheck {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::OutOfRange, "sign must be +1 or -1");
}

const DfiWeight& dfi_for(double Q) {
  static std::mutex mu;
  static std::map<double, std::unique_ptr<DfiWeight>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[Q];
  if (!slot) slot = std::make_unique<DfiWeight>(DeltaParams{Q});
  return *slot;
}

// Samples of h(u) = W(e^u) e^{u/2} Phi(e^u) on a uniform grid in u = log v.
struct UGrid {
  double u0 = 0, du = 0;
  std::vector<cplx> h;
};

// out[j] = du * sum_k h_k exp(-i (t0 + j dt) u_k); phases t u reach the thousands,
// so the periodic resync reduces them in long double
void mellin_line(const UGrid& g, double t0, double dt, std::size_t n, std::vector<cplx>& out) {
  const std::size_t K = g.h.size();
  std::vector<cplx> cur(K), step(K);
  auto sync = [&](std::size_t j) {
    const long double t = t0 + static_cast<long double>(j) * dt;
    for (std::size_t k = 0; k < K; ++k) {
      const long double u = g.u0 + static_cast<long double>(k) * g.du;
      const double ph = static_cast<double>(std::remainder(-t * u, 2 * std::acos(-1.0L)));
      cur[k] = g.h[k] * std::polar(g.du, ph);
    }
  };
  for (std::size_t k = 0; k < K; ++k) step[k] = std::polar(1.0, -dt * (g.u0 + static_cast<double>(k) * g.du));
  out.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 256 == 0) sync(j);
    cplx s = 0;
    for (std::size_t k = 0; k < K; ++k) {
      s += cur[k];
      cur[k] *= step[k];
    }
    out[j] = s;
  }
}

struct Profile {
  double t0 = 0, h = 0;
  std::vector<cplx> F;
  double err = 0;
};

// F(tau) = (1/2pi) (Nx)^{-i tau} gamma(-1/2 + i tau) int h(u) e^{-i tau u} du on a
// uniform tau grid wide enough that the ends sit below trunc * peak.
Profile tau_profile(int sign_j, double log_nx, double A_max, const OscParams& p, const TauOptions& opt,
                    double extra_log, const std::function<void(UGrid&)>& fill) {
  const double lo = p.W.lo(), hi = p.W.hi();
  const double vlog = std::max(std::abs(std::log(lo)), std::abs(std::log(hi)));
  double T = 5 * kPi * A_max + 200, last_edge = 1e300;
  for (;;) {
    if (T > 2e4) throw Error(ErrorCode::TruncationBudgetExceeded, "tau range exceeds 2e4 before the integrand decays");
    UGrid g;
    g.u0 = std::log(lo);
    g.du = kPi / (2 * opt.refine * (T + kTwoPi * std::abs(A_max) * hi + 20));
    const std::size_t K = static_cast<std::size_t>(std::ceil((std::log(hi) - g.u0) / g.du)) + 1;
    g.h.assign(K, 0);
    fill(g);
    const double fmax = std::abs(log_nx) + vlog + 3 * std::log(std::max(T, kPi) / kPi) + 3 + extra_log;
    Profile pr;
    pr.h = kTwoPi / (2 * opt.refine * fmax);
    const std::size_t n = static_cast<std::size_t>(std::ceil(2 * T / pr.h)) + 1;
    pr.t0 = -T;
    mellin_line(g, pr.t0, pr.h, n, pr.F);
    double peak = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double tau = pr.t0 + static_cast<double>(j) * pr.h;
      pr.F[j] *= gamma_pm(sign_j, cplx(-0.5, tau), p.gl3) * std::polar(1.0 / kTwoPi, -tau * log_nx);
      peak = std::max(peak, std::abs(pr.F[j]));
    }
    if (peak == 0) return pr;
    const std::size_t edge = std::max<std::size_t>(4, n / 50);
    double edge_max = 0;
    for (std::size_t j = 0; j < edge; ++j) edge_max = std::max({edge_max, std::abs(pr.F[j]), std::abs(pr.F[n - 1 - j])});
    if (edge_max > opt.trunc * peak) {
      if (edge_max > 0.1 * last_edge)
        throw Error(ErrorCode::TruncationBudgetExceeded,
                    "tau integrand stalls at " + sci(edge_max / peak) + " of its peak at |tau| = " + sci(T) + ", above the truncation level");
      last_edge = edge_max;
      T *= 1.6;
      continue;
    }
    std::size_t a = 0, b = n - 1;
    while (std::abs(pr.F[a]) < opt.trunc * peak) ++a;
    while (std::abs(pr.F[b]) < opt.trunc * peak) --b;
    // coarse-grid comparison on the retained range as the error estimate
    cplx fine = 0, coarse = 0;
    for (std::size_t j = a; j <= b; ++j) {
      fine += pr.F[j];
      if ((j - a) % 2 == 0) coarse += pr.F[j];
    }
    pr.err = std::abs(pr.h * fine - 2 * pr.h * coarse) + opt.trunc * peak * pr.h * static_cast<double>(n - (b - a + 1));
    pr.F = std::vector<cplx>(pr.F.begin() + static_cast<std::ptrdiff_t>(a), pr.F.begin() + static_cast<std::ptrdiff_t>(b) + 1);
    pr.t0 += static_cast<double>(a) * pr.h;
    return pr;
  }
}

}  // namespace

// ===========================================================================
// I
// ===========================================================================

TransformValue frak_i(int sign, double x, i64 q, double zeta, const OscParams& p) {
  check_sign(sign);
  if (!(x > 0)) throw Error(ErrorCode::OutOfRange, "I needs x > 0");
  const double A = zeta * p.freq(q);
  const double lo = p.V.lo(), hi = p.V.hi();
  QuadOptions o;
  o.rel_tol = p.tol;
  o.abs_tol = 1e-3 * p.tol * std::sqrt(x);
  o.max_intervals = 50000;
  o.initial_intervals = 8 + static_cast<int>(4 * (std::abs(A) * (hi - lo) + 2 * (std::sqrt(x * hi) - std::sqrt(x * lo))));
  QuadResult<cplx> r;
  if (x <= 1) {
    auto f = [&](double y) -> cplx {
      const double w = p.V(y);
      if (w == 0) return 0.0;
      return w * std::polar(1.0, kTwoPi * A * y) * bessel_kernel(sign, 4 * kPi * std::sqrt(x * y), p.gl2);
    };
    r = integrate(f, lo, hi, o);
    r.value *= std::sqrt(x);
    r.error *= std::sqrt(x);
  } else {
    auto f = [&](double y) -> cplx {
      const double w = p.V(y);
      if (w == 0) return 0.0;
      return w * std::pow(y, -0.25) * std::polar(1.0, kTwoPi * (A * y + sign * 2 * std::sqrt(x * y)));
    };
    r = integrate(f, lo, hi, o);
    r.value *= std::pow(x, 0.25);
    r.error *= std::pow(x, 0.25);
  }
  TransformValue t;
  t.value = r.value;
  t.error = r.error;
  t.nodes = r.evals;
  return t;
}

// ===========================================================================
// J
// ===========================================================================

TransformValue frak_j(int sign, double x, i64 q, double zeta, const OscParams& p, const TauOptions& opt) {
  check_sign(sign);
  if (!(x > 0)) throw Error(ErrorCode::OutOfRange, "J needs x > 0");
  p.validate();
  const double A = zeta * p.freq(q);
  auto fill = [&](UGrid& g) {
    for (std::size_t k = 0; k < g.h.size(); ++k) {
      const double v = std::exp(g.u0 + static_cast<double>(k) * g.du);
      const double w = p.W(v);
      g.h[k] = w == 0 ? cplx(0) : w * std::sqrt(v) * std::polar(1.0, -kTwoPi * A * v);
    }
  };
  auto pr = tau_profile(sign, std::log(p.N * x), std::abs(A), p, opt, 0, fill);
  TransformValue t;
  for (auto& f : pr.F) t.value += f;
  t.value *= pr.h;
  t.error = pr.err;
  t.tau_lo = pr.t0;
  t.tau_hi = pr.t0 + pr.h * static_cast<double>(pr.F.size() - 1);
  t.nodes = static_cast<i64>(pr.F.size());
  return t;
}

// ===========================================================================
// R
// ===========================================================================

RProfile::RProfile(int sign_i, int sign_j, double y1, double y2_unit, i64 q, const OscParams& p, IFunction ifn,
                   const TauOptions& opt, double xi_log_max) {
  check_sign(sign_i);
  check_sign(sign_j);
  p.validate();
  if (!(y1 > 0 && y2_unit > 0)) throw Error(ErrorCode::OutOfRange, "R needs positive arguments");
  if (static_cast<double>(q) > p.Q) throw Error(ErrorCode::OutOfRange, "q must not exceed Q");
  if (!ifn) ifn = [&](double z) { return frak_i(sign_i, y1, q, z, p).value; };
  const DfiWeight& omega = dfi_for(p.Q);
  const double c = p.freq(q);
  const double zmax = p.U.hi() * p.zeta_scale;
  const double fz = c * (p.V.hi() + p.W.hi()) + p.Q / (2.0 * static_cast<double>(q)) + 1;
  const double dz = 1.0 / (4 * opt.refine * fz);
  const i64 nz = static_cast<i64>(std::ceil(2 * zmax / dz));
  std::vector<double> zs;
  std::vector<cplx> G;
  for (i64 i = 0; i <= nz; ++i) {
    const double z = -zmax + 2 * zmax * static_cast<double>(i) / static_cast<double>(nz);
    const double u = p.U(z / p.zeta_scale);
    if (u == 0) continue;
    zs.push_back(z);
    G.push_back(u * omega.omega(q, z) * ifn(z));
  }
  zeta_nodes_ = static_cast<i64>(zs.size());
  const double step = 2 * zmax / static_cast<double>(nz);
  auto fill = [&](UGrid& g) {
    for (std::size_t k = 0; k < g.h.size(); ++k) {
      const double v = std::exp(g.u0 + static_cast<double>(k) * g.du);
      const double w = p.W(v);
      if (w == 0 || zs.empty()) continue;
      // Phi(v) = sum_i G_i e(-zeta_i c v) dzeta
      cplx rot = std::polar(1.0, -kTwoPi * zs[0] * c * v);
      const cplx st = std::polar(1.0, -kTwoPi * step * c * v);
      cplx phi = 0;
      for (std::size_t i = 0; i < zs.size(); ++i) {
        if (i % 128 == 0) rot = std::polar(1.0, -kTwoPi * zs[i] * c * v);
        phi += G[i] * rot;
        rot *= st;
      }
      g.h[k] = w * std::sqrt(v) * phi * step;
    }
  };
  auto pr = tau_profile(sign_j, std::log(p.N * y2_unit), c * zmax, p, opt, xi_log_max, fill);
  t0_ = pr.t0;
  h_ = pr.h;
  F_ = std::move(pr.F);
  err_ = pr.err;
}

cplx RProfile::at(double xi) const {
  if (!(xi > 0)) throw Error(ErrorCode::OutOfRange, "xi must be positive");
  const double lx = std::log(xi);
  const cplx st = std::polar(1.0, -h_ * lx);
  cplx rot, s = 0;
  for (std::size_t j = 0; j < F_.size(); ++j) {
    if (j % 512 == 0) rot = std::polar(1.0, -(t0_ + h_ * static_cast<double>(j)) * lx);
    s += F_[j] * rot;
    rot *= st;
  }
  return h_ * s;
}

TransformValue RProfile::value() const {
  TransformValue t;
  t.value = at(1.0);
  t.error = err_;
  t.tau_lo = t0_;
  t.tau_hi = t0_ + h_ * static_cast<double>(F_.size() - 1);
  t.nodes = static_cast<i64>(F_.size());
  return t;
}

double RProfile::tau_extent(double rel) const {
  double peak = 0;
  for (auto& f : F_) peak = std::max(peak, std::abs(f));
  double ext = 0;
  for (std::size_t j = 0; j < F_.size(); ++j)
    if (std::abs(F_[j]) >= rel * peak) ext = std::max(ext, std::abs(t0_ + h_ * static_cast<double>(j)));
  return ext;
}

TransformValue frak_r(int sign_i, int sign_j, double y1, double y2, i64 q, const OscParams& p, IFunction ifn,
                      const TauOptions& opt) {
  return RProfile(sign_i, sign_j, y1, y2, q, p, std::move(ifn), opt).value();
}

// ===========================================================================
// H / K decay
// ===========================================================================

std::vector<double> default_x_grid(const OscParams& p) {
  const double band = p.Q / static_cast<double>(p.q);
  std::vector<double> xs;
  for (int i = -160; i <= 160; ++i) xs.push_back(band * i / 8.0);
  return xs;
}

DecayReport h_decay_scan(const OscParams& p, const std::vector<double>& X_grid, DecayVariant variant, int sign_i,
                         int sign_j, const TauOptions& opt) {
  p.validate();
  DecayReport rep;
  rep.variant = variant == DecayVariant::H ? "H" : "K";
  rep.sign_i = sign_i;
  rep.sign_j = sign_j;
  rep.band = p.Q / static_cast<double>(p.q);
  rep.c_over_q = 1.0 / rep.band;
  if (rep.band < 5 || rep.band > 50) throw Error(ErrorCode::OutOfRange, "toy parameters need Q/C in [5, 50]");
  const double Mv = variant == DecayVariant::H ? p.M() : p.m2;
  auto y1 = [&](double m, i64 q) { return m * p.N / (double(q) * double(q) * Mv * Mv); };
  auto y2 = [&](i64 q) { return p.L / (std::pow(double(q), 3) * std::pow(p.m1, 3) * double(p.r)); };
  const double xlog = std::max(std::abs(std::log(p.phi.lo())), std::abs(std::log(p.phi.hi())));
  RProfile R(sign_i, sign_j, y1(p.m, p.q), y2(p.q), p.q, p, {}, opt, xlog);
  std::unique_ptr<RProfile> Rp;
  if (p.mp != p.m || p.qp != p.q) Rp = std::make_unique<RProfile>(sign_i, sign_j, y1(p.mp, p.qp), y2(p.qp), p.qp, p, IFunction{}, opt, xlog);
  const RProfile& R2 = Rp ? *Rp : R;

  double xmax = 0;
  for (double x : X_grid) xmax = std::max(xmax, std::abs(x));
  const double T = std::max(R.tau_extent(1e-9), R2.tau_extent(1e-9));
  const double lo = p.phi.lo(), hi = p.phi.hi();
  const double fx = 2 * T / (kTwoPi * lo) + xmax + 1;
  const i64 n = static_cast<i64>(std::ceil((hi - lo) * 4 * opt.refine * fx));
  const double dx = (hi - lo) / static_cast<double>(n);
  std::vector<double> xi;
  std::vector<cplx> rho;
  for (i64 k = 1; k < n; ++k) {
    const double x = lo + dx * static_cast<double>(k);
    const double w = p.phi(x);
    if (w == 0) continue;
    xi.push_back(x);
    rho.push_back(w * R.at(x) * std::conj(R2.at(x)) * (dx / x));
  }
  auto H = [&](double X) {
    ComplexAccumulator acc;
    for (std::size_t k = 0; k < xi.size(); ++k) acc += rho[k] * std::polar(1.0, -kTwoPi * X * xi[k]);
    return acc.value();
  };
  double in_band = 0, tail = 0, total = 0;
  bool has_tail = false;
  for (double X : X_grid) {
    const cplx v = H(X);
    rep.X.push_back(X);
    rep.values.push_back(v);
    const double a = std::abs(v);
    total += a * a;
    if (a > rep.peak) {
      rep.peak = a;
      rep.X_peak = X;
    }
    if (std::abs(X) <= rep.band) in_band = std::max(in_band, a);
    if (std::abs(X) > 10 * rep.band) {
      tail = std::max(tail, a);
      has_tail = true;
    }
  }
  rep.h0 = std::abs(H(0));
  rep.tail_ratio = in_band > 0 ? tail / in_band : 0;
  std::vector<std::pair<double, double>> byx;
  for (std::size_t i = 0; i < rep.X.size(); ++i) byx.emplace_back(std::abs(rep.X[i]), std::norm(rep.values[i]));
  std::sort(byx.begin(), byx.end());
  double run = 0;
  for (auto& [ax, m2] : byx) {
    run += m2;
    rep.dual_mass_X = ax;
    if (run >= 0.999 * total) break;
  }
  rep.pass = has_tail && in_band > 0 && rep.tail_ratio <= 1e-3;
  return rep;
}

LocalizationReport w_dagger_localization(double A, const SmoothWeight& W, double step) {
  LocalizationReport r;
  r.A = A;
  r.Xi = kTwoPi * std::abs(A);
  r.window_lo = r.Xi / 4;
  r.window_hi = 4 * r.Xi;
  // tau range generous enough to hold the tails
  const double T = 5 * kPi * std::abs(A) + 2000;
  UGrid g;
  g.u0 = std::log(W.lo());
  g.du = kPi / (4 * (T + kTwoPi * std::abs(A) * W.hi() + 20));
  const std::size_t K = static_cast<std::size_t>(std::ceil((std::log(W.hi()) - g.u0) / g.du)) + 1;
  g.h.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double v = std::exp(g.u0 + static_cast<double>(k) * g.du);
    g.h[k] = W(v) * std::sqrt(v) * std::polar(1.0, -kTwoPi * A * v);
  }
  std::vector<cplx> S;
  const std::size_t n = static_cast<std::size_t>(std::ceil(2 * T / step)) + 1;
  mellin_line(g, -T, step, n, S);
  double in = 0, all = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double tau = -T + step * static_cast<double>(j);
    const double m = std::norm(S[j]);
    all += m;
    if (std::abs(tau) >= r.window_lo && std::abs(tau) <= r.window_hi) in += m;
    r.max_ratio_to_bound = std::max(r.max_ratio_to_bound, std::abs(S[j]) * std::sqrt(1 + std::abs(tau)));
  }
  r.mass_fraction = all > 0 ? in / all : 0;
  return r;
}

}  // namespace sumcheck
