#include "sumcheck/special.hpp"

#include <cmath>

#include "sumcheck/quadrature.hpp"

namespace sumcheck {

namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr double kSwitch = 20.0;

template <class T>
T hankel(T nu, double x, double* smallest = nullptr, double* largest = nullptr) {
  // P, Q with optimal truncation; terms only start shrinking once 2k > |nu|
  const T mu = T(4) * nu * nu;
  T a = T(1), P = T(1), Q = T(0);
  double last = 1e300, big = 1;
  for (int k = 1; k < 400; ++k) {
    a *= (mu - T((2.0 * k - 1) * (2.0 * k - 1))) / T(k * 8.0 * x);
    const double mag = std::abs(a);
    if (mag > last && k > std::abs(nu)) break;
    last = mag;
    big = std::max(big, mag);
    switch (k % 4) {
      case 0: P += a; break;
      case 1: Q += a; break;
      case 2: P -= a; break;
      default: Q -= a; break;
    }
    if (mag < 1e-18) break;
  }
  if (smallest) *smallest = last;
  if (largest) *largest = big;
  const T chi = T(x) - (nu / T(2) + T(0.25)) * T(kPi);
  return T(std::sqrt(2.0 / (kPi * x))) * (P * std::cos(chi) - Q * std::sin(chi));
}

// Miller backward recurrence normalized by J_0 + 2 sum J_2k = 1
double bessel_j_miller(int n, double x) {
  const int top = std::max(n, static_cast<int>(x)) + 20 + static_cast<int>(std::sqrt(40.0 * std::max<double>(n, x)));
  const int N = top + top % 2;
  ld fp = 0, f = 1e-30L, sum = 0, ans = 0;
  for (int j = N; j >= 1; --j) {
    const ld fm = (2.0L * j / x) * f - fp;
    fp = f;
    f = fm;
    if (j - 1 == n) ans = f;
    if ((j - 1) % 2 == 0 && j > 1) sum += 2 * f;
    if (std::abs(f) > 1e250L) {
      f *= 1e-250L;
      fp *= 1e-250L;
      sum *= 1e-250L;
      ans *= 1e-250L;
    }
  }
  sum += f;
  return static_cast<double>(ans / sum);
}

}  // namespace

double bessel_j(int n, double x) {
  if (n < 0) return (n % 2 ? -1.0 : 1.0) * bessel_j(-n, x);
  if (x == 0) return n == 0 ? 1.0 : 0.0;
  if (x > kSwitch) {
    double smallest = 1, largest = 1;
    const double v = hankel<double>(static_cast<double>(n), x, &smallest, &largest);
    if (smallest < 1e-17 && largest < 10) return v;
  }
  if (x > 8) return bessel_j_miller(n, x);
  const ld h = static_cast<ld>(x) / 2, h2 = -h * h;
  ld t = 1;
  for (int k = 1; k <= n; ++k) t *= h / k;
  ld s = t;
  for (int k = 1; k < 500; ++k) {
    t *= h2 / (static_cast<ld>(k) * (k + n));
    s += t;
    if (std::abs(t) < 1e-22L * std::abs(s) && k > h) break;
  }
  return static_cast<double>(s);
}

cplx bessel_j(cplx nu, double x) {
  if (x > kSwitch) {
    double smallest = 1, largest = 1;
    const cplx v = hankel<cplx>(nu, x, &smallest, &largest);
    if (smallest < 1e-16 && largest < 10) return v;
  }
  const cld v(nu.real(), nu.imag());
  const ld h = static_cast<ld>(x) / 2;
  // (x/2)^nu / Gamma(nu + 1)
  const cplx lead = std::exp(nu * std::log(x / 2.0)) * rgamma_complex(nu + 1.0);
  cld t(lead.real(), lead.imag()), s = t;
  for (int k = 1; k < 500; ++k) {
    t *= -h * h / (static_cast<ld>(k) * (cld(k) + v));
    s += t;
    if (std::abs(t) < 1e-22L * std::abs(s) && k > h) break;
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

double bessel_k_imag(double nu, double x) {
  // K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt
  const double tmax = std::acosh(1.0 + 45.0 / x) + 1.0;
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  o.initial_intervals = 8;
  auto f = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cos(nu * t); };
  // tail beyond tmax is below exp(-x - 45) relative to the peak
  double peak = std::exp(-x);
  o.abs_tol = 1e-16 * peak;
  return integrate(f, 0.0, tmax, o).value;
}

namespace {

// log sin(pi z) without overflow for large |Im z|
cplx log_sin_pi(cplx z) {
  const cplx I(0, 1);
  if (z.imag() >= 0) return -I * kPi * z + std::log((std::exp(2.0 * I * kPi * z) - 1.0) / (2.0 * I));
  return I * kPi * z + std::log((1.0 - std::exp(-2.0 * I * kPi * z)) / (2.0 * I));
}

cplx lgamma_stirling(cplx z) {
  // z with Re z >= 15
  static const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi);
  cplx zp = z, z2 = z * z;
  for (int k = 1; k <= 8; ++k) {
    s += B[k - 1] / (2.0 * k * (2.0 * k - 1) * zp);
    zp *= z2;
  }
  return s;
}

}  // namespace

cplx lgamma_complex(cplx z) {
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - lgamma_complex(1.0 - z);
  cplx shift = 0;
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return lgamma_stirling(z) - shift;
}

cplx gamma_complex(cplx z) { return std::exp(lgamma_complex(z)); }

cplx rgamma_complex(cplx z) {
  // zero at the poles of Gamma
  if (z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real()) return 0.0;
  return std::exp(-lgamma_complex(z));
}

}  // namespace sumcheck
