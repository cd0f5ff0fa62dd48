#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "sumcheck/arith.hpp"

namespace sumcheck {

struct QuadOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 4000;  // hard budget; each interval costs 15 nodes
  int initial_intervals = 1;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0;
  long evals = 0;
};

// Gauss-Legendre nodes and weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

namespace detail {

inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(std::complex<double> x) { return std::abs(x); }

template <class T>
struct Piece {
  double a, b;
  T value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F, class T>
Piece<T> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * gk_wk[7];
  T gauss = fc * gk_wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * gk_x[j];
    T s = f(c - dx) + f(c + dx);
    kron += s * gk_wk[j];
    if (j % 2 == 1) gauss += s * gk_wg[j / 2];
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, magnitude(kron - gauss)};
}

}  // namespace detail

// Global adaptive Gauss-Kronrod 7-15. Throws QuadratureFailure when the
// interval budget runs out before the tolerance is met.
template <class F>
auto integrate(F f, double a, double b, const QuadOptions& opt = {}) {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> res;
  if (a == b) return res;
  std::priority_queue<detail::Piece<T>> heap;
  T total{};
  double err = 0;
  const int n0 = std::max(1, opt.initial_intervals);
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0, hi = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
    auto p = detail::gk15<F, T>(f, lo, hi);
    total += p.value;
    err += p.error;
    heap.push(p);
  }
  int count = n0;
  while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
    if (count + 1 > opt.max_intervals) {
      throw Error(ErrorCode::QuadratureFailure, "interval budget " + std::to_string(opt.max_intervals) +
                                                    " exhausted on [" + std::to_string(a) + ", " + std::to_string(b) +
                                                    "], error " + std::to_string(err));
    }
    auto top = heap.top();
    heap.pop();
    const double mid = 0.5 * (top.a + top.b);
    auto l = detail::gk15<F, T>(f, top.a, mid);
    auto r = detail::gk15<F, T>(f, mid, top.b);
    total += l.value + r.value - top.value;
    err += l.error + r.error - top.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // recompute from pieces to shed accumulated rounding
  T clean{};
  double e2 = 0;
  while (!heap.empty()) {
    clean += heap.top().value;
    e2 += heap.top().error;
    heap.pop();
  }
  res.value = clean;
  res.error = e2;
  res.evals = 15L * (2L * count - n0);
  return res;
}

}  // namespace sumcheck
