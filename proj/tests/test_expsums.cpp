#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sumcheck/expsums.hpp"

using namespace sumcheck;

namespace {
bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

double max_diff(const FieldFn& a, const FieldFn& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

DirichletCharacter quadratic(i64 p) { return DirichletCharacter::from_prime(p, (p - 1) / 2); }
}  // namespace

// ===========================================================================
// Ramanujan and Kloosterman sums
// ===========================================================================

TEST(Ramanujan, Examples) {
  EXPECT_EQ(ramanujan_sum(6, 3), -2);
  EXPECT_EQ(ramanujan_sum(5, 1), -1);
  for (i64 q = 1; q <= 30; ++q) EXPECT_EQ(ramanujan_sum(q, 0), euler_phi(q));
}

TEST(Ramanujan, FormsAgree) {
  for (i64 q = 1; q <= 60; ++q)
    for (i64 b = -70; b <= 70; ++b)
      EXPECT_LE(std::abs(ramanujan_sum_units(q, b) - static_cast<double>(ramanujan_sum_divisor(q, b))), 1e-10);
}

TEST(Kloosterman, Examples) {
  EXPECT_TRUE(near(kloosterman(1, 1, 2), 1.0, 1e-12));
  EXPECT_TRUE(near(kloosterman(1, 1, 5), 0.38196601125010515, 1e-12));
  for (i64 c = 1; c <= 30; ++c)
    for (i64 m = 0; m < c; ++m)
      for (i64 n = 0; n < c; ++n) {
        cplx s = kloosterman(m, n, c);
        EXPECT_LE(std::abs(s.imag()), 1e-10);
        EXPECT_TRUE(near(s, kloosterman(n, m, c), 1e-10));
      }
  // n = 0 is the Ramanujan sum
  for (i64 c = 1; c <= 30; ++c)
    for (i64 m = 0; m < c; ++m) EXPECT_NEAR(kloosterman(m, 0, c).real(), static_cast<double>(ramanujan_sum(c, m)), 1e-10);
}

TEST(Kloosterman, TableMatchesDirect) {
  for (i64 c : {1, 7, 12, 30, 44}) {
    auto t = kloosterman_table(c);
    for (i64 m = 0; m < c; ++m)
      for (i64 n = 0; n < c; ++n) EXPECT_NEAR((*t)(m, n), kloosterman(m, n, c).real(), 1e-11);
    EXPECT_EQ(kloosterman_table(c).get(), t.get());
  }
}

TEST(Kl2, Examples) {
  EXPECT_NEAR(kl2_normalized(1, 5).real(), 0.17082039324993692, 1e-12);
  for (i64 p : {3, 5, 7, 11, 101}) EXPECT_TRUE(near(kl2_normalized(0, p), -1.0 / std::sqrt(double(p)), 1e-12));
  for (i64 p = 3; p <= 47; p += 2) {
    if (!is_prime(p)) continue;
    for (i64 n = 0; n < p; ++n)
      EXPECT_TRUE(near(kl2_normalized(n, p), kloosterman(1, n, p) / std::sqrt(double(p)), 1e-12));
  }
}

TEST(Kloosterman, WeilBound) {
  for (i64 p = 2; p <= 101; ++p) {
    if (!is_prime(p)) continue;
    auto t = kloosterman_table(p);
    const double bound = 2.0 * std::sqrt(double(p));
    for (i64 m = 1; m < p; ++m)
      for (i64 n = 1; n < p; ++n) ASSERT_LE(std::abs((*t)(m, n)), bound + 1e-9) << p;
    for (i64 n = 0; n < p; ++n) ASSERT_LE(std::abs((*t)(1, n)) / std::sqrt(double(p)), 2.0 + 1e-12);
  }
}

// ===========================================================================
// L sums, convolution, Fourier transform
// ===========================================================================

TEST(LSum, Examples) {
  auto chi = quadratic(3);
  EXPECT_TRUE(near(l_sum(1, 1, 1, 3, chi), cplx(-0.28867513459481287, -0.5), 1e-12));
  EXPECT_TRUE(near(l_sum(1, 1, 0, 3, chi), cplx(0.0, 1.0), 1e-12));
  for (i64 p : {5, 7, 11})
    for (auto& c : primitive_characters(p))
      for (i64 v = 0; v < p; ++v) EXPECT_LE(std::abs(l_sum(2, 3, v, p, c)), std::sqrt(double(p)) + 1e-12);
}

TEST(Convolution, Examples) {
  const i64 p = 7;
  FieldFn ind(p, 0.0);
  ind[1] = 1.0;
  auto c = mult_convolution(ind, ind);
  for (i64 v = 0; v < p; ++v) EXPECT_TRUE(near(c[v], v == 1 ? 1.0 / std::sqrt(7.0) : 0.0, 1e-15));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  FieldFn one(p, 1.0), L(p);
  for (auto& x : L) x = {g(rng), g(rng)};
  auto k1 = mult_convolution(one, L);
  cplx s = 0;
  for (i64 u = 1; u < p; ++u) s += L[u];
  for (i64 v = 1; v < p; ++v) EXPECT_TRUE(near(k1[v], s / std::sqrt(7.0), 1e-12));
  EXPECT_TRUE(near(k1[0], 6.0 * L[0] / std::sqrt(7.0), 1e-12));
}

TEST(Convolution, ReindexingAwayFromZero) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (i64 p : {5, 7, 11, 13}) {
    FieldFn K(p), L(p);
    for (auto& x : K) x = {g(rng), g(rng)};
    for (auto& x : L) x = {g(rng), g(rng)};
    auto a = mult_convolution(K, L), b = mult_convolution_reindexed(K, L);
    for (i64 v = 1; v < p; ++v) EXPECT_TRUE(near(a[v], b[v], 1e-12));
  }
}

TEST(Convolution, TracePairAllPoints) {
  for (i64 p : {5, 7, 11})
    for (auto& chi : primitive_characters(p)) {
      auto kl = kl2_table(p);
      FieldFn K(p);
      for (i64 u = 0; u < p; ++u) K[u] = kl[mod(3 * u, p)];
      auto L = l_table(2, 1, p, chi);
      auto a = mult_convolution(K, L), b = mult_convolution_reindexed(K, L);
      EXPECT_LE(max_diff(a, b), 1e-12);
      // direct double sum
      for (i64 v = 0; v < p; ++v) {
        cplx s = 0;
        for (i64 u = 1; u < p; ++u)
          for (i64 w = 0; w < p; ++w)
            if (mod(u * w - v, p) == 0) s += K[u] * L[w];
        EXPECT_TRUE(near(a[v], s / std::sqrt(double(p)), 1e-12));
      }
    }
}

TEST(Fourier, Examples) {
  for (i64 p : {3, 5, 7, 11, 13}) {
    FieldFn d(p, 0.0), one(p, 1.0);
    d[0] = 1.0;
    for (auto& x : finite_fourier(d)) EXPECT_TRUE(near(x, 1.0 / std::sqrt(double(p)), 1e-14));
    auto t = finite_fourier(one);
    for (i64 v = 0; v < p; ++v) EXPECT_TRUE(near(t[v], v == 0 ? std::sqrt(double(p)) : 0.0, 1e-12));
  }
}

TEST(Fourier, ParsevalAndReflection) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (i64 p : {5, 7, 11, 13, 97}) {
    FieldFn K(p);
    for (auto& x : K) x = {g(rng), g(rng)};
    auto h = finite_fourier(K), hh = finite_fourier(h);
    double a = 0, b = 0;
    for (i64 v = 0; v < p; ++v) {
      a += std::norm(K[v]);
      b += std::norm(h[v]);
      EXPECT_TRUE(near(hh[v], K[mod(-v, p)], 1e-12));
    }
    EXPECT_NEAR(a, b, 1e-10 * a);
  }
}

// ===========================================================================
// closed forms
// ===========================================================================

TEST(LHat, ClosedFormMatchesTransform) {
  struct C { i64 p, a, b; };
  for (C c : {C{5, 1, 1}, C{7, 2, 3}, C{11, 4, 7}, C{13, 5, 2}})
    for (auto& chi : primitive_characters(c.p)) {
      auto oracle = finite_fourier(l_table(c.a, c.b, c.p, chi));
      EXPECT_EQ(l_hat_closed_form(c.a, c.b, 0, chi), cplx(0, 0));
      for (i64 v = 0; v < c.p; ++v) EXPECT_TRUE(near(l_hat_closed_form(c.a, c.b, v, chi), oracle[v], 1e-10));
    }
}

TEST(ZTransform, ClosedFormMatchesChain) {
  auto z = z_transform(1, 1, 1, quadratic(5));
  EXPECT_EQ(z[0], cplx(0, 0));
  EXPECT_LE(max_diff(z, z_chain(1, 1, 1, quadratic(5))), 1e-10);
  for (auto& chi : primitive_characters(11)) EXPECT_LE(max_diff(z_transform(2, 3, 5, chi), z_chain(2, 3, 5, chi)), 1e-10);
  EXPECT_THROW(z_transform(0, 1, 1, quadratic(5)), Error);
}

TEST(ZTransform, ShiftedPlancherel) {
  std::mt19937_64 rng(17);
  for (i64 p : {3, 5, 7, 11, 13}) {
    std::uniform_int_distribution<i64> u(1, p - 1);
    for (auto& chi : primitive_characters(p))
      for (int t = 0; t < 4; ++t) {
        TraceFunctionParams tp{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), 0, chi};
        for (i64 eta = 0; eta < p; ++eta) {
          tp.eta = eta;
          auto r = plancherel_check(tp);
          EXPECT_TRUE(near(r.lhs, r.rhs, 1e-10));
        }
      }
  }
}

TEST(Cancellation, DegenerateTupleHasLargeDiagonal) {
  auto chi = DirichletCharacter::from_prime(31, 1);
  TraceFunctionParams tp{3, 2, 5, 3, 5, 2, 0, chi};
  ASSERT_TRUE(degenerate_tuple(tp));
  auto st = cancellation_statistic(tp);
  double ratio = std::abs(st.values[0]) / 31.0;
  EXPECT_GT(ratio, 1.0 / 3.0);
  EXPECT_LT(ratio, 3.0);
  EXPECT_EQ(st.values.size(), 31u);
  int total = 0;
  for (int h : st.histogram) total += h;
  EXPECT_EQ(total, 30);
}
