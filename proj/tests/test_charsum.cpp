#include <gtest/gtest.h>

#include <cmath>

#include "sumcheck/charsum.hpp"

using namespace sumcheck;

namespace {

CharSumInstance make(i64 M1, i64 M2, i64 q, i64 r, i64 n1, i64 n2, i64 m, int sn = 1, int sm = 1, i64 j1 = 1,
                     i64 j2 = 1) {
  CharSumInstance s;
  s.M = FactoredModulus(M1, M2);
  s.q = q;
  s.r = r;
  s.n1 = n1;
  s.n2 = n2;
  s.m = m;
  s.sign_n2 = sn;
  s.sign_m = sm;
  s.chi1 = DirichletCharacter::from_prime(M1, j1);
  s.chi2 = DirichletCharacter::from_prime(M2, j2);
  return s;
}

void expect_close(cplx brute, cplx fact) {
  EXPECT_LE(std::abs(brute - fact), 1e-8 * (1.0 + std::abs(brute))) << brute << " vs " << fact;
}

CorrelationInstance corr(i64 M1, i64 M2, i64 q1, i64 q2, i64 q2p, i64 r, i64 n1, i64 m, i64 mp, i64 n2t, int sn = 1,
                         int sm = 1) {
  CorrelationInstance c;
  c.M = FactoredModulus(M1, M2);
  c.q1 = q1;
  c.q2 = q2;
  c.q2p = q2p;
  c.r = r;
  c.n1 = n1;
  c.m = m;
  c.mp = mp;
  c.n2t = n2t;
  c.sign_n2 = sn;
  c.sign_m = sm;
  c.chi1 = DirichletCharacter::from_prime(M1, 1);
  c.chi2 = DirichletCharacter::from_prime(M2, 1);
  return c;
}

}  // namespace

// ===========================================================================
// first character sum
// ===========================================================================

TEST(C1, GridExample) { expect_close(c1_bruteforce(make(5, 3, 2, 1, 1, 1, 1)), c1_factored(make(5, 3, 2, 1, 1, 1, 1))); }

TEST(C1, FrozenValue) {
  // direct double sum, independent Python evaluation
  cplx v = c1_bruteforce(make(5, 3, 2, 1, 1, 1, 1));
  EXPECT_NEAR(v.real(), 20.86928458823195, 1e-9);
  EXPECT_NEAR(v.imag(), -7.611971348208398, 1e-9);
}

TEST(C1, LargerModulus) {
  auto s = make(7, 5, 4, 2, 2, 3, 2);
  expect_close(c1_bruteforce(s), c1_factored(s));
}

TEST(C1, MaximalN1) {
  auto s = make(7, 5, 4, 2, 8, 3, 2);
  EXPECT_EQ(s.kl_modulus(), 7);
  expect_close(c1_bruteforce(s), c1_factored(s));
}

TEST(C1, SignsFlipped) {
  for (int sn : {1, -1})
    for (int sm : {1, -1}) {
      auto s = make(7, 5, 4, 2, 2, 3, 2, sn, sm, 2, 3);
      expect_close(c1_bruteforce(s), c1_factored(s));
    }
}

TEST(C1, InvariantViolation) {
  auto s = make(5, 3, 2, 1, 1, 1, 3);
  try {
    c1_bruteforce(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
    EXPECT_NE(std::string(e.what()).find("gcd(m, M2)"), std::string::npos);
  }
  EXPECT_THROW(c1_factored(make(5, 3, 5, 1, 1, 1, 1)), Error);
  EXPECT_THROW(c1_factored(make(5, 3, 2, 3, 1, 1, 1)), Error);
  EXPECT_THROW(c1_factored(make(5, 3, 2, 1, 4, 1, 1)), Error);
}

// ===========================================================================
// second character sum
// ===========================================================================

TEST(C2, Examples) {
  for (auto s : {make(3, 5, 2, 1, 1, 1, 1), make(5, 7, 4, 1, 4, 2, 3), make(5, 7, 4, 2, 2, 3, 2, -1, -1, 3, 5)})
    expect_close(c2_bruteforce(s), c2_factored(s));
}

TEST(C2, DegenerateN2) {
  auto s = make(5, 3, 2, 1, 1, 10, 1);
  EXPECT_EQ(c2_factored(s), cplx(0, 0));
  expect_close(c2_bruteforce(s), c2_factored(s));
}

TEST(C2, NonTrivialN2Character) {
  // chi1(n2) != 1 here; the conj(n2) factor decides agreement
  for (i64 n2 : {1, 2, 3, 4}) {
    auto s = make(5, 7, 2, 1, 1, n2, 1, 1, 1, 1, 1);
    expect_close(c2_bruteforce(s), c2_factored(s));
  }
}

// ===========================================================================
// B and D
// ===========================================================================

TEST(BSum, Examples) {
  FactoredModulus M(5, 3);
  EXPECT_LE(std::abs(b_sum(1, 1, 1, 1, 1, M) - 1.0), 1e-14);
  // d = 1 gives -e(1/2), d = 2 gives 2 e(1/2)
  EXPECT_LE(std::abs(b_sum(1, 1, 1, 2, 1, M) + 1.0), 1e-12);
  try {
    b_sum(3, 1, 1, 2, 1, M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisibilityViolation);
  }
  for (i64 q : {1, 2, 4, 8})
    for (i64 n2 = 0; n2 < 5; ++n2) {
      double trivial = 0;
      for (i64 d : divisors(q)) trivial += double(d) * double(euler_phi(q));
      EXPECT_LE(std::abs(b_sum(1, n2, 1, q, 1, M)), trivial);
    }
}

TEST(DSum, BoundsAndErrors) {
  FactoredModulus M(3, 5);
  auto chi = DirichletCharacter::from_prime(3, 1);
  cplx d = d_sum(1, 1, 1, 1, 1, M, chi);
  EXPECT_LE(std::abs(d), 2.0 * 2.0 * std::sqrt(3.0));
  FactoredModulus M2(7, 5);
  for (i64 n2 = 0; n2 < 7; ++n2)
    for (auto& c : primitive_characters(7))
      EXPECT_LE(std::abs(d_sum(2, n2, 2, 4, 2, M2, c)), 6.0 * 2.0 * std::sqrt(7.0));
  EXPECT_THROW(d_sum(1, 1, 1, 3, 1, M, chi), Error);
}

// ===========================================================================
// correlation sums
// ===========================================================================

TEST(Correlation, CrtFactorization) {
  for (auto c : {corr(5, 3, 1, 2, 2, 1, 1, 1, 1, 0), corr(5, 3, 1, 2, 2, 1, 1, 1, 1, 1), corr(5, 3, 1, 1, 2, 1, 1, 1, 2, 3),
                 corr(7, 5, 2, 1, 3, 2, 2, 1, 2, 4, -1, 1), corr(5, 7, 1, 1, 3, 1, 1, 2, 1, 5, 1, -1)}) {
    cplx C = correlation_C(c), C1 = correlation_C1(c), C2 = correlation_C2(c);
    EXPECT_LE(std::abs(C - correlation_prefactor(c) * C1 * C2), 1e-8 * (1.0 + std::abs(C)));
    EXPECT_NEAR(std::abs(correlation_prefactor(c)), double(c.M.m1 * c.M.m1 * c.M.m2), 1e-9);
  }
}

TEST(Correlation, C1Routes) {
  for (i64 M1 : {5, 7, 11})
    for (auto c : {corr(M1, 3, 1, 2, 1, 1, 1, 1, 2, 2), corr(M1, 3, 2, 1, 1, 2, 1, 1, 1, 0, -1, -1)}) {
      cplx a = correlation_C1(c);
      EXPECT_LE(std::abs(a - correlation_C1_trace(c)), 1e-10);
      EXPECT_LE(std::abs(a - correlation_C1_plancherel(c)), 1e-10);
    }
}

TEST(Correlation, C1DegenerateMagnitude) {
  // m q2' = m' q2 and q2 = q2' make the two trace functions equal
  auto c = corr(13, 3, 1, 2, 2, 1, 1, 1, 1, 0);
  ASSERT_TRUE(correlation_degenerate(c));
  double a = std::abs(correlation_C1(c));
  EXPECT_GT(a, 13.0 / 3.0);
  EXPECT_LT(a, 13.0 * 3.0);
}

TEST(Correlation, C2Routes) {
  for (auto c : {corr(5, 3, 1, 2, 2, 1, 1, 1, 1, 0), corr(5, 3, 1, 1, 2, 1, 1, 1, 2, 3), corr(7, 5, 2, 1, 3, 2, 2, 1, 2, 4, -1, 1),
                 corr(7, 11, 2, 3, 1, 2, 1, 1, 2, 5, -1, -1)}) {
    EXPECT_LE(std::abs(correlation_C2(c) - correlation_C2_reindexed(c)), 1e-10);
    EXPECT_LE(std::abs(correlation_C2_star(c) - correlation_C2_star_reindexed(c)), 1e-10);
  }
}

TEST(Correlation, DIdentity) {
  for (auto c : {corr(5, 3, 1, 2, 2, 1, 1, 1, 1, 1), corr(7, 5, 2, 1, 3, 2, 2, 1, 2, 4, -1, 1)}) {
    const double M1 = double(c.M.m1), M2 = double(c.M.m2);
    double lhs = std::abs(correlation_D(c)), rhs = M1 * M1 * M2 * (1.0 - 1.0 / M1) * std::abs(correlation_C2_star(c));
    EXPECT_LE(std::abs(lhs - rhs), 1e-8 * (1.0 + rhs));
  }
}

TEST(Correlation, Periodicity) {
  auto c = corr(5, 3, 1, 2, 1, 1, 1, 1, 2, 2);
  cplx a = correlation_C(c);
  c.n2t += c.period();
  EXPECT_LE(std::abs(a - correlation_C(c)), 1e-12);
}

TEST(Correlation, InvariantViolation) {
  EXPECT_THROW(correlation_C(corr(5, 3, 2, 1, 1, 1, 1, 1, 1, 0)), Error);  // q1 must divide (n1 r)^inf
  EXPECT_THROW(correlation_C(corr(5, 7, 1, 2, 1, 2, 1, 1, 1, 0)), Error);  // q2 shares a prime with r
}
