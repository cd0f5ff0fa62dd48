#include <gtest/gtest.h>

#include <cmath>

#include "sumcheck/arith.hpp"

using namespace sumcheck;

// ===========================================================================
// mod_inverse
// ===========================================================================

TEST(ModInverse, SmallExamples) {
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_EQ(mod_inverse(1, 9), 1);
  EXPECT_EQ(mod_inverse(-1, 7), 6);
}

TEST(ModInverse, NonInvertible) {
  try {
    mod_inverse(4, 6);
    FAIL() << "expected NonInvertible";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonInvertible);
  }
}

TEST(ModInverse, Involution) {
  for (i64 q = 2; q <= 60; ++q)
    for (i64 a : units(q)) {
      i64 x = mod_inverse(a, q);
      EXPECT_EQ(mod(a * x, q), 1);
      EXPECT_EQ(mod_inverse(x, q), a);
    }
}

// ===========================================================================
// Moebius / divisors
// ===========================================================================

TEST(Moebius, DivisorScan) {
  auto s6 = moebius_divisor_scan(6);
  std::vector<std::pair<i64, int>> want{{1, 1}, {2, -1}, {3, -1}, {6, 1}};
  EXPECT_EQ(s6, want);
  EXPECT_EQ(moebius_divisor_scan(1), (std::vector<std::pair<i64, int>>{{1, 1}}));
  bool found = false;
  for (auto [d, mu] : moebius_divisor_scan(12))
    if (d == 3) {
      found = true;
      EXPECT_EQ(mu, 0);
    }
  EXPECT_TRUE(found);
}

TEST(Moebius, SumOverDivisors) {
  for (i64 q = 1; q <= 200; ++q) {
    int s = 0;
    for (i64 d : divisors(q)) s += moebius(d);
    EXPECT_EQ(s, q == 1 ? 1 : 0) << q;
  }
}

TEST(Primality, TrialDivision) {
  std::vector<i64> primes;
  for (i64 n = 0; n < 60; ++n)
    if (is_prime(n)) primes.push_back(n);
  EXPECT_EQ(primes, (std::vector<i64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}));
  EXPECT_TRUE(is_prime(999983));
  EXPECT_FALSE(is_prime(999981));
}

// ===========================================================================
// additive characters
// ===========================================================================

TEST(AdditiveChar, Examples) {
  EXPECT_EQ(additive_char(0, 5), cplx(1, 0));
  EXPECT_EQ(additive_char(3, 6), cplx(-1, 0));
  EXPECT_EQ(additive_char(1, 4), cplx(0, 1));
}

TEST(AdditiveChar, Periodicity) {
  for (i64 q = 1; q <= 40; ++q)
    for (i64 a = -50; a <= 50; ++a) EXPECT_LE(std::abs(additive_char(a + q, q) - additive_char(a, q)), 1e-14);
}

TEST(AdditiveChar, Orthogonality) {
  for (i64 q = 1; q <= 50; ++q)
    for (i64 n = -200; n <= 200; ++n) {
      ComplexAccumulator acc;
      for (i64 b = 0; b < q; ++b) acc += additive_char(n * b, q);
      double want = n % q == 0 ? 1.0 : 0.0;
      EXPECT_LE(std::abs(acc.value() / static_cast<double>(q) - want), 1e-12) << q << " " << n;
    }
}

// ===========================================================================
// FactoredModulus / ComplexAccumulator
// ===========================================================================

TEST(FactoredModulus, Validates) {
  FactoredModulus M(3, 5);
  EXPECT_EQ(M.m, 15);
  EXPECT_THROW(FactoredModulus(3, 3), Error);
  EXPECT_THROW(FactoredModulus(4, 5), Error);
  EXPECT_THROW(FactoredModulus(2, 5), Error);
}

TEST(ComplexAccumulator, UnitTermsStayAccurate) {
  // N-th roots of unity sum to 0
  const i64 N = 100000;
  ComplexAccumulator acc;
  for (i64 k = 0; k < N; ++k) acc += additive_char(k, N);
  EXPECT_LE(std::abs(acc.value()), 1e-12 * N);
  ComplexAccumulator ones;
  for (i64 k = 0; k < N; ++k) ones += cplx(1.0, -1.0);
  EXPECT_EQ(ones.value(), cplx(N, -N));
}
