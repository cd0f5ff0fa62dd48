#include <gtest/gtest.h>

#include <cmath>

#include "sumcheck/characters.hpp"

using namespace sumcheck;

namespace {
bool near(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

// ===========================================================================
// enumeration
// ===========================================================================

TEST(Characters, PrimitiveRoots) {
  EXPECT_EQ(primitive_root(3), 2);
  EXPECT_EQ(primitive_root(7), 3);
  EXPECT_EQ(primitive_root(23), 5);
  EXPECT_EQ(primitive_root(41), 6);
}

TEST(Characters, ModThree) {
  auto cs = enumerate_characters(3);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_TRUE(cs[0].is_principal());
  EXPECT_TRUE(near(cs[1](2), -1.0));
  EXPECT_EQ(cs[1](0), cplx(0, 0));
}

TEST(Characters, ModFiveQuadratic) {
  auto cs = enumerate_characters(5);
  ASSERT_EQ(cs.size(), 4u);
  int quadratic = 0;
  for (auto& c : cs)
    if (c.order() == 2) {
      ++quadratic;
      EXPECT_TRUE(near(c(2), -1.0));
      EXPECT_TRUE(near(c(4), 1.0));
    }
  EXPECT_EQ(quadratic, 1);
}

TEST(Characters, ModTwo) {
  auto cs = enumerate_characters(2);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(cs[0].is_principal());
  EXPECT_FALSE(cs[0].is_primitive());
}

TEST(Characters, NotPrime) { EXPECT_THROW(enumerate_characters(15), Error); }

TEST(Characters, GroupStructure) {
  for (i64 p : {3, 5, 7, 11, 13}) {
    auto cs = enumerate_characters(p);
    int principal = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].is_principal()) ++principal;
      EXPECT_EQ(cs[i].is_primitive(), !cs[i].is_principal());
      for (i64 a = 0; a < p; ++a)
        for (i64 b = 0; b < p; ++b) EXPECT_TRUE(near(cs[i](a * b), cs[i](a) * cs[i](b)));
      for (i64 a = 1; a < p; ++a) {
        cplx v = cs[i](a), w = 1.0;
        for (i64 k = 0; k < cs[i].order(); ++k) w *= v;
        EXPECT_TRUE(near(w, 1.0, 1e-11));
      }
      // distinct, and closed under products
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        double d = 0;
        for (i64 a = 0; a < p; ++a) d += std::abs(cs[i](a) - cs[j](a));
        EXPECT_GT(d, 1e-6);
      }
      for (std::size_t j = 0; j < cs.size(); ++j) {
        bool found = false;
        for (auto& c : cs) {
          double d = 0;
          for (i64 a = 0; a < p; ++a) d += std::abs(c(a) - cs[i](a) * cs[j](a));
          if (d < 1e-9) found = true;
        }
        EXPECT_TRUE(found);
      }
    }
    EXPECT_EQ(principal, 1);
  }
}

TEST(Characters, Orthogonality) {
  for (i64 p : {3, 5, 7, 11, 13, 97})
    for (auto& c : primitive_characters(p)) {
      ComplexAccumulator acc;
      for (i64 n = 0; n < p; ++n) acc += c(n);
      EXPECT_LE(std::abs(acc.value()), 1e-12);
    }
}

// ===========================================================================
// products and Gauss sums
// ===========================================================================

TEST(Characters, ProductQuadratics) {
  auto c3 = enumerate_characters(3)[1];
  auto c5 = enumerate_characters(5)[2];
  ASSERT_EQ(c5.order(), 2);
  auto c = product_character(c3, c5);
  EXPECT_EQ(c.modulus(), 15);
  EXPECT_TRUE(near(c(2), 1.0));
  EXPECT_TRUE(c.is_primitive());
  for (i64 n = 0; n < 15; ++n)
    if (n % 3 == 0 || n % 5 == 0) EXPECT_EQ(c(n), cplx(0, 0));
  auto pp = product_character(enumerate_characters(3)[0], enumerate_characters(5)[0]);
  EXPECT_TRUE(pp.is_principal());
  EXPECT_FALSE(pp.is_primitive());
  EXPECT_THROW(product_character(c3, c3), Error);
}

TEST(GaussSum, Examples) {
  auto q5 = enumerate_characters(5)[2];
  auto g = gauss_sum(q5).value;
  EXPECT_NEAR(g.real(), 2.2360679774997896, 1e-12);
  EXPECT_NEAR(g.imag(), 0.0, 1e-12);
  for (i64 p : {3, 5, 7, 11})
    EXPECT_TRUE(near(gauss_sum(enumerate_characters(p)[0]).value, -1.0));
  for (auto& c : primitive_characters(7)) EXPECT_NEAR(std::abs(gauss_sum(c).value), std::sqrt(7.0), 1e-10);
}

TEST(GaussSum, ConjugateProduct) {
  for (i64 p1 : {3, 5, 7})
    for (i64 p2 : {11, 13}) {
      for (auto& a : primitive_characters(p1))
        for (auto& b : primitive_characters(p2)) {
          auto c = product_character(a, b);
          cplx lhs = gauss_sum(c).value * gauss_sum(c.conj()).value;
          cplx rhs = c(-1) * static_cast<double>(c.modulus());
          EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(rhs));
          EXPECT_NEAR(std::abs(gauss_sum(c).value), std::sqrt(static_cast<double>(c.modulus())), 1e-10);
        }
    }
}

TEST(FourierExpansion, Examples) {
  auto q5 = enumerate_characters(5)[2];
  auto [l, r] = fourier_expand_check(q5, 2);
  EXPECT_TRUE(near(l, -1.0, 1e-10));
  EXPECT_TRUE(near(r, -1.0, 1e-10));
  auto c15 = product_character(enumerate_characters(3)[1], enumerate_characters(5)[1]);
  auto [l2, r2] = fourier_expand_check(c15, 5);
  EXPECT_EQ(l2, cplx(0, 0));
  EXPECT_LE(std::abs(r2), 1e-10);
  for (auto& c : primitive_characters(7)) {
    auto [a, b] = fourier_expand_check(c, 1);
    EXPECT_TRUE(near(a, 1.0, 1e-10));
    EXPECT_TRUE(near(b, 1.0, 1e-10));
  }
  EXPECT_THROW(fourier_expand_check(enumerate_characters(7)[0], 1), Error);
}

TEST(FourierExpansion, AllSmallModuli) {
  std::vector<DirichletCharacter> cs;
  for (i64 p : {3, 5, 7, 11, 13})
    for (auto& c : primitive_characters(p)) cs.push_back(c);
  for (auto [p1, p2] : {std::pair<i64, i64>{3, 5}, {3, 7}, {5, 7}})
    for (auto& a : primitive_characters(p1))
      for (auto& b : primitive_characters(p2)) cs.push_back(product_character(a, b));
  for (auto& c : cs)
    for (i64 m = 0; m < c.modulus(); ++m) {
      auto [l, r] = fourier_expand_check(c, m);
      EXPECT_LE(std::abs(l - r), 1e-10) << c.label() << " m=" << m;
    }
}

TEST(Characters, Labels) {
  auto c = product_character(DirichletCharacter::from_prime(3, 1), DirichletCharacter::from_prime(5, 2));
  EXPECT_EQ(c.label(), "(3,1)x(5,2)");
  EXPECT_EQ(DirichletCharacter::from_prime(7, 2).conj().label(), "(7,4)");
}
