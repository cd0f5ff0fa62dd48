#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sumcheck/arith.hpp"

namespace sumcheck {

// A character mod a product of distinct primes. Each prime component is
// labelled by j, with chi(g^k) = e(jk/(p-1)) for the smallest primitive root g.
class DirichletCharacter {
 public:
  DirichletCharacter() = default;

  static DirichletCharacter from_prime(i64 p, i64 index);

  i64 modulus() const { return modulus_; }
  bool is_primitive() const { return primitive_; }
  bool is_principal() const;
  i64 order() const { return order_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<std::pair<i64, i64>>& components() const { return components_; }

  cplx operator()(i64 n) const { return values_[static_cast<std::size_t>(mod(n, modulus_))]; }

  DirichletCharacter conj() const;
  std::string label() const;

 private:
  friend DirichletCharacter product_character(const DirichletCharacter&, const DirichletCharacter&);

  i64 modulus_ = 1;
  bool primitive_ = false;
  i64 order_ = 1;
  std::vector<cplx> values_{cplx{1.0, 0.0}};
  std::vector<std::pair<i64, i64>> components_;
};

struct GaussSumValue {
  std::vector<std::pair<i64, i64>> character;
  i64 modulus = 1;
  cplx value;
};

i64 primitive_root(i64 p);

std::vector<DirichletCharacter> enumerate_characters(i64 p);
std::vector<DirichletCharacter> primitive_characters(i64 p);

DirichletCharacter product_character(const DirichletCharacter& a, const DirichletCharacter& b);

GaussSumValue gauss_sum(const DirichletCharacter& chi);

// chi(m) against (1/tau(conj chi)) sum_c conj(chi)(c) e(cm/M)
std::pair<cplx, cplx> fourier_expand_check(const DirichletCharacter& chi, i64 m);

}  // namespace sumcheck
