#include "sumcheck/characters.hpp"

#include <numeric>

namespace sumcheck {

i64 primitive_root(i64 p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  if (p == 2) return 1;
  auto fs = prime_factors(p - 1);
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 f : fs) {
      i64 e = (p - 1) / f, x = 1, b = g;
      while (e) {
        if (e & 1) x = mulmod(x, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
      }
      if (x == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;
}

DirichletCharacter DirichletCharacter::from_prime(i64 p, i64 index) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  DirichletCharacter c;
  c.modulus_ = p;
  i64 n = p - 1;
  i64 j = mod(index, n);
  c.values_.assign(static_cast<std::size_t>(p), cplx{0.0, 0.0});
  i64 g = primitive_root(p), x = 1;
  for (i64 k = 0; k < n; ++k) {
    c.values_[static_cast<std::size_t>(x)] = additive_char(j * k, n);
    x = mulmod(x, g, p);
  }
  c.order_ = n / std::gcd(j, n);
  c.primitive_ = j != 0;
  c.components_ = {{p, j}};
  return c;
}

bool DirichletCharacter::is_principal() const {
  for (auto& [p, j] : components_)
    if (j != 0) return false;
  return true;
}

DirichletCharacter DirichletCharacter::conj() const {
  DirichletCharacter c = *this;
  for (auto& v : c.values_) v = std::conj(v);
  for (auto& [p, j] : c.components_) j = mod(-j, p - 1);
  return c;
}

std::string DirichletCharacter::label() const {
  std::string s;
  for (auto& [p, j] : components_) {
    if (!s.empty()) s += "x";
    s += "(" + std::to_string(p) + "," + std::to_string(j) + ")";
  }
  return s.empty() ? "(1,0)" : s;
}

std::vector<DirichletCharacter> enumerate_characters(i64 p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p));
  std::vector<DirichletCharacter> out;
  for (i64 j = 0; j < p - 1; ++j) out.push_back(DirichletCharacter::from_prime(p, j));
  return out;
}

std::vector<DirichletCharacter> primitive_characters(i64 p) {
  auto all = enumerate_characters(p);
  return {all.begin() + 1, all.end()};
}

DirichletCharacter product_character(const DirichletCharacter& a, const DirichletCharacter& b) {
  i64 m1 = a.modulus(), m2 = b.modulus();
  if (std::gcd(m1, m2) != 1)
    throw Error(ErrorCode::NonCoprimeModuli, std::to_string(m1) + ", " + std::to_string(m2));
  DirichletCharacter c;
  c.modulus_ = m1 * m2;
  c.values_.assign(static_cast<std::size_t>(c.modulus_), cplx{0.0, 0.0});
  for (i64 n = 0; n < c.modulus_; ++n) c.values_[static_cast<std::size_t>(n)] = a(n) * b(n);
  c.primitive_ = a.is_primitive() && b.is_primitive();
  c.order_ = std::lcm(a.order(), b.order());
  c.components_ = a.components_;
  c.components_.insert(c.components_.end(), b.components_.begin(), b.components_.end());
  return c;
}

GaussSumValue gauss_sum(const DirichletCharacter& chi) {
  i64 q = chi.modulus();
  ComplexAccumulator acc;
  for (i64 x = 0; x < q; ++x) acc += chi(x) * additive_char(x, q);
  return {chi.components(), q, acc.value()};
}

std::pair<cplx, cplx> fourier_expand_check(const DirichletCharacter& chi, i64 m) {
  if (!chi.is_primitive()) throw Error(ErrorCode::NotPrimitive, chi.label());
  i64 q = chi.modulus();
  DirichletCharacter cb = chi.conj();
  ComplexAccumulator acc;
  for (i64 c = 0; c < q; ++c) acc += cb(c) * additive_char(c * m, q);
  return {chi(m), acc.value() / gauss_sum(cb).value};
}

}  // namespace sumcheck
