#include "sumcheck/arith.hpp"

#include <cmath>
#include <numeric>

namespace sumcheck {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NonCoprimeModuli: return "NonCoprimeModuli";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::NonUnitParameter: return "NonUnitParameter";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonCoprime: return "NonCoprime";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorCode::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode c, const std::string& what)
    : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}

bool is_prime(i64 n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (i64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<i64> prime_factors(i64 n) {
  std::vector<i64> out;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

i64 euler_phi(i64 n) {
  i64 r = n;
  for (i64 p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

int moebius(i64 n) {
  int r = 1;
  for (i64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      r = -r;
    }
  }
  if (n > 1) r = -r;
  return r;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> small, large;
  for (i64 d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

bool is_unit(i64 a, i64 q) { return std::gcd(mod(a, q), q) == 1; }

std::vector<i64> units(i64 q) {
  std::vector<i64> out;
  for (i64 a = 0; a < q; ++a)
    if (std::gcd(a, q) == 1) out.push_back(a);
  return out;
}

i64 mod_inverse(i64 a, i64 q) {
  if (q < 1) throw Error(ErrorCode::OutOfRange, "modulus must be >= 1");
  if (q == 1) return 0;
  // extended Euclid on (a mod q, q)
  i64 r0 = q, r1 = mod(a, q), s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 t = r0 / r1;
    i64 r2 = r0 - t * r1;
    r0 = r1;
    r1 = r2;
    i64 s2 = s0 - t * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1)
    throw Error(ErrorCode::NonInvertible,
                std::to_string(a) + " mod " + std::to_string(q) + " (gcd " + std::to_string(r0) + ")");
  return mod(s0, q);
}

std::vector<std::pair<i64, int>> moebius_divisor_scan(i64 q) {
  std::vector<std::pair<i64, int>> out;
  for (i64 d : divisors(q)) out.emplace_back(d, moebius(q / d));
  return out;
}

cplx additive_char(i64 a, i64 q) {
  i64 r = mod(a, q);
  if (r == 0) return {1.0, 0.0};
  if ((4 * r) % q == 0) {
    switch ((4 * r) / q) {
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // fold to (-1/2, 1/2] before scaling
  if (2 * r > q) r -= q;
  double t = kTwoPi * static_cast<double>(r) / static_cast<double>(q);
  return {std::cos(t), std::sin(t)};
}

RootTable::RootTable(i64 q) : q_(q), roots_(static_cast<std::size_t>(q)) {
  for (i64 k = 0; k < q; ++k) roots_[static_cast<std::size_t>(k)] = additive_char(k, q);
}

FactoredModulus::FactoredModulus(i64 p1, i64 p2) : m1(p1), m2(p2), m(p1 * p2) {
  if (!is_prime(p1) || p1 == 2) throw Error(ErrorCode::NotPrime, "M1 = " + std::to_string(p1) + " is not an odd prime");
  if (!is_prime(p2) || p2 == 2) throw Error(ErrorCode::NotPrime, "M2 = " + std::to_string(p2) + " is not an odd prime");
  if (p1 == p2) throw Error(ErrorCode::NonCoprimeModuli, "M1 = M2 = " + std::to_string(p1));
}

void ComplexAccumulator::step(double& s, double& c, double x) {
  double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

void ComplexAccumulator::add(cplx z) {
  step(re_, cre_, z.real());
  step(im_, cim_, z.imag());
}

}  // namespace sumcheck
