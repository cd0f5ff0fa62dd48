#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sumcheck {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorCode {
  NonInvertible,
  NotPrime,
  NonCoprimeModuli,
  NotPrimitive,
  NonUnitParameter,
  NonUnit,
  OutOfRange,
  QuadratureFailure,
  NonCoprime,
  InvariantViolation,
  DivisibilityViolation,
  TruncationBudgetExceeded,
  PoleProximity,
  ConfigInvalid,
  IoError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// least non-negative residue
inline i64 mod(i64 a, i64 q) {
  i64 r = a % q;
  return r < 0 ? r + q : r;
}

inline i64 mulmod(i64 a, i64 b, i64 q) {
  return static_cast<i64>(static_cast<__int128>(mod(a, q)) * mod(b, q) % q);
}

bool is_prime(i64 n);
i64 euler_phi(i64 n);
int moebius(i64 n);
std::vector<i64> divisors(i64 n);
std::vector<i64> prime_factors(i64 n);
std::vector<i64> units(i64 q);
bool is_unit(i64 a, i64 q);

i64 mod_inverse(i64 a, i64 q);

// (d, mu(q/d)) for every d | q, d ascending
std::vector<std::pair<i64, int>> moebius_divisor_scan(i64 q);

// e(a/q); exact at multiples of 1/4
cplx additive_char(i64 a, i64 q);

// e(k/q) for k in [0, q)
class RootTable {
 public:
  explicit RootTable(i64 q);
  i64 modulus() const { return q_; }
  cplx operator()(i64 a) const { return roots_[static_cast<std::size_t>(mod(a, q_))]; }

 private:
  i64 q_;
  std::vector<cplx> roots_;
};

struct FactoredModulus {
  i64 m1 = 0;
  i64 m2 = 0;
  i64 m = 0;

  FactoredModulus() = default;
  FactoredModulus(i64 p1, i64 p2);
};

// Neumaier summation on both components
class ComplexAccumulator {
 public:
  void add(cplx z);
  ComplexAccumulator& operator+=(cplx z) {
    add(z);
    return *this;
  }
  cplx value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void step(double& s, double& c, double x);
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

}  // namespace sumcheck
