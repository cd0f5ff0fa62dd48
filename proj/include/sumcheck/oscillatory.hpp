#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sumcheck/arith.hpp"
#include "sumcheck/weights.hpp"

namespace sumcheck {

struct SpectralParams {
  enum class Kind { Holomorphic, Maass, GL3 };
  Kind kind = Kind::Holomorphic;
  int k = 12;                 // holomorphic weight
  double mu = 0;              // Maass spectral parameter
  int eps = 1;                // Maass reflection eigenvalue
  std::array<cplx, 3> mus{};  // GL3 Langlands parameters

  static SpectralParams holomorphic(int k = 12);
  static SpectralParams maass(double mu, int eps = 1);
  static SpectralParams gl3(cplx m1 = 0, cplx m2 = 0, cplx m3 = 0);
  void validate() const;
  std::string describe() const;
};

// Parameters shared by the transforms. M1 and M2 are plain scale factors here.
struct OscParams {
  double N = 1e4;
  double m1 = 10, m2 = 7;
  double Q = 0;  // sqrt(N / M1)
  i64 q = 4, qp = 4;
  i64 r = 1;
  double L = 1000;
  double m = 1000, mp = 1200;
  double zeta_scale = 1;  // U(zeta / zeta_scale)
  double tol = 1e-9;
  SmoothWeight V = SmoothWeight::bump(1, 2);
  SmoothWeight W = SmoothWeight::plateau(0.5, 1, 2, 2.5);
  SmoothWeight U = SmoothWeight::symmetric(1, 2);
  SmoothWeight phi = SmoothWeight::plateau(2.0 / 3.0, 1, 2, 3);
  SpectralParams gl2 = SpectralParams::holomorphic(12);
  SpectralParams gl3 = SpectralParams::gl3();

  static OscParams toy();
  void validate() const;
  double M() const { return m1 * m2; }
  // zeta N / (q Q M1), the frequency attached to zeta
  double freq(i64 qq) const { return N / (static_cast<double>(qq) * Q * m1); }
};

// J_g^{+-}(x)
cplx bessel_kernel(int sign, double x, const SpectralParams& sp);

// Psi^{+-}(x) = int phi(y) J_g^{+-}(4 pi sqrt(xy)) dy
cplx psi_transform(int sign, double x, const SmoothWeight& phi, const SpectralParams& sp, double tol = 1e-11);

// Large-x expansion of Psi^+ keeping the first terms + 1 powers of (xy)^{-1/2}
cplx psi_asymptotic(double x, const SmoothWeight& phi, const SpectralParams& sp, int terms = 0);

// tau(n) for 0 <= n <= budget (tau(0) = 0), exact
std::vector<__int128> tau_coefficients(i64 budget);
std::vector<__int128> tau_coefficients_cached(i64 budget, const std::string& path);
void save_tau_table(const std::string& path, const std::vector<__int128>& t);
std::vector<__int128> load_tau_table(const std::string& path);
std::string int128_to_string(__int128 v);

struct VoronoiResult {
  cplx lhs, rhs;
  double diff = 0;
  i64 dual_terms = 0;
  double truncation_estimate = 0;
  bool pass = false;
};

// Voronoi identity for Ramanujan's Delta at one modulus c; dual transforms are
// shared across all residues a.
class Gl2Voronoi {
 public:
  // table: tau(0..) to reuse; recomputed when shorter than needed
  Gl2Voronoi(const SmoothWeight& phi, double N, i64 c, i64 budget = 20000, double tol = 1e-5,
             std::vector<__int128> table = {});
  VoronoiResult check(i64 a);
  i64 dual_terms() const { return static_cast<i64>(psi_.size()); }

 private:
  void extend(double lhs_scale);
  SmoothWeight phi_;
  double N_;
  i64 c_, budget_;
  double tol_;
  std::vector<__int128> tau_;
  std::vector<double> psi_;  // N/c * lambda(m) * Psi^+(m N / c^2), m = 1..
  double tail_ = 0;
};

VoronoiResult gl2_voronoi_check(i64 a, i64 c, const SmoothWeight& phi, double N, i64 coeff_budget = 20000);

struct Psi0Result {
  cplx numeric;
  bool predicted_support = false;
  double threshold = 0;  // 1e-4 x^{-1/4}
  double resonance = 0;  // (zeta N / (q Q M1))^2
};

Psi0Result stationary_phase_psi0(int sign, double x, const OscParams& p, double zeta, double window = 16);

// ratio-of-Gammas factor of the GL3 Voronoi formula
cplx gamma_pm(int sign, cplx s, const SpectralParams& sp);

// W^dagger(A, s) = int W(v) v^{s-1} e(-A v) dv
cplx w_dagger(double A, cplx s, const SmoothWeight& W, double tol = 1e-12);

}  // namespace sumcheck
