#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sumcheck/oscillatory.hpp"

namespace sumcheck {

struct TransformValue {
  cplx value;
  double error = 0;
  double tau_lo = 0, tau_hi = 0;  // retained tau range, when there is one
  i64 nodes = 0;
};

struct TauOptions {
  double trunc = 1e-12;  // drop the tau range where the integrand is below trunc * peak
  double refine = 1;     // scales every grid density
};

// I^{+-}(x, q, zeta): Bessel form for x <= 1, oscillatory form beyond
TransformValue frak_i(int sign, double x, i64 q, double zeta, const OscParams& p);

// J^{+-}(x, q, zeta), tau integral over the retained window
TransformValue frak_j(int sign, double x, i64 q, double zeta, const OscParams& p, const TauOptions& opt = {});

using IFunction = std::function<cplx(double zeta)>;

// R^{+-,+-}(y1, y2, q) as a function of xi, with y2 = y2_unit * xi. The zeta
// integral is done once; each xi only costs a sum over the tau grid.
class RProfile {
 public:
  RProfile(int sign_i, int sign_j, double y1, double y2_unit, i64 q, const OscParams& p, IFunction ifn = {},
           const TauOptions& opt = {}, double xi_log_max = 0);
  cplx at(double xi) const;
  TransformValue value() const;  // xi = 1
  // largest |tau| carrying more than rel * peak
  double tau_extent(double rel) const;
  i64 zeta_nodes() const { return zeta_nodes_; }

 private:
  double t0_ = 0, h_ = 0;
  std::vector<cplx> F_;
  double err_ = 0;
  i64 zeta_nodes_ = 0;
};

TransformValue frak_r(int sign_i, int sign_j, double y1, double y2, i64 q, const OscParams& p, IFunction ifn = {},
                      const TauOptions& opt = {});

enum class DecayVariant { H, K };

struct DecayReport {
  std::string variant;
  int sign_i = -1, sign_j = 1;
  std::vector<double> X;
  std::vector<cplx> values;
  double band = 0;  // Q / C
  double peak = 0, X_peak = 0;
  double tail_ratio = 0;  // max_{|X| > 10 band} |H| / max_{|X| <= band} |H|
  double h0 = 0;          // |H(0)|
  double c_over_q = 0;    // C / Q
  double dual_mass_X = 0;  // |X| holding 99.9% of sum |H|^2 over the grid
  bool pass = false;
};

std::vector<double> default_x_grid(const OscParams& p);
DecayReport h_decay_scan(const OscParams& p, const std::vector<double>& X_grid, DecayVariant variant = DecayVariant::H,
                         int sign_i = -1, int sign_j = 1, const TauOptions& opt = {});

struct LocalizationReport {
  double A = 0, Xi = 0;
  double window_lo = 0, window_hi = 0;
  double mass_fraction = 0;  // share of int |W^dagger|^2 dtau inside the window
  double max_ratio_to_bound = 0;  // max |W^dagger| (1 + |tau|)^{1/2}
};

// scans tau -> W^dagger(A, 1/2 - i tau) and measures the localization |tau| in [Xi/4, 4 Xi], Xi = 2 pi A
LocalizationReport w_dagger_localization(double A, const SmoothWeight& W, double step = 0.5);

}  // namespace sumcheck
