#pragma once

#include <string>

namespace sumcheck {

// Compactly supported C-infinity weight: either a bump on [lo, hi] or a
// plateau equal to 1 on [flat_lo, flat_hi] with smooth ramps out to [lo, hi].
class SmoothWeight {
 public:
  static SmoothWeight bump(double lo, double hi);
  static SmoothWeight plateau(double lo, double flat_lo, double flat_hi, double hi);
  // even weight, 1 on |x| <= inner, 0 on |x| >= outer
  static SmoothWeight symmetric(double inner, double outer);

  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double scale() const { return scale_; }
  bool is_symmetric() const { return symmetric_; }

  SmoothWeight scaled(double c) const;
  // rescaled so that its integral is 1
  SmoothWeight normalized() const;
  double integral() const;
  std::string describe() const;

 private:
  enum class Kind { Bump, Plateau };
  Kind kind_ = Kind::Bump;
  bool symmetric_ = false;
  double lo_ = 0, flat_lo_ = 0, flat_hi_ = 0, hi_ = 1, scale_ = 1;
};

// smooth step: 0 for t <= 0, 1 for t >= 1
double smooth_step(double t);

}  // namespace sumcheck
