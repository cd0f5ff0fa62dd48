#include "sumcheck/weights.hpp"

#include <cmath>
#include <sstream>

#include "sumcheck/quadrature.hpp"

namespace sumcheck {

double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

SmoothWeight SmoothWeight::bump(double lo, double hi) {
  SmoothWeight w;
  w.kind_ = Kind::Bump;
  w.lo_ = lo;
  w.hi_ = hi;
  return w;
}

SmoothWeight SmoothWeight::plateau(double lo, double flat_lo, double flat_hi, double hi) {
  SmoothWeight w;
  w.kind_ = Kind::Plateau;
  w.lo_ = lo;
  w.flat_lo_ = flat_lo;
  w.flat_hi_ = flat_hi;
  w.hi_ = hi;
  return w;
}

SmoothWeight SmoothWeight::symmetric(double inner, double outer) {
  SmoothWeight w = plateau(-outer, -inner, inner, outer);
  w.symmetric_ = true;
  return w;
}

double SmoothWeight::operator()(double x) const {
  if (x <= lo_ || x >= hi_) return 0.0;
  if (kind_ == Kind::Bump) {
    // exp(4 - 1/(u(1-u))) on u in (0, 1), peak 1
    const double u = (x - lo_) / (hi_ - lo_);
    return scale_ * std::exp(4.0 - 1.0 / (u * (1.0 - u)));
  }
  if (x < flat_lo_) return scale_ * smooth_step((x - lo_) / (flat_lo_ - lo_));
  if (x > flat_hi_) return scale_ * smooth_step((hi_ - x) / (hi_ - flat_hi_));
  return scale_;
}

SmoothWeight SmoothWeight::scaled(double c) const {
  SmoothWeight w = *this;
  w.scale_ *= c;
  return w;
}

double SmoothWeight::integral() const {
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-14;
  o.initial_intervals = 16;
  return integrate([this](double x) { return (*this)(x); }, lo_, hi_, o).value;
}

SmoothWeight SmoothWeight::normalized() const { return scaled(1.0 / integral()); }

std::string SmoothWeight::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (kind_ == Kind::Bump)
    os << "bump[" << lo_ << "," << hi_ << "]";
  else if (symmetric_)
    os << "symmetric-plateau[" << flat_hi_ << "," << hi_ << "]";
  else
    os << "plateau[" << lo_ << "," << flat_lo_ << "," << flat_hi_ << "," << hi_ << "]";
  if (scale_ != 1.0) os << "*" << scale_;
  return os.str();
}

}  // namespace sumcheck
