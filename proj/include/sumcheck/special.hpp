#pragma once

#include <complex>

#include "sumcheck/arith.hpp"

namespace sumcheck {

// J_n(x), integer n >= 0, x >= 0: series, Miller recurrence or Hankel expansion by regime
double bessel_j(int n, double x);
// J_nu(x) for complex order nu and x > 0
cplx bessel_j(cplx nu, double x);
// K_{i nu}(x) for real nu, x > 0; real valued
double bessel_k_imag(double nu, double x);

// log Gamma on a branch continuous away from the poles; exp() is what matters
cplx lgamma_complex(cplx z);
cplx gamma_complex(cplx z);
// 1/Gamma(z), entire
cplx rgamma_complex(cplx z);

}  // namespace sumcheck
