// special_functions.hpp: Gamma and Bessel J for complex argument/order.

#pragma once

#include <complex>

namespace dicke {

using Complex = std::complex<double>;

// Gamma(z) from a Lanczos approximation (g = 7, 9 terms), evaluated through
// its logarithm; reflection Gamma(z) Gamma(1-z) = pi / sin(pi z) is used for
// Re z < 1/2. Relative accuracy ~1e-13 for |Im z| <= 50. Throws
// ValidationError at the poles z = 0, -1, -2, ...
Complex complex_gamma(Complex z);

// log Gamma(z) for Re z >= 1/2 (principal branch of the Lanczos form).
Complex log_gamma_right(Complex z);

// 1 / Gamma(z); zero at the poles.
Complex reciprocal_gamma(Complex z);

// J_nu(x) for complex order and real x > 0 from its power series
//   sum_k (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)),
// accumulated in quad precision (the terms cancel strongly for x >~ 10).
// Stops once |term| < 1e-16 |partial sum|; throws NumericalError if that has
// not happened after 500 terms.
Complex bessel_j(Complex nu, double x);

// Large-x form sqrt(2 / (pi x)) cos(x - pi nu / 2 - pi / 4). Diagnostic only;
// bessel_j never switches to it.
Complex bessel_j_asymptotic(Complex nu, double x);

}  // namespace dicke
