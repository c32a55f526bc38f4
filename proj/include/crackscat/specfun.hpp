#pragma once

// Cylinder functions of order 0 and 1 for real positive arguments: the
// Helmholtz kernel (i/4) H1_0(k r) and its gradient need J0, J1, Y0, Y1.
//
// Scheme: ascending power series for x <= 12, Hankel asymptotic expansion
// (amplitude/phase sums, optimally truncated) beyond. Absolute accuracy is
// ~1e-12 across [0, 50], comfortably tighter than any quadrature in the
// pipeline; the test suite checks against an extended-precision series
// oracle and the Wronskian identity.

#include <complex>

namespace crackscat::specfun {

double bessel_j0(double x);  // x >= 0
double bessel_j1(double x);  // x >= 0
double bessel_y0(double x);  // x > 0, throws std::domain_error otherwise
double bessel_y1(double x);  // x > 0, throws std::domain_error otherwise

std::complex<double> hankel1_0(double x);  // J0 + i Y0, x > 0
std::complex<double> hankel1_1(double x);  // J1 + i Y1, x > 0

}  // namespace crackscat::specfun
