#pragma once

// Arithmetic inner loops used by the SVD, the dense solver, and the network
// trainer. Each kernel has a scalar reference implementation plus SIMD
// variants (AVX2 on x86-64, NEON on aarch64) selected at runtime; the test
// suite checks the variants against the scalar reference on random data.
//
// Backend selection: autodetected once, overridable with the environment
// variable CRACKSCAT_SIMD=scalar|avx2|neon or with set_backend() (tests).

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace crackscat::kern {

using cdouble = std::complex<double>;

std::string_view active_backend();
bool set_backend(std::string_view name);  // false if the variant is unavailable
std::vector<std::string_view> available_backends();

// --- real f64 -------------------------------------------------------------
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
// dx[i] = dy[i] * (1 - y[i]^2), the tanh chain-rule factor
void tanh_backward(const double* y, const double* dy, double* dx, std::size_t n);
// one ADAM update; bc1 = 1-beta1^t and bc2 = 1-beta2^t are the bias corrections
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bc1, double bc2);

// --- complex f64 ----------------------------------------------------------
cdouble zdotc(const cdouble* x, const cdouble* y, std::size_t n);  // sum conj(x)*y
void zaxpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n);
double znrm2sq(const cdouble* x, std::size_t n);
// plane rotation with real c and complex s, c^2 + |s|^2 = 1:
//   x' = c*x - conj(s)*y ;  y' = s*x + c*y
void zrot(cdouble* x, cdouble* y, std::size_t n, double c, cdouble s);

}  // namespace crackscat::kern
