// NEON kernel variants for aarch64. The real-valued elementwise kernels use
// float64x2 lanes; the complex rotation kernels stay scalar here (their
// shuffle-heavy NEON forms buy little on 128-bit registers).

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "kernels_backend.hpp"

namespace crackscat::kern {
namespace neon {

static double dot(const double* x, const double* y, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

static void axpy(double a, const double* x, double* y, std::size_t n) {
    const float64x2_t av = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

static void tanh_backward(const double* y, const double* dy, double* dx, std::size_t n) {
    const float64x2_t ones = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t yv = vld1q_f64(y + i);
        float64x2_t t = vfmsq_f64(ones, yv, yv);
        vst1q_f64(dx + i, vmulq_f64(vld1q_f64(dy + i), t));
    }
    for (; i < n; ++i) dx[i] = dy[i] * (1.0 - y[i] * y[i]);
}

static void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                        double lr, double beta1, double beta2, double eps, double bc1,
                        double bc2) {
    const float64x2_t b1 = vdupq_n_f64(beta1), b1c = vdupq_n_f64(1.0 - beta1);
    const float64x2_t b2 = vdupq_n_f64(beta2), b2c = vdupq_n_f64(1.0 - beta2);
    const float64x2_t lrv = vdupq_n_f64(lr), epsv = vdupq_n_f64(eps);
    const float64x2_t ibc1 = vdupq_n_f64(1.0 / bc1), ibc2 = vdupq_n_f64(1.0 / bc2);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t gv = vld1q_f64(g + i);
        float64x2_t mv = vfmaq_f64(vmulq_f64(b1c, gv), b1, vld1q_f64(m + i));
        float64x2_t vv = vfmaq_f64(vmulq_f64(b2c, vmulq_f64(gv, gv)), b2, vld1q_f64(v + i));
        vst1q_f64(m + i, mv);
        vst1q_f64(v + i, vv);
        float64x2_t denom = vaddq_f64(vsqrtq_f64(vmulq_f64(vv, ibc2)), epsv);
        float64x2_t step = vdivq_f64(vmulq_f64(lrv, vmulq_f64(mv, ibc1)), denom);
        vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

static cdouble zdotc(const cdouble* x, const cdouble* y, std::size_t n) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

static void zaxpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cdouble(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

static double znrm2sq(const cdouble* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    return dot(xd, xd, 2 * n);
}

static void zrot(cdouble* x, cdouble* y, std::size_t n, double c, cdouble s) {
    const double sr = s.real(), si = s.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        x[i] = cdouble(c * xr - (sr * yr + si * yi), c * xi - (sr * yi - si * yr));
        y[i] = cdouble((sr * xr - si * xi) + c * yr, (sr * xi + si * xr) + c * yi);
    }
}

bool supported() { return true; }  // NEON is baseline on aarch64

extern const Backend backend;
const Backend backend = {
    "neon", dot, axpy, tanh_backward, adam_update, zdotc, zaxpy, znrm2sq, zrot,
};

}  // namespace neon
}  // namespace crackscat::kern
