#include "crackscat/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

#include "crackscat/common.hpp"
#include "kernels_backend.hpp"

namespace crackscat::kern {

// ------------------------------------------------------- scalar reference --

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void tanh_backward(const double* y, const double* dy, double* dx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (1.0 - y[i] * y[i]);
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

cdouble zdotc(const cdouble* x, const cdouble* y, std::size_t n) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void zaxpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cdouble(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

double znrm2sq(const cdouble* x, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

void zrot(cdouble* x, cdouble* y, std::size_t n, double c, cdouble s) {
    const double sr = s.real(), si = s.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        // conj(s)*y = (sr*yr + si*yi) + i(sr*yi - si*yr)
        x[i] = cdouble(c * xr - (sr * yr + si * yi), c * xi - (sr * yi - si * yr));
        // s*x = (sr*xr - si*xi) + i(sr*xi + si*xr)
        y[i] = cdouble((sr * xr - si * xi) + c * yr, (sr * xi + si * xr) + c * yi);
    }
}

}  // namespace scalar

// ------------------------------------------------------------ dispatching --

static constexpr Backend kScalarBackend = {
    "scalar",          scalar::dot,   scalar::axpy,     scalar::tanh_backward,
    scalar::adam_update, scalar::zdotc, scalar::zaxpy,  scalar::znrm2sq,
    scalar::zrot,
};

#if defined(CRACKSCAT_BUILD_AVX2)
namespace avx2 {
bool supported();
extern const Backend backend;
}  // namespace avx2
#endif
#if defined(CRACKSCAT_BUILD_NEON)
namespace neon {
bool supported();
extern const Backend backend;
}  // namespace neon
#endif

static const Backend* pick_default() {
    if (const char* env = std::getenv("CRACKSCAT_SIMD")) {
        std::string_view want(env);
        if (want == "scalar") return &kScalarBackend;
#if defined(CRACKSCAT_BUILD_AVX2)
        if (want == "avx2" && avx2::supported()) return &avx2::backend;
#endif
#if defined(CRACKSCAT_BUILD_NEON)
        if (want == "neon" && neon::supported()) return &neon::backend;
#endif
        // unknown or unavailable request falls through to autodetection
    }
#if defined(CRACKSCAT_BUILD_AVX2)
    if (avx2::supported()) return &avx2::backend;
#endif
#if defined(CRACKSCAT_BUILD_NEON)
    if (neon::supported()) return &neon::backend;
#endif
    return &kScalarBackend;
}

static std::atomic<const Backend*>& active_slot() {
    static std::atomic<const Backend*> slot{pick_default()};
    return slot;
}

static const Backend& active() { return *active_slot().load(std::memory_order_relaxed); }

std::string_view active_backend() { return active().name; }

bool set_backend(std::string_view name) {
    if (name == "scalar") {
        active_slot().store(&kScalarBackend);
        return true;
    }
#if defined(CRACKSCAT_BUILD_AVX2)
    if (name == "avx2" && avx2::supported()) {
        active_slot().store(&avx2::backend);
        return true;
    }
#endif
#if defined(CRACKSCAT_BUILD_NEON)
    if (name == "neon" && neon::supported()) {
        active_slot().store(&neon::backend);
        return true;
    }
#endif
    return false;
}

std::vector<std::string_view> available_backends() {
    std::vector<std::string_view> v{"scalar"};
#if defined(CRACKSCAT_BUILD_AVX2)
    if (avx2::supported()) v.push_back("avx2");
#endif
#if defined(CRACKSCAT_BUILD_NEON)
    if (neon::supported()) v.push_back("neon");
#endif
    return v;
}

double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
void tanh_backward(const double* y, const double* dy, double* dx, std::size_t n) {
    active().tanh_backward(y, dy, dx, n);
}
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double beta1, double beta2, double eps, double bc1, double bc2) {
    active().adam_update(p, m, v, g, n, lr, beta1, beta2, eps, bc1, bc2);
}
cdouble zdotc(const cdouble* x, const cdouble* y, std::size_t n) { return active().zdotc(x, y, n); }
void zaxpy(cdouble a, const cdouble* x, cdouble* y, std::size_t n) { active().zaxpy(a, x, y, n); }
double znrm2sq(const cdouble* x, std::size_t n) { return active().znrm2sq(x, n); }
void zrot(cdouble* x, cdouble* y, std::size_t n, double c, cdouble s) {
    active().zrot(x, y, n, c, s);
}

}  // namespace crackscat::kern

// ------------------------------------------------------ thread utilities --

namespace crackscat {

int thread_count() {
    static int cached = [] {
        long want = 0;
        if (const char* env = std::getenv("CRACKSCAT_THREADS")) want = std::strtol(env, nullptr, 10);
        if (want <= 0) want = static_cast<long>(std::thread::hardware_concurrency());
        if (want < 1) want = 1;
        if (want > 256) want = 256;
        return static_cast<int>(want);
    }();
    return cached;
}

void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
    const int nt = thread_count();
    if (nt <= 1 || n < 2) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<int64_t>(nt, n));
    pool.reserve(spawn - 1);
    for (int t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace crackscat
