#pragma once

// Shared plumbing: error type, complex matrix container, seeded RNG streams,
// and the bounded thread helper honoring CRACKSCAT_THREADS.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace crackscat {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major complex matrix. Everything in this project is small
// (at most a few hundred rows/columns), so a flat vector is all we need.
struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cdouble> data;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c) {}

    cdouble& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
    const cdouble& operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

    CMatrix adjoint() const {
        CMatrix t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = std::conj((*this)(i, j));
        return t;
    }

    double frobenius() const {
        double s = 0;
        for (const cdouble& z : data) s += std::norm(z);
        return std::sqrt(s);
    }
};

inline std::vector<cdouble> matvec(const CMatrix& a, const std::vector<cdouble>& x) {
    if (static_cast<int>(x.size()) != a.cols) throw Error("matvec: dimension mismatch");
    std::vector<cdouble> y(a.rows);
    for (int i = 0; i < a.rows; ++i) {
        cdouble s = 0;
        for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double norm2(const std::vector<cdouble>& x) {
    double s = 0;
    for (const cdouble& z : x) s += std::norm(z);
    return std::sqrt(s);
}

// splitmix64, used to spread seeds into independent per-index streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// mt19937_64 with explicit output transforms so the byte stream of every
// artifact is a pure function of the seed, independent of libstdc++'s
// distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // derived stream for (index, lane), independent of draws on this stream
    static Rng sub(uint64_t seed, uint64_t index, uint64_t lane = 0) {
        return Rng(mix64(mix64(seed ^ mix64(index + 1)) + lane));
    }

    uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // index in [0, n)
    uint64_t uniform_index(uint64_t n) {
        // rejection-free is unnecessary here; n is tiny compared to 2^64
        return eng_() % n;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * kPi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// Number of worker threads: CRACKSCAT_THREADS caps it, 0 or unset = auto.
int thread_count();

// Runs fn(i) for i in [0, n). Each index must be independent; results land in
// caller-owned slots so the outcome does not depend on scheduling.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace crackscat
