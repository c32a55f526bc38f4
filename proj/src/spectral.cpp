#include "crackscat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crackscat/kernels.hpp"

namespace crackscat::spectral {

namespace {

// One-sided cyclic Jacobi on the columns of W (column-major, ld = rows).
// For each pair (p, q) the rotation diagonalizes the 2x2 block of the Gram
// matrix W*W; V accumulates the same rotations starting from the identity.
struct JacobiResult {
    std::vector<cdouble> w;  // rows x n, column-major
    std::vector<cdouble> v;  // n x n, column-major
    int sweeps = 0;
    double offdiag = 0;  // last measured off-diagonal norm (failure reporting)
    bool converged = false;
};

JacobiResult one_sided_jacobi(const CMatrix& a) {
    const int m = a.rows, n = a.cols;
    JacobiResult r;
    r.w.assign(static_cast<size_t>(m) * n, cdouble(0));
    r.v.assign(static_cast<size_t>(n) * n, cdouble(0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) r.w[static_cast<size_t>(j) * m + i] = a(i, j);
    for (int j = 0; j < n; ++j) r.v[static_cast<size_t>(j) * n + j] = 1.0;

    constexpr double tol = 1e-15;
    constexpr int max_sweeps = 100;

    std::vector<double> colsq(n);
    for (int j = 0; j < n; ++j) colsq[j] = kern::znrm2sq(&r.w[static_cast<size_t>(j) * m], m);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cdouble* wp = &r.w[static_cast<size_t>(p) * m];
                cdouble* wq = &r.w[static_cast<size_t>(q) * m];
                const cdouble g = kern::zdotc(wp, wq, m);
                const double app = colsq[p], aqq = colsq[q];
                const double absg = std::abs(g);
                if (absg <= tol * std::sqrt(app * aqq) || absg == 0.0) continue;
                rotated = true;
                // Rotation zeroing the off-diagonal of [[app, g], [conj g, aqq]]
                const double zeta = (aqq - app) / (2.0 * absg);
                const double t = (zeta >= 0 ? 1.0 : -1.0)
                                 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cdouble s = (t * c / absg) * g;  // t*c*exp(i*arg(g))
                kern::zrot(wp, wq, m, c, s);
                kern::zrot(&r.v[static_cast<size_t>(p) * n], &r.v[static_cast<size_t>(q) * n], n,
                           c, s);
                colsq[p] = app - t * absg;
                colsq[q] = aqq + t * absg;
            }
        }
        if ((sweep & 3) == 3) {  // refresh cached norms against drift
            for (int j = 0; j < n; ++j)
                colsq[j] = kern::znrm2sq(&r.w[static_cast<size_t>(j) * m], m);
        }
        if (!rotated) {
            r.sweeps = sweep + 1;
            r.converged = true;
            return r;
        }
    }
    double off = 0;
    for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q)
            off += std::norm(kern::zdotc(&r.w[static_cast<size_t>(p) * m],
                                         &r.w[static_cast<size_t>(q) * m], m));
    r.offdiag = std::sqrt(off);
    r.sweeps = max_sweeps;
    return r;
}

SingularSystem svd_tall(const CMatrix& a) {
    const int m = a.rows, n = a.cols;
    JacobiResult jr = one_sided_jacobi(a);
    if (!jr.converged)
        throw Error("svd: Jacobi sweeps did not converge after 100 sweeps, off-diagonal norm "
                    + std::to_string(jr.offdiag));

    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j)
        sig[j] = std::sqrt(kern::znrm2sq(&jr.w[static_cast<size_t>(j) * m], m));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return sig[i] > sig[j]; });

    SingularSystem out;
    out.sigma.resize(n);
    out.left = CMatrix(m, n);
    out.right = CMatrix(n, n);
    const double smax = sig.empty() ? 0.0 : sig[order[0]];
    for (int jj = 0; jj < n; ++jj) {
        const int j = order[jj];
        out.sigma[jj] = sig[j];
        const cdouble* wj = &jr.w[static_cast<size_t>(j) * m];
        const cdouble* vj = &jr.v[static_cast<size_t>(j) * n];
        // left vector = A r / sigma; columns of W ARE A r, so normalize them.
        // Below the rank cutoff the direction is meaningless; leave zeros.
        if (sig[j] > 1e-14 * smax && sig[j] > 0) {
            out.rank++;
            const double inv = 1.0 / sig[j];
            for (int i = 0; i < m; ++i) out.left(i, jj) = wj[i] * inv;
        }
        for (int i = 0; i < n; ++i) out.right(i, jj) = vj[i];
    }
    return out;
}

}  // namespace

SingularSystem svd(const CMatrix& a) {
    if (a.rows <= 0 || a.cols <= 0) throw Error("svd: empty matrix");
    for (const cdouble& z : a.data)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("svd: non-finite entry");
    if (a.rows >= a.cols) return svd_tall(a);
    // Wide case: decompose the adjoint and swap the frames.
    SingularSystem t = svd_tall(a.adjoint());
    SingularSystem out;
    out.sigma = std::move(t.sigma);
    out.left = std::move(t.right);
    out.right = std::move(t.left);
    out.rank = t.rank;
    return out;
}

LeadingSubspace leading_subspace(const CMatrix& a, int n) {
    const int kmax = std::min(a.rows, a.cols);
    if (n < 1 || n > kmax) throw Error("leading_subspace: N out of range");
    SingularSystem full = svd(a);
    LeadingSubspace out;
    out.sigma.assign(full.sigma.begin(), full.sigma.begin() + n);
    out.left = CMatrix(a.rows, n);
    out.right = CMatrix(a.cols, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < a.rows; ++i) out.left(i, j) = full.left(i, j);
        for (int i = 0; i < a.cols; ++i) out.right(i, j) = full.right(i, j);
    }
    if (n < kmax && !full.sigma.empty())
        out.degenerate_gap = (full.sigma[n - 1] - full.sigma[n]) <= 1e-12 * full.sigma[0];
    return out;
}

CMatrix frame_projector(const CMatrix& frame, int ncols) {
    const int n = frame.rows;
    CMatrix p(n, n);
    for (int c = 0; c < ncols; ++c)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p(i, j) += frame(i, c) * std::conj(frame(j, c));
    return p;
}

}  // namespace crackscat::spectral
