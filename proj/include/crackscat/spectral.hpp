#pragma once

// Complex SVD for small dense matrices and leading singular-subspace
// extraction. The decomposition is the cyclic Jacobi eigendecomposition of
// the Gram matrix A*A, applied in its one-sided (factored) form: rotations
// act on the columns of a working copy of A and accumulate the right
// vectors, which keeps the left frame orthonormal to machine precision even
// for ill-conditioned input.

#include <vector>

#include "crackscat/common.hpp"

namespace crackscat::spectral {

struct SingularSystem {
    std::vector<double> sigma;  // descending
    CMatrix left;               // rows x k, orthonormal columns
    CMatrix right;              // cols x k, orthonormal columns
    int rank = 0;               // count of sigma > 1e-14 * sigma[0]

    // A ~= sum_i sigma[i] * left[:,i] * right[:,i]^H
};

SingularSystem svd(const CMatrix& a);

struct LeadingSubspace {
    std::vector<double> sigma;  // the N largest
    CMatrix left;               // rows x N
    CMatrix right;              // cols x N
    bool degenerate_gap = false;  // sigma_N - sigma_{N+1} <= 1e-12 sigma_1
};

LeadingSubspace leading_subspace(const CMatrix& a, int n);

// n x n projector onto the span of the first ncols columns of frame.
CMatrix frame_projector(const CMatrix& frame, int ncols);

}  // namespace crackscat::spectral
