#pragma once

// Forward model: discretized single-layer operator on the crack, its
// parameter derivatives, incident fields, the dense collocation solver for
// the first-kind boundary integral equation, and field evaluation.

#include <functional>
#include <optional>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/geometry.hpp"

namespace crackscat::forward {

// Free-space Green function Phi(x, y) = (i/4) H1_0(k |x - y|).
cdouble green(double k, Vec2 x, Vec2 y);
// grad_y Phi(x, y) = (i k / 4) H1_1(k |x - y|) (x - y)/|x - y|, returned as
// the pair of components.
std::pair<cdouble, cdouble> green_grad_y(double k, Vec2 x, Vec2 y);

struct ForwardMatrix {
    CMatrix entries;  // n_obs x n_gamma
    CrackGeometry geom;
    SupportInterval support;
    QuadratureGrid grid;
    ObservationSet obs;
    double k = 1.5;
    bool scaled = true;  // whether (l/2) * pi/(n-1) is folded into the entries
};

// entries(i, j) = w_j * Phi(x_i, y(v_j)) * [(l/2) h if include_scale].
// Dropping the scale changes singular values only, never singular vectors.
ForwardMatrix assemble_forward_matrix(const CrackGeometry& geom, const SupportInterval& sup,
                                      const QuadratureGrid& grid, const ObservationSet& obs,
                                      double k, bool include_scale = true);

std::vector<cdouble> forward_apply(const ForwardMatrix& a, const std::vector<cdouble>& psi);

// d(entries)/d(theta) and d(entries)/d(a); same weights and scale factor.
std::pair<ForwardMatrix, ForwardMatrix> derivative_matrices(const CrackGeometry& geom,
                                                            const SupportInterval& sup,
                                                            const QuadratureGrid& grid,
                                                            const ObservationSet& obs, double k);

// Excitations of section "testing": plane wave, interior/exterior point
// source, or a directly prescribed density (case 4).
struct CaseSpec {
    int kind = 1;          // 1 plane wave, 2/3 point source, 4 forced density
    double eta_angle = 0;  // case 1: eta = (cos, sin)(eta_angle)
    Vec2 source{3, 0};     // cases 2 and 3
};

cdouble incident_field(const CaseSpec& cs, double k, Vec2 x);

// Desingularized density on a dense v-grid, with everything needed to
// evaluate the scattered field it radiates.
struct DensitySolution {
    CrackGeometry geom;
    SupportInterval support;
    double k = 1.5;
    std::vector<cdouble> psi;  // values of psi~ at the dense grid nodes
    double residual = 0;       // relative collocation residual of the solve
    bool warning = false;      // residual above 1e-2

    QuadratureGrid grid() const { return {static_cast<int>(psi.size())}; }

    // Scattered field at an arbitrary point off the crack. Near the crack
    // the density is re-interpolated onto a finer grid so the almost
    // singular kernel is resolved.
    cdouble scattered_field(Vec2 x) const;
};

// Collocation matrix of the single-layer operator on the dense v-grid.
// Off-diagonal entries use the trapezoid rule; the diagonal splits off the
// -(1/2pi) ln|x-y| part and integrates it in closed form over the self panel.
CMatrix bie_collocation_matrix(const CrackGeometry& geom, const SupportInterval& sup,
                               int n_dense, double k);

// Solves the collocated first-kind equation S psi~ = g by truncated SVD.
DensitySolution solve_bie(const CrackGeometry& geom, const SupportInterval& sup,
                          const std::function<cdouble(double /*v*/, Vec2 /*y*/)>& g_on_crack,
                          int n_dense, double trunc_tol, double k);

// Data vector for one excitation case at the observation points: cases 1-3
// solve the boundary equation with g = -incident, case 4 radiates the
// prescribed density psi(t) = y1(t) - i cos y2(t).
std::vector<cdouble> forward_data_for_case(const CaseSpec& cs, const CrackGeometry& geom,
                                           const SupportInterval& sup, const PhysicsConfig& phys,
                                           int n_dense = 256, double trunc_tol = 1e-10);

// Same, but also hands back the solved density for field evaluation.
struct CaseData {
    std::vector<cdouble> data;
    DensitySolution density;
};
CaseData forward_case(const CaseSpec& cs, const CrackGeometry& geom, const SupportInterval& sup,
                      const PhysicsConfig& phys, int n_dense = 256, double trunc_tol = 1e-10);

struct FieldSample {
    Vec2 p;
    cdouble total;
    bool masked;  // within 1e-3 of the crack
};

struct FieldGrid {
    double extent = 6.0;  // grid covers [-extent, extent]^2
    int res = 81;         // samples per axis
    std::vector<FieldSample> samples;
};

FieldGrid total_field_grid(const CaseSpec& cs, const CrackGeometry& geom,
                           const SupportInterval& sup, const PhysicsConfig& phys, double extent,
                           int res, int n_dense = 256, double trunc_tol = 1e-10);

}  // namespace crackscat::forward
