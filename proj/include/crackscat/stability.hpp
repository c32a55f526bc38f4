#pragma once

// Numerical verification harness for the subspace stability estimate
//   || A_m u - A_m' v || >= C ( |m - m'| ||v|| + ||u - v|| ),
// for u, v in the span of the leading N right singular vectors, plus the
// injectivity margin of the stacked operator [d_q A_m | A_m] and the two
// generic operator families used to exercise the harness.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/geometry.hpp"

namespace crackscat::spectral {

// A parameterized matrix family m |-> A_m over a box of admissible m.
struct OperatorFamily {
    std::string name;
    int param_dim = 2;
    bool real_valued = false;  // sample real coefficient vectors when true
    std::vector<std::pair<double, double>> box;  // admissible range per parameter
    std::function<CMatrix(const std::vector<double>&)> op;
    // directional derivative d_q A_m (empty if unavailable)
    std::function<CMatrix(const std::vector<double>&, const std::vector<double>&)> dop;
    std::function<std::vector<double>(Rng&)> sample_param;
    std::function<double(const std::vector<double>&, const std::vector<double>&)> metric;
};

// Circular-in-theta metric for the crack parameters m = (theta, a):
// sqrt(delta(theta,theta')^2 + (a-a')^2) with
// delta = sqrt((cos 2t - cos 2t')^2 + (sin 2t - sin 2t')^2).
double param_metric(const std::vector<double>& m, const std::vector<double>& m2);

// || A_m u - A_m' v || / ( |m-m'| ||v|| + ||u-v|| ) where u and v are given
// as coefficients in the leading-N right singular frames of A_m and A_m'.
// Throws on a zero denominator.
double stability_ratio(const OperatorFamily& fam, const std::vector<double>& m,
                       const std::vector<double>& m2, const std::vector<cdouble>& u_coeff,
                       const std::vector<cdouble>& v_coeff, int n_lead);

struct StabilityReport {
    std::string family;
    int n_lead = 0;
    int samples = 0;
    uint64_t seed = 0;
    double min_ratio = 0;
    std::vector<double> argmin_m, argmin_m2;
    std::vector<cdouble> argmin_u, argmin_v;
    uint64_t argmin_index = 0;  // sample index, reproducible from the seed
    std::vector<double> ratios;

    std::string to_key_values() const;  // plain-text key=value block
    void write(const std::string& path_report, const std::string& path_csv) const;
};

StabilityReport estimate_stability_constant(const OperatorFamily& fam, int n_lead, int samples,
                                            uint64_t seed);

// Smallest singular value of [d_q A_m | A_m] normalized by its largest.
double u2_margin(const OperatorFamily& fam, const std::vector<double>& m,
                 const std::vector<double>& q);

// Worst margin over a uniform grid of the parameter box (param_steps points
// per parameter) times q_steps unit directions.
double u2_margin_grid(const OperatorFamily& fam, int param_steps, int q_steps);

// A_m e_j = m1 f_j + m2 f_{j+n} + m2^2 f_{j+2n}; 3n x n, m in [1,2]^2.
CMatrix generic_example1(double m1, double m2, int n);
// Compact infinite operator A_m e_n = (m1 f_{3n} + m2 f_{3n+1} + m2^2 f_{3n+2})/n,
// truncated to basis indices <= n_max.
CMatrix generic_example2(double m1, double m2, int n_max);

OperatorFamily make_crack_family(const PhysicsConfig& phys, const SupportInterval& sup);
OperatorFamily make_example1_family(int n);
OperatorFamily make_example2_family(int n_max);
// Degenerate one-parameter family A_m = m1 * A0: the stacked operator has
// dependent columns, so its margin collapses to ~0.
OperatorFamily make_broken_family(uint64_t seed);

OperatorFamily family_by_name(const std::string& name, const PhysicsConfig& phys);

}  // namespace crackscat::spectral
