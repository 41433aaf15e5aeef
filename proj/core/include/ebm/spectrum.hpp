#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ebm/ball_modes.hpp"
#include "ebm/model.hpp"
#include "ebm/numerics.hpp"
#include "ebm/relaxation.hpp"

namespace ebm {

// Interleaved decay rates and strengths of the memory kernel: shear modes
// first, bulk modes after, rates strictly increasing across the whole list.
struct PronyPair {
    std::vector<double> beta;  // 2n+2 rates, ascending
    std::vector<double> alpha; // matching strengths, all > 0
    int n = 0;
    double D = 0.0; // lambda0 + 2 mu0; equals sum_j alpha_j / beta_j
};

// Requires max shear rate < min bulk rate (throws ordering_violation
// otherwise; the shear/bulk index split would be ambiguous downstream).
PronyPair build_prony(const EBMModel& m, const RelaxationSpectrum& s);

// Characteristic polynomial (D + c z^2) Pi(z+beta_j) - sum_i alpha_i
// Pi_{j!=i}(z+beta_j), degree 2n+4, leading coefficient c. The constant
// coefficient vanishes identically; its computed value is asserted below
// 1e-12 of the coefficient 1-norm.
Poly char_poly_ell(const PronyPair& p, double c);

// The c = 0 limit, degree 2n+2; always has a root at zero.
Poly limit_poly(const PronyPair& p);

// One cluster of eigenvalues: the 2n+2 interlaced real roots (a1 = 0 first,
// then descending) plus whatever the remaining two roots turn out to be.
struct ClusterSpectrum {
    int ell = 0;
    double c = 0.0; // R^2 / r_ell^2
    std::vector<double> real_roots;
    std::vector<std::complex<double>> extra_roots; // 2 entries
    Poly poly;
};

// Secular bracketing between consecutive poles for the interlaced roots, the
// zero root recorded analytically, the final two roots from the polynomial
// deflated by everything known. Every secular root is cross-checked against
// the companion-matrix root list (throws cross_check_failure on mismatch).
ClusterSpectrum cluster_roots(const PronyPair& p, const RadialMode& mode);

// First-order augmented system matrix of order 2n+4; c * char_poly(A) equals
// the cluster polynomial coefficientwise.
DenseMatrix augmented_matrix(const PronyPair& p, const RadialMode& mode);

struct ModalTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states; // one 2n+4 vector per time
};

// Classical RK4 on U' = A U over a uniform grid. Throws step_too_large when
// h > 0.1 / max(max beta, sqrt(D k_b)).
ModalTrajectory modal_simulate(const PronyPair& p, const RadialMode& mode,
                               std::span<const double> initial,
                               std::span<const double> t_grid);

// JSON schema: {"ell": int, "c": float, "real_roots": [...],
//               "extra_roots": [[re, im], ...], "poly": [...]}
std::string cluster_to_json(const ClusterSpectrum& cs);
ClusterSpectrum cluster_from_json(const std::string& text);

} // namespace ebm
