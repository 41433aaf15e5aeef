#pragma once

#include <array>
#include <span>
#include <string>

namespace ebm {

// One radial free-oscillation mode of the traction-free homogeneous ball.
struct RadialMode {
    int ell = 0;          // mode index, >= 1
    double r = 0.0;       // root of the boundary function in ((ell-1/2)pi, ell*pi)
    double k_b = 0.0;     // r^2 / R^2
    double lambda0 = 0.0;
    double mu0 = 0.0;
    double R = 1.0;
};

// Boundary function ((lambda0 + 2 mu0) eta^2 - 4 mu0) sin(eta) + 4 mu0 eta cos(eta).
double eval_f(double lambda0, double mu0, double eta);

// Unique root in ((ell - 1/2) pi, ell pi); the bracket carries a guaranteed
// sign change for strongly convex moduli. Throws bracket_failure otherwise.
RadialMode solve_mode(double lambda0, double mu0, double R, int ell);

struct ModeField {
    std::array<double, 3> u{}; // displacement, purely radial
    double p = 0.0;            // divergence potential, p = div u
};

// Closed-form eigenfunction fields; the power series takes over below
// |x| = 1e-3 R where the closed form cancels catastrophically. Throws
// outside_domain for |x| > R.
ModeField eval_mode_fields(const RadialMode& mode, const std::array<double, 3>& x);

struct ModeResidualReport {
    double qa_rel = 0.0;        // | Q_A u + (lambda0 + 2mu0/3) k_b u | relative
    double qb_rel = 0.0;        // | Q_B u + (4/3) mu0 k_b u | relative
    double div_rel = 0.0;       // | div u - p | relative
    double laplace_rel = 0.0;   // | lap p + k_b p | relative
    double boundary_residual = 0.0; // analytic traction identity at r = R
    double h = 0.0;
    int samples = 0;
};

// Central finite differences on a seeded random interior sample set; the
// residuals decay at second order in h. Requires 1e-4 <= h/R <= 1e-1.
ModeResidualReport verify_mode(const RadialMode& mode, double lambda0, double mu0,
                               double h, int samples = 48,
                               unsigned long long seed = 2026);

// CSV columns: ell, r_ell, k_b for a list of solved modes.
std::string modes_csv(std::span<const RadialMode> modes);

} // namespace ebm
