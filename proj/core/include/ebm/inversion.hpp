#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ebm/spectrum.hpp"

namespace ebm {

// Spectral data of one cluster, as consumed by the inversion: the full root
// list (conjugate-closed, exactly one root at zero) plus either the known
// multiplier c or the mode index ell.
struct ClusterData {
    std::vector<std::complex<double>> roots;
    double c = 0.0; // known-c mode; 0 when unknown
    int ell = 0;    // self-consistent mode; 0 when unknown

    int n() const { return (static_cast<int>(roots.size()) - 4) / 2; }
};

ClusterData cluster_data_from(const ClusterSpectrum& cs);

struct RecoveredProny {
    double D = 0.0;
    std::vector<double> beta;  // ascending
    std::vector<double> alpha;
    double low_coeff_rel = 0.0; // size of the two lowest coefficients of the
                                // scaled polynomial difference, relative
};

// Constructive recovery from two clusters with known multipliers:
//   z^2 Q = (c1 M1 - c2 M2) / (c1 - c2),  beta = -roots(Q),
//   P_r = c1 M1 - c1 z^2 Q,  D = leading(P_r),  A = D Q - P_r,
//   alpha_i = A(-beta_i) / Pi_{j!=i}(beta_j - beta_i).
// Throws inconsistent_clusters / complex_beta / non_positive_alpha when the
// data cannot come from one valid model, ill_conditioned when adjacent rate
// ratios fall below 1.05.
RecoveredProny recover_prony(const ClusterData& c1, const ClusterData& c2);

struct InversionDiagnostics {
    std::string mode;            // "known-c" or "self-consistent"
    int iterations = 0;          // fixed-point iterations (self-consistent)
    double low_coeff_rel = 0.0;
    double ratio_residual = 0.0; // least-squares residual of the c2/c1 fit
    double min_beta_gap_ratio = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct InversionResult {
    double D = 0.0;
    std::vector<double> beta;
    std::vector<double> alpha;
    double mu0 = 0.0;
    double lambda0 = 0.0;
    std::vector<double> tau;           // shear rates
    std::vector<double> shear_weights; // (v0^j)^2
    std::vector<double> kappa;         // bulk rates
    std::vector<double> bulk_weights;  // (q0^j)^2
    double fit_residual = 0.0;
    InversionDiagnostics diagnostics;
};

// Moduli and modal weights from a recovered Prony pair; the first n+1
// entries are shear, the last n+1 bulk. Throws negative_modulus when the
// recovered base element is not strongly convex.
InversionResult recover_moduli(double D, std::span<const double> alpha,
                               std::span<const double> beta, int n);

// Inversion without known multipliers: the ratio c2/c1 comes from the two
// vanishing low coefficients of c1 M1 - c2 M2, the absolute scale from the
// damped fixed point  c1 -> recover -> moduli -> solve r_ell1 -> R^2/r^2.
InversionResult self_consistent_invert(std::span<const std::complex<double>> roots1,
                                       std::span<const std::complex<double>> roots2,
                                       int ell1, int ell2, double R,
                                       double ratio_tol = 1e-6,
                                       double c1_initial_guess = 0.0);

struct FitResidualReport {
    double value = 0.0; // max over clusters and real roots of the secular mismatch / D
    int roots_checked = 0;
    bool warning = false; // set when no clusters were supplied
};

FitResidualReport fit_residual(const InversionResult& result,
                               std::span<const ClusterData> clusters);

// Report JSON mirroring InversionResult plus a diagnostics block.
std::string inversion_to_json(const InversionResult& r);

} // namespace ebm
