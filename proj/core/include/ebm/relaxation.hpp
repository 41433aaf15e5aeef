#pragma once

#include <span>
#include <string>
#include <vector>

#include "ebm/model.hpp"
#include "ebm/tensor.hpp"

namespace ebm {

struct RelaxationMode {
    double rate = 0.0;   // decay rate (tau_j or kappa_j), > 0
    double weight = 0.0; // squared first eigenvector component
};

// Prony form of the relaxation kernel: shear rates/weights from the shear
// mode matrix, bulk rates/weights from the bulk one. Weights sum to 1 per
// family and the first-moment sums reproduce the matrices' (1,1) entries.
struct RelaxationSpectrum {
    std::vector<RelaxationMode> shear; // rates ascending
    std::vector<RelaxationMode> bulk;  // rates ascending
    double lambda0 = 0.0;
    double mu0 = 0.0;
};

// Eigendecomposition of both mode matrices. Rates are negated eigenvalues
// sorted ascending; eigenvalues coinciding within 1e-10 relative are merged
// onto one rate (weight-sum preserving; the kernel is the observable, not
// the individual weights).
RelaxationSpectrum compute_spectrum(const EBMModel& m);

struct KernelValues {
    double g00 = 0.0;      // shear kernel sum_j w_j exp(-tau_j t)
    double g00_bulk = 0.0; // bulk kernel sum_j q_j exp(-kappa_j t)
    double gV = 0.0;       // (3 lambda0 + 2 mu0) * g00_bulk
    double gS = 0.0;       // 2 mu0 * g00
};

// Throws negative_time for t < 0.
KernelValues eval_kernel(const RelaxationSpectrum& s, double t);

// Stress response to a sampled strain history on a uniform grid starting at
// t = 0 with zero initial strain. Each modal memory integral is advanced by
// the exact exponential recurrence for piecewise-linear strain, so the total
// cost is O(modes * samples).
std::vector<SymTensor3> stress_from_strain_history(const RelaxationSpectrum& s,
                                                   std::span<const double> times,
                                                   std::span<const SymTensor3> strain);

// CSV columns: t, g00, g00_bulk, gV, gS (17 significant digits).
std::string kernel_csv(const RelaxationSpectrum& s, std::span<const double> t_grid);

} // namespace ebm
