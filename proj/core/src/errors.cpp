#include "ebm/errors.hpp"

namespace ebm {

const char* errc_name(errc code) {
    switch (code) {
        case errc::non_symmetric: return "NonSymmetric";
        case errc::no_convergence: return "NoConvergence";
        case errc::degenerate_leading_coefficient: return "DegenerateLeadingCoefficient";
        case errc::no_sign_change: return "NoSignChange";
        case errc::invalid_model: return "InvalidModel";
        case errc::negative_time: return "NegativeTime";
        case errc::non_uniform_grid: return "NonUniformGrid";
        case errc::nonzero_initial_strain: return "NonzeroInitialStrain";
        case errc::bracket_failure: return "BracketFailure";
        case errc::outside_domain: return "OutsideDomain";
        case errc::ordering_violation: return "OrderingViolation";
        case errc::degenerate_strengths: return "DegenerateStrengths";
        case errc::cross_check_failure: return "CrossCheckFailure";
        case errc::step_too_large: return "StepTooLarge";
        case errc::inconsistent_clusters: return "InconsistentClusters";
        case errc::complex_beta: return "ComplexBeta";
        case errc::non_positive_alpha: return "NonPositiveAlpha";
        case errc::negative_modulus: return "NegativeModulus";
        case errc::ratio_inconsistent: return "RatioInconsistent";
        case errc::ill_conditioned: return "IllConditioned";
        case errc::bad_input: return "BadInput";
    }
    return "Unknown";
}

} // namespace ebm
