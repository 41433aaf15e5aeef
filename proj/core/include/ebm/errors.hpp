#pragma once

#include <stdexcept>
#include <string>

namespace ebm {

// Failure codes shared by the library and the CLI's machine-readable output.
enum class errc {
    non_symmetric,
    no_convergence,
    degenerate_leading_coefficient,
    no_sign_change,
    invalid_model,
    negative_time,
    non_uniform_grid,
    nonzero_initial_strain,
    bracket_failure,
    outside_domain,
    ordering_violation,
    degenerate_strengths,
    cross_check_failure,
    step_too_large,
    inconsistent_clusters,
    complex_beta,
    non_positive_alpha,
    negative_modulus,
    ratio_inconsistent,
    ill_conditioned,
    bad_input,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace ebm
