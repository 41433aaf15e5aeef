#pragma once

#include <cstdint>
#include <random>

#include "ebm/model.hpp"
#include "ebm/spectrum.hpp"

namespace ebm {

// splitmix64; used to derive independent per-case seeds so parallel runs
// reproduce sequential ones bit for bit.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// mt19937_64 with an explicit uniform mapping (no std::*_distribution, whose
// output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    double uniform01() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

struct ModelSampleOptions {
    int max_n = 5;
    double modulus_lo = 0.1;
    double modulus_hi = 10.0;
    double eta_lo = 0.1;
    double eta_hi = 10.0;
    // Reject draws whose shear/bulk rates violate the interleaving order
    // required by the Prony shorthand.
    bool require_prony_ordering = false;
    // Reject draws whose adjacent rate ratio beta_{j+1}/beta_j falls below
    // this (0 disables). Protects the inversion's Vandermonde-like step.
    double min_beta_gap_ratio = 0.0;
    // Reject draws carrying a modal weight below this (0 disables). A
    // near-zero weight parks a cluster root on top of its pole, where the
    // strength is not recoverable to fine relative accuracy.
    double min_weight = 0.0;
    int max_tries = 100000;
};

// R = 1, n uniform in [0, max_n], moduli and viscosities uniform in their
// ranges, with rejection per the options above.
EBMModel sample_model(Rng& rng, const ModelSampleOptions& opt);

// The sampled model together with its spectrum and Prony pair (the rejection
// loop computes them anyway).
struct SampledSystem {
    EBMModel model;
    RelaxationSpectrum spectrum;
    PronyPair prony;
};
SampledSystem sample_system(Rng& rng, const ModelSampleOptions& opt);

} // namespace ebm
