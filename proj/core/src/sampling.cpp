#include "ebm/sampling.hpp"

#include "ebm/errors.hpp"
#include "ebm/relaxation.hpp"

namespace ebm {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EBMModel sample_model(Rng& rng, const ModelSampleOptions& opt) {
    return sample_system(rng, opt).model;
}

SampledSystem sample_system(Rng& rng, const ModelSampleOptions& opt) {
    for (int tries = 0; tries < opt.max_tries; ++tries) {
        EBMModel m;
        m.n = rng.uniform_int(0, opt.max_n);
        m.R = 1.0;
        for (int i = 0; i <= m.n; ++i)
            m.elements.push_back({rng.uniform(opt.modulus_lo, opt.modulus_hi),
                                  rng.uniform(opt.modulus_lo, opt.modulus_hi),
                                  rng.uniform(opt.eta_lo, opt.eta_hi)});

        SampledSystem sys;
        sys.model = m;
        sys.spectrum = compute_spectrum(m);
        if (opt.min_weight > 0.0) {
            bool ok = true;
            for (const auto& mode : sys.spectrum.shear)
                if (mode.weight < opt.min_weight) ok = false;
            for (const auto& mode : sys.spectrum.bulk)
                if (mode.weight < opt.min_weight) ok = false;
            if (!ok) continue;
        }
        if (!opt.require_prony_ordering && opt.min_beta_gap_ratio <= 0.0) return sys;

        // interleaving order: every shear rate below every bulk rate
        if (sys.spectrum.shear.size() != sys.spectrum.bulk.size()) continue;
        if (!(sys.spectrum.shear.back().rate < sys.spectrum.bulk.front().rate)) continue;
        sys.prony = build_prony(m, sys.spectrum);
        if (opt.min_beta_gap_ratio > 0.0) {
            bool ok = true;
            for (size_t j = 0; j + 1 < sys.prony.beta.size(); ++j)
                if (sys.prony.beta[j + 1] / sys.prony.beta[j] < opt.min_beta_gap_ratio) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
        }
        return sys;
    }
    fail(errc::no_convergence, "model rejection sampling exhausted max_tries");
}

} // namespace ebm
