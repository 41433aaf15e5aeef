// Acceptance suite: every criterion prints one PASS/FAIL line and the binary
// exits nonzero if any fail. Tolerances and case counts are fixed here, not
// configurable.

#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "ebm/ball_modes.hpp"
#include "ebm/errors.hpp"
#include "ebm/inversion.hpp"
#include "ebm/model.hpp"
#include "ebm/numerics.hpp"
#include "ebm/parallel.hpp"
#include "ebm/relaxation.hpp"
#include "ebm/sampling.hpp"
#include "ebm/spectrum.hpp"
#include "ebm/tensor.hpp"

using namespace ebm;

namespace {

constexpr std::uint64_t kSeed = 20260809ULL;
constexpr double kPi = std::numbers::pi;

// reference values pinned from independent oracles (bisection at 40-digit
// precision for r1, companion-matrix roots of the expanded quartic)
constexpr double kRefR1 = 2.743707269992269;
constexpr double kRefRealRoot = -5.6072677763015735;
constexpr double kRefExtraRe = -2.1963661118492133;
constexpr double kRefExtraIm = 4.0812336846213982;

struct Criterion {
    int id;
    std::string description;
    bool pass;
    std::string observed;
};

std::vector<Criterion> g_results;

void report(int id, const std::string& description, bool pass, const std::string& observed) {
    g_results.push_back({id, description, pass, observed});
    std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, description.c_str(),
                observed.c_str());
    std::fflush(stdout);
}

struct WorstTracker {
    std::mutex mutex;
    double worst = 0.0;
    int failures = 0;
    std::string note;

    void update(double value, const std::string& detail = "") {
        std::lock_guard<std::mutex> lock(mutex);
        if (value > worst) {
            worst = value;
            if (!detail.empty()) note = detail;
        }
    }
    void fail(const std::string& detail) {
        std::lock_guard<std::mutex> lock(mutex);
        ++failures;
        if (note.empty()) note = detail;
    }
};

double elapsed(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---- criterion 1: kernel-oracle equivalence --------------------------------

void criterion_kernel_oracle() {
    auto start = std::chrono::steady_clock::now();
    WorstTracker tracker;
    parallel_for(1000, [&](int i) {
        try {
            Rng rng(mix_seed(kSeed, 1000000ULL + static_cast<std::uint64_t>(i)));
            ModelSampleOptions opt;
            opt.max_n = 5;
            SampledSystem sys = sample_system(rng, opt);
            DenseMatrix l1s = assemble(sys.model, ModeKind::shear).matrix;
            DenseMatrix l0s = assemble(sys.model, ModeKind::bulk).matrix;
            for (double t : {0.0, 0.1, 1.0, 10.0}) {
                KernelValues kv = eval_kernel(sys.spectrum, t);
                tracker.update(std::abs(kv.g00 - expm(l1s, t)(0, 0)));
                tracker.update(std::abs(kv.g00_bulk - expm(l0s, t)(0, 0)));
            }
        } catch (const Error& e) {
            tracker.fail(e.what());
        }
    });
    double secs = elapsed(start);
    bool pass = tracker.failures == 0 && tracker.worst < 1e-10 && secs < 30.0;
    report(1, "kernel-oracle equivalence, 1000 models, t in {0, 0.1, 1, 10}, tol 1e-10", pass,
           fmt("max |g00 - expm_11| = %.3e, %.1f s%s", tracker.worst, secs,
               tracker.failures ? ", errors" : ""));
}

// ---- criterion 2: negative definiteness and weight normalization -----------

void criterion_weights() {
    WorstTracker tracker;
    parallel_for(1000, [&](int i) {
        try {
            Rng rng(mix_seed(kSeed, 2000000ULL + static_cast<std::uint64_t>(i)));
            ModelSampleOptions opt;
            opt.max_n = 5;
            SampledSystem sys = sample_system(rng, opt);
            const RelaxationSpectrum& s = sys.spectrum;
            KahanSum sum_w, sum_q, first_shear;
            for (const auto& mode : s.shear) {
                if (!(mode.rate > 0.0)) tracker.fail("nonpositive shear rate");
                sum_w.add(mode.weight);
                first_shear.add(mode.rate * mode.weight);
            }
            for (const auto& mode : s.bulk) {
                if (!(mode.rate > 0.0)) tracker.fail("nonpositive bulk rate");
                sum_q.add(mode.weight);
            }
            double target = 2.0 * sys.model.b() * sys.model.elements[0].mu;
            tracker.update(std::abs(sum_w.value() - 1.0));
            tracker.update(std::abs(sum_q.value() - 1.0));
            tracker.update(std::abs(first_shear.value() - target) / target);
        } catch (const Error& e) {
            tracker.fail(e.what());
        }
    });
    bool pass = tracker.failures == 0 && tracker.worst < 1e-12;
    report(2, "positive rates, weight sums = 1, first moment = 2 b mu0, tol 1e-12", pass,
           fmt("max deviation = %.3e%s", tracker.worst, tracker.failures ? ", errors" : ""));
}

// ---- criterion 3: boundary roots --------------------------------------------

void criterion_boundary_roots() {
    auto start = std::chrono::steady_clock::now();
    double lambda0 = 2.0, mu0 = 1.0;
    RadialMode first = solve_mode(lambda0, mu0, 1.0, 1);
    double pin_err = std::abs(first.r - kRefR1);

    double worst_f = 0.0;
    bool brackets = true;
    for (int ell = 1; ell <= 50; ++ell) {
        RadialMode mode = solve_mode(lambda0, mu0, 1.0, ell);
        if (!(mode.r > (ell - 0.5) * kPi && mode.r < ell * kPi)) brackets = false;
        double residual = std::abs(eval_f(lambda0, mu0, mode.r)) /
                          ((lambda0 + 2.0 * mu0) * mode.r * mode.r);
        worst_f = std::max(worst_f, residual);
    }
    double secs = elapsed(start);
    bool pass = pin_err < 1e-12 && brackets && worst_f < 1e-10 && secs < 1.0;
    report(3, "r1 pinned to 1e-12, brackets and |f(r_ell)| < 1e-10 scale for ell = 1..50", pass,
           fmt("|r1 - ref| = %.2e, max residual = %.2e, %.3f s", pin_err, worst_f, secs));
}

// ---- criterion 4: eigenfunction residuals -----------------------------------

void criterion_eigenfunction_residuals() {
    RadialMode mode = solve_mode(2.0, 1.0, 1.0, 1);
    ModeResidualReport coarse = verify_mode(mode, 2.0, 1.0, 2e-3, 48, 17);
    ModeResidualReport fine = verify_mode(mode, 2.0, 1.0, 1e-3, 48, 17);
    double order_qa = std::log2(coarse.qa_rel / fine.qa_rel);
    double order_qb = std::log2(coarse.qb_rel / fine.qb_rel);

    double worst_boundary = 0.0;
    for (int ell = 1; ell <= 10; ++ell) {
        RadialMode m = solve_mode(2.0, 1.0, 1.0, ell);
        worst_boundary =
            std::max(worst_boundary, verify_mode(m, 2.0, 1.0, 1e-2, 4, 17).boundary_residual);
    }
    bool pass = order_qa >= 1.9 && order_qb >= 1.9 && worst_boundary < 1e-10;
    report(4, "FD residual order >= 1.9 under h-halving, boundary identity < 1e-10, ell = 1..10",
           pass,
           fmt("orders %.2f / %.2f, max boundary residual = %.2e", order_qa, order_qb,
               worst_boundary));
}

// ---- criteria 5 and 6: interlacing and the structural cross-check -----------

void criteria_interlacing_structural() {
    auto start = std::chrono::steady_clock::now();
    WorstTracker interlace, structural;
    std::atomic<long> complex_pairs{0}, real_pairs{0};

    parallel_for(500, [&](int i) {
        Rng rng(mix_seed(kSeed, 5000000ULL + static_cast<std::uint64_t>(i)));
        ModelSampleOptions opt;
        opt.max_n = 4;
        opt.require_prony_ordering = true;
        SampledSystem sys;
        try {
            sys = sample_system(rng, opt);
        } catch (const Error& e) {
            interlace.fail(e.what());
            return;
        }
        const PronyPair& p = sys.prony;
        const auto& beta = p.beta;
        for (int ell : {1, 2, 5}) {
            try {
                RadialMode mode = solve_mode(sys.model.elements[0].lambda,
                                             sys.model.elements[0].mu, sys.model.R, ell);
                ClusterSpectrum cs = cluster_roots(p, mode);

                if (cs.real_roots.size() != beta.size())
                    interlace.fail("real root count != 2n+2");
                if (std::abs(cs.real_roots.front()) >= 1e-10 * beta.front())
                    interlace.fail("a1 moved off zero");
                for (size_t j = 0; j + 1 < cs.real_roots.size(); ++j) {
                    double a = cs.real_roots[j + 1];
                    if (!(a > -beta[j + 1] && a < -beta[j])) interlace.fail("bracket violated");
                }
                bool complex_pair = !is_effectively_real(cs.extra_roots[0]);
                if (complex_pair) {
                    complex_pairs.fetch_add(1);
                    for (const auto& z : cs.extra_roots)
                        if (!(z.real() > -beta.back() / 2.0 && z.real() < -beta.front() / 2.0))
                            interlace.fail("complex pair outside the strip");
                } else {
                    real_pairs.fetch_add(1);
                    for (const auto& z : cs.extra_roots)
                        if (!(z.real() > -beta.back() && z.real() < 1e-10 * beta.front()))
                            interlace.fail("real extras outside (-beta_max, 0)");
                }

                // criterion 6 on the same case
                double c = cs.c;
                Poly cp = char_poly_of_matrix(augmented_matrix(p, mode));
                double scale = cs.poly.coeff_norm_inf();
                for (int k = 0; k <= cs.poly.degree(); ++k)
                    structural.update(std::abs(c * cp.coeff(k) - cs.poly.coeff(k)) / scale);
            } catch (const Error& e) {
                interlace.fail(e.what());
            }
        }
    });

    double secs = elapsed(start);
    bool pass5 = interlace.failures == 0 && secs < 60.0;
    report(5,
           "interlacing on 500 models x ell in {1,2,5}: 2n+2 bracketed roots, a1 = 0, "
           "extra pair located per the root-location lemma",
           pass5,
           fmt("%d violations, %ld complex / %ld real extra pairs, %.1f s%s%s",
               interlace.failures, complex_pairs.load(), real_pairs.load(), secs,
               interlace.note.empty() ? "" : ", first: ",
               interlace.note.c_str()));

    bool pass6 = structural.worst < 1e-9 && interlace.failures == 0;
    report(6, "c * charpoly(A) matches the cluster polynomial to 1e-9 relative on all cases",
           pass6, fmt("max coefficient mismatch = %.3e relative", structural.worst));
}

// ---- criterion 7: n = 0 reference instance ----------------------------------

void criterion_reference_instance() {
    double worst = 0.0;
    auto track = [&](double measured, double reference) {
        double rel = std::abs(measured - reference) /
                     std::max({std::abs(reference), std::abs(measured), 1e-300});
        worst = std::max(worst, rel);
    };

    EBMModel m{0, 1.0, {{2.0, 1.0, 1.0}}};
    PronyPair p = build_prony(m, compute_spectrum(m));
    track(p.beta[0], 2.0);
    track(p.beta[1], 8.0);
    track(p.alpha[0], 8.0 / 3.0);
    track(p.alpha[1], 64.0 / 3.0);
    track(p.D, 4.0);

    Poly limit = limit_poly(p); // 4 z (z + 4)
    track(limit.coeff(1), 16.0);
    track(limit.coeff(2), 4.0);
    worst = std::max(worst, std::abs(limit.coeff(0)) / limit.coeff_norm1());

    RadialMode mode = solve_mode(2.0, 1.0, 1.0, 1);
    ClusterSpectrum cs = cluster_roots(p, mode);
    track(cs.real_roots[1], kRefRealRoot);
    worst = std::max(worst, std::abs(cs.real_roots[0]));
    track(cs.extra_roots[0].real(), kRefExtraRe);
    track(std::abs(cs.extra_roots[0].imag()), kRefExtraIm);

    bool pass = worst < 1e-9;
    report(7, "n = 0 reference: beta = (2,8), alpha = (8/3, 64/3), D = 4, pinned ell = 1 cluster",
           pass, fmt("max relative deviation = %.3e", worst));
}

// ---- criterion 8: inversion round trip --------------------------------------

void criterion_inversion_roundtrip() {
    auto start = std::chrono::steady_clock::now();
    WorstTracker known_err, self_err, known_fit, self_fit;

    parallel_for(200, [&](int i) {
        try {
            Rng rng(mix_seed(kSeed, 8000000ULL + static_cast<std::uint64_t>(i)));
            ModelSampleOptions opt;
            opt.max_n = 3;
            opt.require_prony_ordering = true;
            opt.min_beta_gap_ratio = 1.2; // well-separated rates ...
            opt.min_weight = 1e-4;        // ... and resolvable modal weights
            SampledSystem sys = sample_system(rng, opt);
            double lam = sys.model.elements[0].lambda;
            double mu = sys.model.elements[0].mu;
            ClusterData d1 =
                cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, sys.model.R, 1)));
            ClusterData d2 =
                cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, sys.model.R, 2)));

            auto compare = [&](const InversionResult& r) {
                double worst = 0.0;
                auto rd = [](double a, double b) {
                    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
                };
                worst = std::max(worst, rd(r.D, sys.prony.D));
                for (size_t j = 0; j < sys.prony.beta.size(); ++j) {
                    worst = std::max(worst, rd(r.beta[j], sys.prony.beta[j]));
                    worst = std::max(worst, rd(r.alpha[j], sys.prony.alpha[j]));
                }
                worst = std::max(worst, rd(r.mu0, mu));
                worst = std::max(worst, rd(r.lambda0, lam));
                for (size_t j = 0; j < sys.spectrum.shear.size(); ++j)
                    worst = std::max(worst, rd(r.shear_weights[j], sys.spectrum.shear[j].weight));
                for (size_t j = 0; j < sys.spectrum.bulk.size(); ++j)
                    worst = std::max(worst, rd(r.bulk_weights[j], sys.spectrum.bulk[j].weight));
                return worst;
            };

            RecoveredProny rec = recover_prony(d1, d2);
            InversionResult known = recover_moduli(rec.D, rec.alpha, rec.beta, sys.prony.n);
            std::vector<ClusterData> clusters{d1, d2};
            known_err.update(compare(known));
            known_fit.update(fit_residual(known, clusters).value);

            InversionResult self =
                self_consistent_invert(d1.roots, d2.roots, 1, 2, sys.model.R);
            self_err.update(compare(self));
            self_fit.update(self.fit_residual);
        } catch (const Error& e) {
            known_err.fail(e.what());
        }
    });

    double secs = elapsed(start);
    bool pass = known_err.failures == 0 && known_err.worst < 1e-6 && self_err.worst < 1e-5 &&
                known_fit.worst < 1e-9 && self_fit.worst < 1e-7 && secs < 120.0;
    report(8,
           "round trip on 200 well-separated models: known-c to 1e-6 (fit < 1e-9), "
           "self-consistent to 1e-5 (fit < 1e-7)",
           pass,
           fmt("known-c err %.2e fit %.2e; self err %.2e fit %.2e; %.1f s%s", known_err.worst,
               known_fit.worst, self_err.worst, self_fit.worst, secs,
               known_err.failures ? ", errors" : ""));
}

// ---- criterion 9: limit-polynomial convergence -------------------------------

void criterion_limit_convergence() {
    WorstTracker tracker;
    std::atomic<int> tested{0};

    auto run_model = [&](const EBMModel& model, const PronyPair& p) {
        auto interlaced = [&](double c) {
            std::vector<double> out;
            for (size_t j = 0; j + 1 < p.beta.size(); ++j) {
                double eps = 1e-9 * (p.beta[j + 1] - p.beta[j]);
                out.push_back(brent_root(
                    [&](double z) {
                        KahanSum s;
                        for (size_t k = 0; k < p.beta.size(); ++k)
                            s.add(p.alpha[k] / (z + p.beta[k]));
                        s.add(-p.D);
                        s.add(-c * z * z);
                        return s.value();
                    },
                    -p.beta[j + 1] + eps, -p.beta[j] - eps));
            }
            return out;
        };

        std::vector<int> ells{10, 100, 1000};
        std::vector<double> cs;
        std::vector<std::vector<double>> roots;
        for (int ell : ells) {
            RadialMode mode =
                solve_mode(model.elements[0].lambda, model.elements[0].mu, model.R, ell);
            cs.push_back(model.R * model.R / (mode.r * mode.r));
            roots.push_back(interlaced(cs.back()));
        }
        std::vector<double> limit = interlaced(0.0);
        for (size_t pair = 0; pair + 1 < ells.size(); ++pair) {
            double c_ratio = cs[pair] / cs[pair + 1];
            for (size_t j = 0; j < limit.size(); ++j) {
                double e1 = std::abs(roots[pair][j] - limit[j]);
                double e2 = std::abs(roots[pair + 1][j] - limit[j]);
                if (e2 < 1e-12 * std::max(1.0, std::abs(limit[j]))) continue;
                if (!(e2 < e1)) tracker.fail("error not decreasing");
                double q = e1 / e2 / c_ratio;
                if (!(q > 0.5 && q < 2.0)) tracker.fail(fmt("ratio off: q = %.3f", q));
                tracker.update(std::max(q, 1.0 / q));
            }
        }
        tested.fetch_add(1);
    };

    // the n = 0 reference plus seeded random models inside the asymptotic
    // regime (the z^2 term must be subdominant at ell = 10 for the
    // proportionality law to be observable there)
    EBMModel ref{0, 1.0, {{2.0, 1.0, 1.0}}};
    run_model(ref, build_prony(ref, compute_spectrum(ref)));

    parallel_for(40, [&](int i) {
        Rng rng(mix_seed(kSeed, 9000000ULL + static_cast<std::uint64_t>(i)));
        ModelSampleOptions opt;
        opt.max_n = 4;
        opt.require_prony_ordering = true;
        for (int tries = 0; tries < 200; ++tries) {
            SampledSystem sys;
            try {
                sys = sample_system(rng, opt);
            } catch (const Error&) {
                return;
            }
            RadialMode m10 =
                solve_mode(sys.model.elements[0].lambda, sys.model.elements[0].mu, 1.0, 10);
            double c10 = 1.0 / (m10.r * m10.r);
            double bmax = sys.prony.beta.back();
            if (c10 * bmax * bmax > sys.prony.D) continue;
            try {
                run_model(sys.model, sys.prony);
            } catch (const Error& e) {
                tracker.fail(e.what());
            }
            return;
        }
    });

    bool pass = tracker.failures == 0 && tested.load() >= 20;
    report(9,
           "bounded roots of the ell = 10/100/1000 clusters approach the limit roots with "
           "error proportional to c_ell (factor-2 ratio test, asymptotic-regime models)",
           pass,
           fmt("%d models tested, worst ratio factor = %.2f, %d violations%s%s", tested.load(),
               tracker.worst, tracker.failures, tracker.note.empty() ? "" : ", first: ",
               tracker.note.c_str()));
}

} // namespace

int main() {
    std::printf("acceptance suite (seed %llu)\n", static_cast<unsigned long long>(kSeed));
    criterion_kernel_oracle();
    criterion_weights();
    criterion_boundary_roots();
    criterion_eigenfunction_residuals();
    criteria_interlacing_structural();
    criterion_reference_instance();
    criterion_inversion_roundtrip();
    criterion_limit_convergence();

    int failed = 0;
    for (const auto& c : g_results)
        if (!c.pass) ++failed;
    std::printf("%d of %zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
                g_results.size());
    return failed == 0 ? 0 : 1;
}
