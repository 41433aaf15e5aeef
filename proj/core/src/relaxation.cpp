#include "ebm/relaxation.hpp"

#include <cmath>
#include <sstream>

#include "ebm/errors.hpp"
#include "ebm/io.hpp"
#include "ebm/numerics.hpp"

namespace ebm {

namespace {

std::vector<RelaxationMode> modes_from_matrix(const DenseMatrix& a, const char* what) {
    EighResult eig = jacobi_eigh(a);
    int order = a.order();

    std::vector<RelaxationMode> modes(order);
    for (int k = 0; k < order; ++k) {
        double first = eig.eigenvectors(0, k);
        // rates ascending = negated eigenvalues reversed
        modes[order - 1 - k] = {-eig.eigenvalues[k], first * first};
    }
    for (const auto& mode : modes)
        if (!(mode.rate > 0.0))
            fail(errc::invalid_model,
                 std::string(what) + " mode matrix is not negative definite");

    // Coincident rates carry an arbitrary eigenbasis split; only the summed
    // weight on the shared rate is observable. Merge within 1e-10 relative.
    std::vector<RelaxationMode> merged;
    for (const auto& mode : modes) {
        if (!merged.empty() &&
            mode.rate - merged.back().rate <= 1e-10 * std::max(mode.rate, merged.back().rate)) {
            auto& last = merged.back();
            double w = last.weight + mode.weight;
            if (w > 0.0) last.rate = (last.rate * last.weight + mode.rate * mode.weight) / w;
            last.weight = w;
        } else {
            merged.push_back(mode);
        }
    }
    return merged;
}

} // namespace

RelaxationSpectrum compute_spectrum(const EBMModel& m) {
    require_valid(m);
    RelaxationSpectrum s;
    s.lambda0 = m.elements[0].lambda;
    s.mu0 = m.elements[0].mu;
    s.shear = modes_from_matrix(assemble(m, ModeKind::shear).matrix, "shear");
    s.bulk = modes_from_matrix(assemble(m, ModeKind::bulk).matrix, "bulk");
    return s;
}

KernelValues eval_kernel(const RelaxationSpectrum& s, double t) {
    if (t < 0.0) fail(errc::negative_time, "kernel evaluation requires t >= 0");
    KernelValues out;
    for (const auto& mode : s.shear) out.g00 += mode.weight * std::exp(-mode.rate * t);
    for (const auto& mode : s.bulk) out.g00_bulk += mode.weight * std::exp(-mode.rate * t);
    out.gV = (3.0 * s.lambda0 + 2.0 * s.mu0) * out.g00_bulk;
    out.gS = 2.0 * s.mu0 * out.g00;
    return out;
}

namespace {

// Segment weights for m(t+h) = e^{-bh} m(t) + w0 g(t) + w1 g(t+h) where
// m(t) = int_0^t b e^{-b(t-s)} g(s) ds and g is linear on the segment.
struct SegmentWeights {
    double decay;
    double w_old;
    double w_new;
};

SegmentWeights segment_weights(double rate, double h) {
    double theta = rate * h;
    double decay = std::exp(-theta);
    double phi0 = -std::expm1(-theta); // 1 - e^{-theta}
    double phi1;
    if (theta > 1e-5) {
        phi1 = 1.0 - phi0 / theta;
    } else {
        phi1 = theta * (0.5 - theta * (1.0 / 6.0 - theta / 24.0));
    }
    return {decay, phi0 - phi1, phi1};
}

} // namespace

std::vector<SymTensor3> stress_from_strain_history(const RelaxationSpectrum& s,
                                                   std::span<const double> times,
                                                   std::span<const SymTensor3> strain) {
    if (times.size() != strain.size() || times.size() < 2)
        fail(errc::bad_input, "need matching time and strain samples (>= 2)");
    if (times[0] != 0.0) fail(errc::bad_input, "history must start at t = 0");
    double h = times[1] - times[0];
    if (!(h > 0.0)) fail(errc::non_uniform_grid, "grid must be strictly increasing");
    for (size_t k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - times[k - 1] - h) > 1e-9 * h)
            fail(errc::non_uniform_grid, "grid spacing is not uniform");
    const SymTensor3& e0 = strain[0];
    if (e0.xx != 0.0 || e0.yy != 0.0 || e0.zz != 0.0 || e0.xy != 0.0 || e0.xz != 0.0 ||
        e0.yz != 0.0)
        fail(errc::nonzero_initial_strain, "strain(0) must vanish");

    IsoTensor4 c0{s.lambda0, s.mu0};
    double bulk_factor = s.lambda0 + (2.0 / 3.0) * s.mu0;

    std::vector<SegmentWeights> shear_w, bulk_w;
    shear_w.reserve(s.shear.size());
    bulk_w.reserve(s.bulk.size());
    for (const auto& mode : s.shear) shear_w.push_back(segment_weights(mode.rate, h));
    for (const auto& mode : s.bulk) bulk_w.push_back(segment_weights(mode.rate, h));

    // memory state: one deviatoric tensor per shear mode, one scalar (trace
    // channel) per bulk mode
    std::vector<SymTensor3> shear_mem(s.shear.size());
    std::vector<double> bulk_mem(s.bulk.size(), 0.0);

    std::vector<SymTensor3> stress(times.size());
    SymTensor3 dev_old = project(strain[0], Part::deviatoric);
    double tr_old = strain[0].trace();
    stress[0] = apply_iso(c0, strain[0]); // zero by the initial condition

    for (size_t k = 1; k < times.size(); ++k) {
        SymTensor3 dev_new = project(strain[k], Part::deviatoric);
        double tr_new = strain[k].trace();

        SymTensor3 shear_total;
        for (size_t j = 0; j < s.shear.size(); ++j) {
            const auto& w = shear_w[j];
            shear_mem[j] = shear_mem[j] * w.decay + dev_old * w.w_old + dev_new * w.w_new;
            shear_total += shear_mem[j] * s.shear[j].weight;
        }
        double bulk_total = 0.0;
        for (size_t j = 0; j < s.bulk.size(); ++j) {
            const auto& w = bulk_w[j];
            bulk_mem[j] = bulk_mem[j] * w.decay + tr_old * w.w_old + tr_new * w.w_new;
            bulk_total += bulk_mem[j] * s.bulk[j].weight;
        }

        SymTensor3 sigma = apply_iso(c0, strain[k]);
        sigma -= shear_total * (2.0 * s.mu0);
        double d = bulk_factor * bulk_total;
        sigma.xx -= d;
        sigma.yy -= d;
        sigma.zz -= d;
        stress[k] = sigma;

        dev_old = dev_new;
        tr_old = tr_new;
    }
    return stress;
}

std::string kernel_csv(const RelaxationSpectrum& s, std::span<const double> t_grid) {
    std::ostringstream out;
    out << "t,g00,g00_bulk,gV,gS\n";
    for (double t : t_grid) {
        KernelValues kv = eval_kernel(s, t);
        out << format_number(t) << ',' << format_number(kv.g00) << ','
            << format_number(kv.g00_bulk) << ',' << format_number(kv.gV) << ','
            << format_number(kv.gS) << '\n';
    }
    return out.str();
}

} // namespace ebm
