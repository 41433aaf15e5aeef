#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ebm/errors.hpp"
#include "ebm/numerics.hpp"
#include "ebm/relaxation.hpp"
#include "ebm/sampling.hpp"

using namespace ebm;

namespace {

EBMModel reference_n0() { return {0, 1.0, {{2.0, 1.0, 1.0}}}; }
EBMModel reference_n1() { return {1, 1.0, {{2.0, 1.0, 1.0}, {2.0, 1.0, 1.0}}}; }

const double kSqrt5 = std::sqrt(5.0);

} // namespace

TEST_CASE("n = 0 spectrum is a single mode per family") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    REQUIRE(s.shear.size() == 1);
    REQUIRE(s.bulk.size() == 1);
    CHECK(s.shear[0].rate == doctest::Approx(2.0));
    CHECK(s.shear[0].weight == doctest::Approx(1.0));
    CHECK(s.bulk[0].rate == doctest::Approx(8.0));
    CHECK(s.bulk[0].weight == doctest::Approx(1.0));
}

TEST_CASE("n = 1 reference spectrum matches the 2x2 closed form") {
    RelaxationSpectrum s = compute_spectrum(reference_n1());
    REQUIRE(s.shear.size() == 2);
    CHECK(s.shear[0].rate == doctest::Approx(3.0 - kSqrt5).epsilon(1e-13));
    CHECK(s.shear[1].rate == doctest::Approx(3.0 + kSqrt5).epsilon(1e-13));
    CHECK(s.shear[0].weight == doctest::Approx((5.0 - kSqrt5) / 10.0).epsilon(1e-13));
    CHECK(s.shear[1].weight == doctest::Approx((5.0 + kSqrt5) / 10.0).epsilon(1e-13));

    REQUIRE(s.bulk.size() == 2);
    CHECK(s.bulk[0].rate == doctest::Approx(12.0 - 4.0 * kSqrt5).epsilon(1e-13));
    CHECK(s.bulk[1].rate == doctest::Approx(12.0 + 4.0 * kSqrt5).epsilon(1e-13));
    CHECK(s.bulk[0].weight == doctest::Approx((5.0 - kSqrt5) / 10.0).epsilon(1e-13));
}

TEST_CASE("kernel at t = 0 recovers the instantaneous moduli") {
    RelaxationSpectrum s = compute_spectrum(reference_n1());
    KernelValues kv = eval_kernel(s, 0.0);
    CHECK(kv.g00 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kv.g00_bulk == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kv.gV == doctest::Approx(3.0 * 2.0 + 2.0 * 1.0).epsilon(1e-14));
    CHECK(kv.gS == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("single-exponential kernel for the Maxwell model") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    CHECK(eval_kernel(s, 1.0).g00 == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("n = 1 reference kernel value at t = 1") {
    RelaxationSpectrum s = compute_spectrum(reference_n1());
    double expected = (5.0 - kSqrt5) / 10.0 * std::exp(-(3.0 - kSqrt5)) +
                      (5.0 + kSqrt5) / 10.0 * std::exp(-(3.0 + kSqrt5));
    CHECK(expected == doctest::Approx(0.13260297879883980).epsilon(1e-12));
    CHECK(eval_kernel(s, 1.0).g00 == doctest::Approx(expected).epsilon(1e-12));
    // expm oracle agrees
    DenseMatrix l1s = assemble(reference_n1(), ModeKind::shear).matrix;
    CHECK(eval_kernel(s, 1.0).g00 == doctest::Approx(expm(l1s, 1.0)(0, 0)).epsilon(1e-11));
}

TEST_CASE("negative time is rejected") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    CHECK_THROWS_AS((void)eval_kernel(s, -0.1), Error);
}

TEST_CASE("degenerate eigenvalues merge onto one rate") {
    // two identical Kelvin-Voigt units create a repeated eigenvalue; the
    // kernel must still match the expm oracle after merging
    EBMModel m{2, 1.0, {{2.0, 1.0, 1.0}, {1.0, 3.0, 2.0}, {1.0, 3.0, 2.0}}};
    RelaxationSpectrum s = compute_spectrum(m);
    double sum_w = 0.0;
    for (const auto& mode : s.shear) sum_w += mode.weight;
    CHECK(sum_w == doctest::Approx(1.0).epsilon(1e-12));
    DenseMatrix l1s = assemble(m, ModeKind::shear).matrix;
    for (double t : {0.0, 0.5, 2.0})
        CHECK(eval_kernel(s, t).g00 == doctest::Approx(expm(l1s, t)(0, 0)).epsilon(1e-10));
}

TEST_CASE("zero strain history produces zero stress") {
    RelaxationSpectrum s = compute_spectrum(reference_n1());
    std::vector<double> times{0.0, 0.1, 0.2, 0.3};
    std::vector<SymTensor3> strain(times.size());
    auto stress = stress_from_strain_history(s, times, strain);
    for (const auto& sig : stress) CHECK(frobenius_norm(sig) == 0.0);
}

TEST_CASE("step-ramp volumetric strain fully relaxes the Maxwell model") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    double h = 0.005;
    int steps = 4000; // out to t = 20
    std::vector<double> times(steps + 1);
    std::vector<SymTensor3> strain(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        times[k] = k * h;
        double amp = std::min(times[k], 1.0);
        strain[k] = SymTensor3::identity() * amp;
    }
    auto stress = stress_from_strain_history(s, times, strain);
    CHECK(frobenius_norm(stress.back()) <= 1e-8);
    // and it was distinctly nonzero while loading
    CHECK(frobenius_norm(stress[100]) > 1.0);
}

TEST_CASE("constant-rate shear matches the analytic convolution") {
    RelaxationSpectrum s = compute_spectrum(reference_n1());
    SymTensor3 dev = SymTensor3::diag(1.0, -1.0, 0.0);
    int steps = 200;
    double t_end = 2.0;
    std::vector<double> times(steps + 1);
    std::vector<SymTensor3> strain(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        times[k] = t_end * k / steps;
        strain[k] = dev * times[k];
    }
    auto stress = stress_from_strain_history(s, times, strain);
    for (int k = 0; k <= steps; ++k) {
        double integral = 0.0; // int_0^t g00 = sum w (1 - exp(-tau t)) / tau
        for (const auto& mode : s.shear)
            integral += mode.weight * (-std::expm1(-mode.rate * times[k])) / mode.rate;
        SymTensor3 expected = dev * (2.0 * s.mu0 * integral);
        CHECK(frobenius_norm(stress[k] - expected) <= 1e-10);
    }
}

TEST_CASE("history validation") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    std::vector<SymTensor3> strain(3);

    std::vector<double> nonuniform{0.0, 0.1, 0.3};
    CHECK_THROWS_AS((void)stress_from_strain_history(s, nonuniform, strain), Error);

    std::vector<double> ok{0.0, 0.1, 0.2};
    strain[0].xx = 1.0;
    try {
        (void)stress_from_strain_history(s, ok, strain);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::nonzero_initial_strain);
    }
}

TEST_CASE("kernel CSV shape") {
    RelaxationSpectrum s = compute_spectrum(reference_n0());
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(0.1 * k);
    std::string csv = kernel_csv(s, grid);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,g00,g00_bulk,gV,gS");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 11);
    CHECK(csv.find("\n0,1,1,8,2\n") != std::string::npos); // t = 0 row
}
