#include "ebm/ball_modes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ebm/errors.hpp"
#include "ebm/io.hpp"
#include "ebm/numerics.hpp"
#include "ebm/sampling.hpp"

namespace ebm {

double eval_f(double lambda0, double mu0, double eta) {
    return ((lambda0 + 2.0 * mu0) * eta * eta - 4.0 * mu0) * std::sin(eta) +
           4.0 * mu0 * eta * std::cos(eta);
}

RadialMode solve_mode(double lambda0, double mu0, double R, int ell) {
    if (ell < 1) fail(errc::bad_input, "mode index ell must be >= 1");
    if (!(R > 0.0)) fail(errc::bad_input, "radius must be positive");
    if (!(mu0 > 0.0) || !(3.0 * lambda0 + 2.0 * mu0 > 0.0))
        fail(errc::invalid_model, "moduli are not strongly convex");

    constexpr double pi = std::numbers::pi;
    double lo = (ell - 0.5) * pi + 1e-9;
    double hi = ell * pi - 1e-9;
    double flo = eval_f(lambda0, mu0, lo);
    double fhi = eval_f(lambda0, mu0, hi);
    if ((flo > 0.0) == (fhi > 0.0))
        fail(errc::bracket_failure, "no sign change on the half-period bracket");

    double r = brent_root([&](double eta) { return eval_f(lambda0, mu0, eta); }, lo, hi);
    return {ell, r, r * r / (R * R), lambda0, mu0, R};
}

namespace {

// p(w) = sin(w)/w and the radial displacement factor
// F(w) = (w cos w - sin w)/w^3, so that u(x) = -F(w) x with w = r_ell |x| / R.
double bessel_j0s(double w) { return w == 0.0 ? 1.0 : std::sin(w) / w; }

double radial_factor(double w, bool series) {
    if (series) {
        // F(w) = sum_{i>=1} (-1)^i (2i)/(2i+1)! w^{2i-2}; 12 terms leave the
        // truncation far below double roundoff at the crossover.
        double term_base = 1.0;
        double acc = 0.0;
        double fact = 1.0; // (2i+1)!
        double sign = 1.0;
        for (int i = 1; i <= 12; ++i) {
            sign = -sign;
            fact *= (2.0 * i) * (2.0 * i + 1.0);
            acc += sign * (2.0 * i) / fact * term_base;
            term_base *= w * w;
        }
        return acc;
    }
    return (w * std::cos(w) - std::sin(w)) / (w * w * w);
}

} // namespace

ModeField eval_mode_fields(const RadialMode& mode, const std::array<double, 3>& x) {
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r > mode.R * (1.0 + 1e-12)) fail(errc::outside_domain, "|x| exceeds the ball radius");

    double s = mode.r / mode.R;
    double w = s * r;
    // The closed form cancels catastrophically only for small w; the series
    // takes over inside the crossover radius provided w is actually small.
    bool use_series = (r < 1e-3 * mode.R) && (w < 1.0);

    ModeField out;
    out.p = bessel_j0s(w);
    double factor = -radial_factor(w, use_series);
    out.u = {factor * x[0], factor * x[1], factor * x[2]};
    return out;
}

ModeResidualReport verify_mode(const RadialMode& mode, double lambda0, double mu0, double h,
                               int samples, unsigned long long seed) {
    double rel = h / mode.R;
    if (rel < 1e-4 || rel > 1e-1)
        fail(errc::bad_input, "grid step must satisfy 1e-4 <= h/R <= 1e-1");

    Rng rng(seed);
    double k_b = mode.k_b;

    auto u_at = [&](const std::array<double, 3>& x) { return eval_mode_fields(mode, x).u; };
    auto p_at = [&](const std::array<double, 3>& x) { return eval_mode_fields(mode, x).p; };
    auto shifted = [](std::array<double, 3> x, int axis, double d) {
        x[static_cast<size_t>(axis)] += d;
        return x;
    };
    auto div_u = [&](const std::array<double, 3>& x) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i)
            acc += (u_at(shifted(x, i, h))[static_cast<size_t>(i)] -
                    u_at(shifted(x, i, -h))[static_cast<size_t>(i)]) /
                   (2.0 * h);
        return acc;
    };

    ModeResidualReport rep;
    rep.h = h;
    rep.samples = samples;

    double u_scale = 0.0, p_scale = 0.0;
    struct Residuals {
        std::array<double, 3> qa, qb;
        double div_err, lap_err;
    };
    std::vector<Residuals> res(static_cast<size_t>(samples));
    std::vector<double> u_norm(static_cast<size_t>(samples));

    for (int sidx = 0; sidx < samples; ++sidx) {
        // interior point with the full stencil inside the ball
        std::array<double, 3> x{};
        double radius = rng.uniform(0.05 * mode.R, mode.R - 3.0 * h);
        double cos_t = rng.uniform(-1.0, 1.0);
        double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        x = {radius * sin_t * std::cos(phi), radius * sin_t * std::sin(phi), radius * cos_t};

        auto u0 = u_at(x);
        double p0 = p_at(x);
        u_norm[static_cast<size_t>(sidx)] =
            std::sqrt(u0[0] * u0[0] + u0[1] * u0[1] + u0[2] * u0[2]);
        u_scale = std::max(u_scale, u_norm[static_cast<size_t>(sidx)]);
        p_scale = std::max(p_scale, std::abs(p0));

        std::array<double, 3> grad_div{}, lap_u{};
        for (int i = 0; i < 3; ++i) {
            grad_div[static_cast<size_t>(i)] =
                (div_u(shifted(x, i, h)) - div_u(shifted(x, i, -h))) / (2.0 * h);
            auto up = u_at(shifted(x, i, h));
            auto um = u_at(shifted(x, i, -h));
            for (int c = 0; c < 3; ++c)
                lap_u[static_cast<size_t>(c)] +=
                    (up[static_cast<size_t>(c)] - 2.0 * u0[static_cast<size_t>(c)] +
                     um[static_cast<size_t>(c)]) /
                    (h * h);
        }
        double lap_p = 0.0;
        for (int i = 0; i < 3; ++i)
            lap_p += (p_at(shifted(x, i, h)) - 2.0 * p0 + p_at(shifted(x, i, -h))) / (h * h);

        auto& r = res[static_cast<size_t>(sidx)];
        for (int c = 0; c < 3; ++c) {
            size_t ci = static_cast<size_t>(c);
            // Q_A u + (lambda0 + 2/3 mu0) k_b u, with the common modulus factored out
            r.qa[ci] = grad_div[ci] + k_b * u0[ci];
            // Q_B u + 4/3 mu0 k_b u, divided through by mu0
            r.qb[ci] = lap_u[ci] + grad_div[ci] / 3.0 + (4.0 / 3.0) * k_b * u0[ci];
        }
        r.div_err = std::abs(div_u(x) - p0);
        r.lap_err = std::abs(lap_p + k_b * p0);
    }

    for (const auto& r : res) {
        double qa = std::sqrt(r.qa[0] * r.qa[0] + r.qa[1] * r.qa[1] + r.qa[2] * r.qa[2]);
        double qb = std::sqrt(r.qb[0] * r.qb[0] + r.qb[1] * r.qb[1] + r.qb[2] * r.qb[2]);
        rep.qa_rel = std::max(rep.qa_rel, qa / (k_b * u_scale));
        rep.qb_rel = std::max(rep.qb_rel, qb / ((4.0 / 3.0) * k_b * u_scale));
        rep.div_rel = std::max(rep.div_rel, r.div_err / p_scale);
        rep.laplace_rel = std::max(rep.laplace_rel, r.lap_err / (k_b * p_scale));
    }

    // analytic traction identity at the surface; equals f(r_ell)/r_ell^3 up
    // to the modulus normalization
    double w = mode.r;
    double y = bessel_j0s(w);
    double yp = (w * std::cos(w) - std::sin(w)) / (w * w) * (mode.r / mode.R);
    double expr = (lambda0 + 2.0 * mu0) * y + 4.0 * mu0 * yp / (k_b * mode.R);
    rep.boundary_residual = std::abs(expr) / (lambda0 + 2.0 * mu0);
    return rep;
}

std::string modes_csv(std::span<const RadialMode> modes) {
    std::ostringstream out;
    out << "ell,r_ell,k_b\n";
    for (const auto& m : modes)
        out << m.ell << ',' << format_number(m.r) << ',' << format_number(m.k_b) << '\n';
    return out.str();
}

} // namespace ebm
