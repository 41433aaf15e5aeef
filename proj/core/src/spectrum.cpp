#include "ebm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebm/errors.hpp"
#include "json_util.hpp"

namespace ebm {

PronyPair build_prony(const EBMModel& m, const RelaxationSpectrum& s) {
    if (s.shear.empty() || s.shear.size() != s.bulk.size())
        fail(errc::ordering_violation,
             "shear and bulk mode counts differ (degenerate spectrum?)");
    double max_tau = s.shear.back().rate;
    double min_kappa = s.bulk.front().rate;
    if (!(max_tau < min_kappa))
        fail(errc::ordering_violation,
             "max shear rate >= min bulk rate; the shear/bulk index split is ambiguous");

    PronyPair p;
    p.n = static_cast<int>(s.shear.size()) - 1;
    p.D = s.lambda0 + 2.0 * s.mu0;
    double shear_factor = (4.0 / 3.0) * s.mu0;
    double bulk_factor = s.lambda0 + (2.0 / 3.0) * s.mu0;
    for (const auto& mode : s.shear) {
        p.beta.push_back(mode.rate);
        p.alpha.push_back(shear_factor * mode.rate * mode.weight);
    }
    for (const auto& mode : s.bulk) {
        p.beta.push_back(mode.rate);
        p.alpha.push_back(bulk_factor * mode.rate * mode.weight);
    }
    (void)m; // the model's moduli already live in the spectrum
    return p;
}

namespace {

// (D + c z^2) Pi(z + beta_j) - sum_i alpha_i Pi_{j != i}(z + beta_j),
// assembled coefficientwise with compensated sums; c = 0 gives the limit
// polynomial.
Poly assemble_char_poly(const PronyPair& p, double c) {
    int nb = static_cast<int>(p.beta.size());
    std::vector<double> neg_beta(p.beta.size());
    for (size_t i = 0; i < p.beta.size(); ++i) neg_beta[i] = -p.beta[i];
    Poly q = Poly::from_roots(neg_beta); // Pi (z + beta_j), monic

    std::vector<KahanSum> acc(static_cast<size_t>(nb) + 3);
    for (int k = 0; k <= q.degree(); ++k) {
        acc[static_cast<size_t>(k)].add(p.D * q.coeff(k));
        if (c != 0.0) acc[static_cast<size_t>(k) + 2].add(c * q.coeff(k));
    }
    for (int i = 0; i < nb; ++i) {
        std::vector<double> others;
        others.reserve(p.beta.size() - 1);
        for (int j = 0; j < nb; ++j)
            if (j != i) others.push_back(-p.beta[static_cast<size_t>(j)]);
        Poly qi = Poly::from_roots(others);
        for (int k = 0; k <= qi.degree(); ++k)
            acc[static_cast<size_t>(k)].add(-p.alpha[static_cast<size_t>(i)] * qi.coeff(k));
    }

    std::vector<double> coeffs;
    coeffs.reserve(acc.size());
    int degree = (c != 0.0) ? nb + 2 : nb;
    for (int k = 0; k <= degree; ++k) coeffs.push_back(acc[static_cast<size_t>(k)].value());
    return Poly(std::move(coeffs));
}

double secular(const PronyPair& p, double c, double z) {
    KahanSum s;
    for (size_t i = 0; i < p.beta.size(); ++i) s.add(p.alpha[i] / (z + p.beta[i]));
    s.add(-p.D);
    s.add(-c * z * z);
    return s.value();
}

double secular_derivative(const PronyPair& p, double c, double z) {
    KahanSum s;
    for (size_t i = 0; i < p.beta.size(); ++i) {
        double d = z + p.beta[i];
        s.add(-p.alpha[i] / (d * d));
    }
    s.add(-2.0 * c * z);
    return s.value();
}

// Magnitude scale of evaluating p at z: sum_k |c_k| |z|^k. The residual of a
// numerically exact root cannot be expected below eps times this.
double eval_scale(const Poly& p, double z) {
    double acc = 0.0, zk = 1.0;
    for (int k = 0; k <= p.degree(); ++k) {
        acc += std::abs(p.coeff(k)) * zk;
        zk *= std::abs(z);
    }
    return acc;
}

} // namespace

Poly char_poly_ell(const PronyPair& p, double c) {
    if (!(c > 0.0)) fail(errc::bad_input, "multiplier c must be positive");
    Poly poly = assemble_char_poly(p, c);
    // P(0) = Pi(beta) (D - sum alpha/beta) vanishes identically; anything
    // bigger than rounding means the pair is inconsistent.
    if (std::abs(poly.coeff(0)) >= 1e-12 * poly.coeff_norm1())
        fail(errc::cross_check_failure,
             "constant coefficient of the cluster polynomial is not negligible");
    return poly;
}

Poly limit_poly(const PronyPair& p) { return assemble_char_poly(p, 0.0); }

ClusterSpectrum cluster_roots(const PronyPair& p, const RadialMode& mode) {
    for (size_t i = 0; i < p.alpha.size(); ++i)
        if (p.alpha[i] < 1e-12 * p.D * p.beta[i])
            fail(errc::degenerate_strengths,
                 "a strength is too small to separate the secular root from its pole");

    double c = mode.R * mode.R / (mode.r * mode.r);
    ClusterSpectrum cs;
    cs.ell = mode.ell;
    cs.c = c;
    cs.poly = char_poly_ell(p, c);

    // a1 = 0 is exact: the constant coefficient vanishes by the sum rule.
    cs.real_roots.push_back(0.0);
    int nb = static_cast<int>(p.beta.size());
    for (int j = 0; j + 1 < nb; ++j) {
        double b_lo = p.beta[static_cast<size_t>(j)];
        double b_hi = p.beta[static_cast<size_t>(j) + 1];
        double eps = 1e-9 * (b_hi - b_lo);
        double lo = -b_hi + eps;
        double hi = -b_lo - eps;
        double flo = secular(p, c, lo);
        double fhi = secular(p, c, hi);
        if ((flo > 0.0) == (fhi > 0.0))
            fail(errc::bracket_failure, "interlacing bracket lost its sign change");
        double root = brent_root([&](double z) { return secular(p, c, z); }, lo, hi);
        // Newton-polish on the secular function; Brent's x-tolerance leaves a
        // residual proportional to phi' that matters near a pole
        for (int it = 0; it < 3; ++it) {
            double fv = secular(p, c, root);
            double dv = secular_derivative(p, c, root);
            if (dv == 0.0) break;
            double next = root - fv / dv;
            if (!(next > lo && next < hi)) break;
            if (next == root) break;
            root = next;
        }
        cs.real_roots.push_back(root);
    }

    // The two remaining roots: deflate the analytic zero root (drop the
    // constant coefficient), then the secular roots, largest magnitude first.
    std::vector<double> deflate_order(cs.real_roots.begin() + 1, cs.real_roots.end());
    std::sort(deflate_order.begin(), deflate_order.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    Poly work{std::vector<double>(cs.poly.coeffs().begin() + 1, cs.poly.coeffs().end())};
    for (double root : deflate_order) work = work.deflated(root);
    if (work.degree() != 2)
        fail(errc::cross_check_failure, "deflation did not leave a quadratic remainder");
    auto extra = poly_roots(work);

    // polish against the full polynomial, then verify every stored root
    Poly dp = cs.poly.derivative();
    for (auto& z : extra) {
        for (int it = 0; it < 8; ++it) {
            std::complex<double> pv = cs.poly.eval(z);
            std::complex<double> dv = dp.eval(z);
            if (std::abs(dv) == 0.0) break;
            std::complex<double> step = pv / dv;
            z -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
        }
        if (is_effectively_real(z)) z = {z.real(), 0.0};
    }
    cs.extra_roots.assign(extra.begin(), extra.end());

    auto all_roots = poly_roots(cs.poly);
    for (double a : cs.real_roots) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& z : all_roots) best = std::min(best, std::abs(z - std::complex<double>(a, 0.0)));
        if (best > 1e-8 * (1.0 + std::abs(a)))
            fail(errc::cross_check_failure,
                 "secular root not found in the companion-matrix root list");
    }

    // Residual bound per root. For |root| > 1 the coefficient 1-norm is not
    // an achievable scale in floating point; the evaluation magnitude is.
    double norm1 = cs.poly.coeff_norm1();
    for (double a : cs.real_roots) {
        double scale = 1e-9 * std::max(norm1, eval_scale(cs.poly, a));
        if (std::abs(cs.poly.eval(a)) >= scale)
            fail(errc::cross_check_failure, "real root fails the polynomial residual bound");
    }
    for (const auto& z : cs.extra_roots) {
        double scale = 1e-9 * std::max(norm1, eval_scale(cs.poly, std::abs(z)));
        if (std::abs(cs.poly.eval(z)) >= scale)
            fail(errc::cross_check_failure, "extra root fails the polynomial residual bound");
    }

    return cs;
}

DenseMatrix augmented_matrix(const PronyPair& p, const RadialMode& mode) {
    int nb = static_cast<int>(p.beta.size());
    int order = nb + 2;
    double k_b = mode.k_b;
    DenseMatrix a(order);
    a(0, 1) = 1.0;
    a(1, 0) = -p.D * k_b;
    for (int j = 0; j < nb; ++j) {
        a(1, 2 + j) = -p.alpha[static_cast<size_t>(j)];
        a(2 + j, 0) = -k_b;
        a(2 + j, 2 + j) = -p.beta[static_cast<size_t>(j)];
    }
    return a;
}

ModalTrajectory modal_simulate(const PronyPair& p, const RadialMode& mode,
                               std::span<const double> initial,
                               std::span<const double> t_grid) {
    int order = static_cast<int>(p.beta.size()) + 2;
    if (static_cast<int>(initial.size()) != order)
        fail(errc::bad_input, "initial state must have 2n+4 entries");
    if (t_grid.size() < 2) fail(errc::bad_input, "need at least two grid points");
    double h = t_grid[1] - t_grid[0];
    if (!(h > 0.0)) fail(errc::non_uniform_grid, "grid must be strictly increasing");
    for (size_t k = 1; k < t_grid.size(); ++k)
        if (std::abs(t_grid[k] - t_grid[k - 1] - h) > 1e-9 * h)
            fail(errc::non_uniform_grid, "grid spacing is not uniform");

    double rate_scale = std::max(p.beta.back(), std::sqrt(p.D * mode.k_b));
    if (h > 0.1 / rate_scale)
        fail(errc::step_too_large, "RK4 step exceeds 0.1 / max(beta, sqrt(D k_b))");

    DenseMatrix a = augmented_matrix(p, mode);
    ModalTrajectory traj;
    traj.times.assign(t_grid.begin(), t_grid.end());
    traj.states.reserve(t_grid.size());

    std::vector<double> u(initial.begin(), initial.end());
    traj.states.push_back(u);
    auto axpy = [order](std::vector<double>& y, double s, const std::vector<double>& x) {
        for (int i = 0; i < order; ++i) y[static_cast<size_t>(i)] += s * x[static_cast<size_t>(i)];
    };
    for (size_t k = 1; k < t_grid.size(); ++k) {
        std::vector<double> k1 = a.apply(u);
        std::vector<double> tmp = u;
        axpy(tmp, 0.5 * h, k1);
        std::vector<double> k2 = a.apply(tmp);
        tmp = u;
        axpy(tmp, 0.5 * h, k2);
        std::vector<double> k3 = a.apply(tmp);
        tmp = u;
        axpy(tmp, h, k3);
        std::vector<double> k4 = a.apply(tmp);
        axpy(u, h / 6.0, k1);
        axpy(u, h / 3.0, k2);
        axpy(u, h / 3.0, k3);
        axpy(u, h / 6.0, k4);
        traj.states.push_back(u);
    }
    return traj;
}

std::string cluster_to_json(const ClusterSpectrum& cs) {
    nlohmann::json j;
    j["ell"] = cs.ell;
    j["c"] = cs.c;
    j["real_roots"] = cs.real_roots;
    auto& extra = j["extra_roots"] = nlohmann::json::array();
    for (const auto& z : cs.extra_roots) extra.push_back({z.real(), z.imag()});
    j["poly"] = cs.poly.coeffs();
    return detail::dump_17g(j);
}

ClusterSpectrum cluster_from_json(const std::string& text) {
    auto j = detail::parse_or_fail(text, "cluster");
    ClusterSpectrum cs;
    try {
        cs.ell = j.at("ell").get<int>();
        cs.c = j.at("c").get<double>();
        cs.real_roots = j.at("real_roots").get<std::vector<double>>();
        for (const auto& pair : j.at("extra_roots"))
            cs.extra_roots.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        cs.poly = Poly(j.at("poly").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& ex) {
        fail(errc::bad_input, std::string("cluster JSON schema: ") + ex.what());
    }
    return cs;
}

} // namespace ebm
