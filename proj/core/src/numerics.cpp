#include "ebm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebm/errors.hpp"

namespace ebm {

namespace {

double offdiag_frobenius(const DenseMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.order(); ++i)
        for (int j = 0; j < a.order(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

EighResult jacobi_eigh(const DenseMatrix& m) {
    if (!m.is_symmetric(1e-12))
        fail(errc::non_symmetric, "matrix fails 1e-12 relative symmetry check");

    int n = m.order();
    DenseMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    double norm = a.frobenius_norm();
    double target = 1e-14 * norm;

    if (n > 1) {
        bool converged = offdiag_frobenius(a) <= target;
        int sweep = 0;
        while (!converged) {
            if (++sweep > 100) fail(errc::no_convergence, "jacobi exceeded 100 sweeps");
            for (int p = 0; p < n - 1; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    double apq = a(p, q);
                    if (std::abs(apq) <= 1e-300) continue;
                    double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                    double t = (theta >= 0.0 ? 1.0 : -1.0) /
                               (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    double c = 1.0 / std::sqrt(t * t + 1.0);
                    double s = t * c;
                    double tau = s / (1.0 + c);

                    double app = a(p, p), aqq = a(q, q);
                    a(p, p) = app - t * apq;
                    a(q, q) = aqq + t * apq;
                    a(p, q) = a(q, p) = 0.0;
                    for (int k = 0; k < n; ++k) {
                        if (k == p || k == q) continue;
                        double akp = a(k, p), akq = a(k, q);
                        a(k, p) = a(p, k) = akp - s * (akq + tau * akp);
                        a(k, q) = a(q, k) = akq + s * (akp - tau * akq);
                    }
                    for (int k = 0; k < n; ++k) {
                        double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = vkp - s * (vkq + tau * vkp);
                        v(k, q) = vkq + s * (vkp - tau * vkq);
                    }
                }
            }
            converged = offdiag_frobenius(a) <= target;
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EighResult out;
    out.eigenvalues.resize(n);
    out.eigenvectors = DenseMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

DenseMatrix expm(const DenseMatrix& m, double t) {
    if (!std::isfinite(t)) fail(errc::bad_input, "expm requires finite t");
    int n = m.order();
    DenseMatrix a = m;
    a *= t;

    double norm = a.max_abs() * n;
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a *= std::ldexp(1.0, -squarings);
    }

    DenseMatrix result = DenseMatrix::identity(n);
    DenseMatrix term = DenseMatrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * a;
        term *= 1.0 / k;
        result += term;
        if (term.max_abs() <= 1e-18 * std::max(1.0, result.max_abs())) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

double brent_root(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        fail(errc::no_sign_change, "bracket endpoints have the same sign");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * rel_tol * std::abs(b);
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc;
                double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1)
            b += d;
        else
            b += (xm >= 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

namespace {

// Double-double value and the error-free transforms it needs. The
// Faddeev-LeVerrier recurrence turns power sums of size ||M||^k into small
// elementary-symmetric coefficients by cancellation, which plain doubles (or
// even long double) cannot survive for wide eigenvalue spreads.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    DD out = two_sum(s.hi, s.lo);
    return out;
}

inline DD dd_add(DD a, double b) { return dd_add(a, DD{b, 0.0}); }

// double * dd
inline DD dd_mul(double a, DD b) {
    DD p = two_prod(a, b.hi);
    p.lo += a * b.lo;
    return two_sum(p.hi, p.lo);
}

inline DD dd_div_int(DD a, int k) {
    double q1 = a.hi / k;
    double r = std::fma(-q1, k, a.hi) + a.lo;
    double q2 = r / k;
    return two_sum(q1, q2);
}

} // namespace

Poly char_poly_of_matrix(const DenseMatrix& m) {
    int n = m.order();
    if (n > 64) fail(errc::bad_input, "char_poly_of_matrix limited to order 64");
    if (n == 0) return Poly(std::vector<double>{1.0});

    // Faddeev-LeVerrier: M_k = M (M_{k-1} + c_{k-1} I), c_k = -tr(M_k)/k,
    // accumulated in double-double.
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0; // monic
    auto idx = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

    std::vector<DD> mk(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mk[idx(i, j)] = {m(i, j), 0.0};

    std::vector<DD> shifted(mk.size()), next(mk.size());
    DD ck{0.0, 0.0};
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            shifted = mk;
            for (int i = 0; i < n; ++i)
                shifted[idx(i, i)] = dd_add(shifted[idx(i, i)], ck);
            std::fill(next.begin(), next.end(), DD{});
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l) {
                    double ail = m(i, l);
                    if (ail == 0.0) continue;
                    for (int j = 0; j < n; ++j)
                        next[idx(i, j)] = dd_add(next[idx(i, j)], dd_mul(ail, shifted[idx(l, j)]));
                }
            mk = next;
        }
        DD trace{0.0, 0.0};
        for (int i = 0; i < n; ++i) trace = dd_add(trace, mk[idx(i, i)]);
        ck = dd_div_int(DD{-trace.hi, -trace.lo}, k);
        c[n - k] = ck.hi + ck.lo;
    }
    return Poly(std::move(c));
}

} // namespace ebm
