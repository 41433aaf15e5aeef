#include "ebm/poly.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "ebm/errors.hpp"

namespace ebm {

Poly::Poly(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Poly Poly::from_roots(std::span<const double> roots, double leading) {
    std::vector<double> c(roots.size() + 1, 0.0);
    c[0] = leading;
    size_t deg = 0;
    for (double r : roots) {
        ++deg;
        c[deg] = c[deg - 1];
        for (size_t k = deg - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return Poly(std::move(c));
}

double Poly::eval(double z) const {
    double acc = coeffs_.back();
    for (size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
}

std::complex<double> Poly::eval(std::complex<double> z) const {
    std::complex<double> acc = coeffs_.back();
    for (size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return Poly(std::vector<double>{0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::deflated(double root) const {
    if (degree() < 1) fail(errc::bad_input, "cannot deflate a constant polynomial");
    std::vector<double> q(coeffs_.size() - 1, 0.0);
    double acc = coeffs_.back();
    for (size_t k = coeffs_.size() - 1; k-- > 0;) {
        q[k] = acc;
        acc = coeffs_[k] + root * acc;
    }
    return Poly(std::move(q));
}

double Poly::coeff_norm1() const {
    KahanSum s;
    for (double c : coeffs_) s.add(std::abs(c));
    return s.value();
}

double Poly::coeff_norm_inf() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

namespace {

inline double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Parlett-Reinsch balancing, diagonal similarity by powers of 2 so the
// eigenvalues are untouched exactly.
void balance(std::vector<double>& a, int n) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(at(j, i));
                    r += std::abs(at(i, j));
                }
            if (c != 0.0 && r != 0.0) {
                double g = r / radix;
                double f = 1.0;
                double s = c + r;
                while (c < g) {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while (c > g) {
                    f /= radix;
                    c /= sqrdx;
                }
                if ((c + r) / f < 0.95 * s) {
                    done = false;
                    double ginv = 1.0 / f;
                    for (int j = 0; j < n; ++j) at(i, j) *= ginv;
                    for (int j = 0; j < n; ++j) at(j, i) *= f;
                }
            }
        }
    }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
// Classic EISPACK/hqr form, zero-based.
std::vector<std::complex<double>> hessenberg_eigenvalues(std::vector<double>& a, int n) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    std::vector<std::complex<double>> ev(n);

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));
    if (anorm == 0.0) return ev;

    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(at(l, l - 1)) <= DBL_EPSILON * s) {
                    at(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = at(nn, nn);
            if (l == nn) {
                ev[nn--] = {x + t, 0.0};
            } else {
                double y = at(nn - 1, nn - 1);
                double w = at(nn, nn - 1) * at(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_like(z, p);
                        double r1 = x + z;
                        double r2 = (z != 0.0) ? x - w / z : x + z;
                        ev[nn - 1] = {r1, 0.0};
                        ev[nn] = {r2, 0.0};
                    } else {
                        ev[nn - 1] = {x + p, z};
                        ev[nn] = {x + p, -z};
                    }
                    nn -= 2;
                } else {
                    if (its == 60) fail(errc::no_convergence, "hqr exceeded 60 iterations");
                    if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) at(i, i) -= x;
                        double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    double p = 0.0, q = 0.0, r = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        double z = at(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / at(m + 1, m) + at(m, m + 1);
                        q = at(m + 1, m + 1) - z - rr - ss;
                        r = at(m + 2, m + 1);
                        double sc = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= sc;
                        q /= sc;
                        r /= sc;
                        if (m == l) break;
                        double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
                        double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                                                  std::abs(at(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        at(i, i - 2) = 0.0;
                        if (i != m + 2) at(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = at(k, k - 1);
                            q = at(k + 1, k - 1);
                            r = (k != nn - 1) ? at(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = sign_like(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) at(k, k - 1) = -at(k, k - 1);
                        } else {
                            at(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        double z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            double pp = at(k, j) + q * at(k + 1, j);
                            if (k != nn - 1) {
                                pp += r * at(k + 2, j);
                                at(k + 2, j) -= pp * z;
                            }
                            at(k + 1, j) -= pp * y;
                            at(k, j) -= pp * x;
                        }
                        int mmin = std::min(nn, k + 3);
                        for (int i = l; i <= mmin; ++i) {
                            double pp = x * at(i, k) + y * at(i, k + 1);
                            if (k != nn - 1) {
                                pp += z * at(i, k + 2);
                                at(i, k + 2) -= pp * r;
                            }
                            at(i, k + 1) -= pp * q;
                            at(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1 && nn >= 0);
    }
    return ev;
}

std::vector<std::complex<double>> quadratic_roots(double a, double b, double c) {
    double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        double q = -0.5 * (b + sign_like(s, b));
        if (q == 0.0) return {{0.0, 0.0}, {0.0, 0.0}};
        return {{q / a, 0.0}, {c / q, 0.0}};
    }
    double re = -b / (2.0 * a);
    double im = std::sqrt(-disc) / (2.0 * a);
    return {{re, im}, {re, -im}};
}

void newton_polish(const Poly& p, const Poly& dp, std::complex<double>& z) {
    std::complex<double> best = z;
    double best_abs = std::abs(p.eval(z));
    std::complex<double> zk = z;
    for (int it = 0; it < 16; ++it) {
        std::complex<double> pv = p.eval(zk);
        std::complex<double> dv = dp.eval(zk);
        if (std::abs(dv) == 0.0) break;
        std::complex<double> step = pv / dv;
        zk -= step;
        double pa = std::abs(p.eval(zk));
        if (pa < best_abs) {
            best_abs = pa;
            best = zk;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(zk))) break;
    }
    z = best;
}

} // namespace

std::vector<std::complex<double>> poly_roots(const Poly& p) {
    int deg = p.degree();
    if (deg < 1 || p.coeffs().back() == 0.0)
        fail(errc::degenerate_leading_coefficient,
             "polynomial has no usable leading coefficient (degree < 1)");

    std::vector<std::complex<double>> roots;
    if (deg == 1) {
        roots = {{-p.coeff(0) / p.coeff(1), 0.0}};
    } else if (deg == 2) {
        roots = quadratic_roots(p.coeff(2), p.coeff(1), p.coeff(0));
    } else {
        double lead = p.coeffs().back();
        std::vector<double> companion(static_cast<size_t>(deg) * deg, 0.0);
        for (int i = 0; i + 1 < deg; ++i) companion[static_cast<size_t>(i + 1) * deg + i] = 1.0;
        for (int i = 0; i < deg; ++i)
            companion[static_cast<size_t>(i) * deg + (deg - 1)] = -p.coeff(i) / lead;
        balance(companion, deg);
        roots = hessenberg_eigenvalues(companion, deg);
    }

    Poly dp = p.derivative();
    for (auto& z : roots) newton_polish(p, dp, z);

    for (auto& z : roots)
        if (is_effectively_real(z)) z = {z.real(), 0.0};

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

} // namespace ebm
