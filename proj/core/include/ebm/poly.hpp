#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ebm {

// Compensated accumulator. Polynomial coefficient assembly cancels near the
// constant term, so sums of products go through this instead of bare +=.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Real polynomial, coefficients in ascending degree order. Trailing zero
// coefficients are trimmed on construction so the leading coefficient is
// nonzero for every nonzero polynomial.
class Poly {
public:
    Poly() : coeffs_{0.0} {}
    explicit Poly(std::vector<double> ascending);

    // Monic product of (z - r_i), scaled by `leading`, assembled with
    // compensated accumulation.
    static Poly from_roots(std::span<const double> roots, double leading = 1.0);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    // Coefficient of z^k, zero outside the stored range.
    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
    }

    double eval(double z) const;
    std::complex<double> eval(std::complex<double> z) const;

    Poly derivative() const;
    // Synthetic division by (z - root); the remainder is discarded.
    Poly deflated(double root) const;

    double coeff_norm1() const;
    double coeff_norm_inf() const;

private:
    std::vector<double> coeffs_;
};

// All complex roots. Balanced companion matrix eigenvalues, then Newton
// polish against the original polynomial; roots with
// |imag| < 1e-9 * (1 + |real|) are snapped to the real axis.
// Throws degenerate_leading_coefficient when degree < 1 after trimming.
std::vector<std::complex<double>> poly_roots(const Poly& p);

inline bool is_effectively_real(std::complex<double> z, double snap = 1e-9) {
    return std::abs(z.imag()) < snap * (1.0 + std::abs(z.real()));
}

} // namespace ebm
