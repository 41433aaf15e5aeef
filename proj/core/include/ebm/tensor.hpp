#pragma once

#include <array>
#include <cmath>

namespace ebm {

// Symmetric 3x3 tensor stored as its six independent components. Minor
// symmetry is structural: there is no way to build a non-symmetric value.
struct SymTensor3 {
    double xx = 0.0, yy = 0.0, zz = 0.0;
    double xy = 0.0, xz = 0.0, yz = 0.0;

    static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
    static SymTensor3 diag(double a, double b, double c) { return {a, b, c, 0.0, 0.0, 0.0}; }

    double trace() const { return xx + yy + zz; }

    // Full-matrix view, for finite-difference and cross-library checks.
    std::array<std::array<double, 3>, 3> full() const {
        return {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}};
    }

    SymTensor3& operator+=(const SymTensor3& o) {
        xx += o.xx; yy += o.yy; zz += o.zz;
        xy += o.xy; xz += o.xz; yz += o.yz;
        return *this;
    }
    SymTensor3& operator-=(const SymTensor3& o) {
        xx -= o.xx; yy -= o.yy; zz -= o.zz;
        xy -= o.xy; xz -= o.xz; yz -= o.yz;
        return *this;
    }
    SymTensor3& operator*=(double s) {
        xx *= s; yy *= s; zz *= s;
        xy *= s; xz *= s; yz *= s;
        return *this;
    }

    friend SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
    friend SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
    friend SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
    friend SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }
};

// Full contraction A:B; off-diagonal components count twice.
inline double ddot(const SymTensor3& a, const SymTensor3& b) {
    return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz +
           2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

inline double frobenius_norm(const SymTensor3& a) { return std::sqrt(ddot(a, a)); }

enum class Part { volumetric, deviatoric };

// Volumetric projection (tr e / 3) I and its deviatoric complement. The two
// projectors are idempotent and mutually annihilating.
inline SymTensor3 project(const SymTensor3& e, Part part) {
    double third_trace = e.trace() / 3.0;
    SymTensor3 vol = {third_trace, third_trace, third_trace, 0.0, 0.0, 0.0};
    if (part == Part::volumetric) return vol;
    return e - vol;
}

// Isotropic fourth-order tensor, represented by its two Lame moduli. Full
// (major + minor) symmetry is automatic for this family.
struct IsoTensor4 {
    double lambda = 0.0;
    double mu = 0.0;
};

// C e = lambda tr(e) I + 2 mu e
inline SymTensor3 apply_iso(const IsoTensor4& c, const SymTensor3& e) {
    double d = c.lambda * e.trace();
    SymTensor3 out = e * (2.0 * c.mu);
    out.xx += d;
    out.yy += d;
    out.zz += d;
    return out;
}

// mu >= delta and 3 lambda + 2 mu >= delta
inline bool check_strong_convexity(double lambda, double mu, double delta) {
    return mu >= delta && 3.0 * lambda + 2.0 * mu >= delta;
}

} // namespace ebm
