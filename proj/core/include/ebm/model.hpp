#pragma once

#include <string>
#include <vector>

#include "ebm/dense.hpp"

namespace ebm {

// One spring-dashpot unit: Lame moduli of the spring, viscosity of the
// dashpot.
struct ViscoElement {
    double lambda = 0.0;
    double mu = 0.0;
    double eta = 0.0;
};

// Extended Burgers material on a ball of radius R: element 0 is the Maxwell
// unit, elements 1..n the Kelvin-Voigt units in series with it.
struct EBMModel {
    int n = 0;
    double R = 1.0;
    std::vector<ViscoElement> elements; // n + 1 entries

    // b = sum_i 1/eta_i
    double b() const;
};

// Every violated invariant, one message each; empty means valid. Checks
// element count, R > 0, eta_i > 0, and strong convexity of every element
// against delta = 1e-12 * (largest modulus magnitude).
std::vector<std::string> validate(const EBMModel& m);

// Throws invalid_model listing all violations.
void require_valid(const EBMModel& m);

enum class ModeKind { shear, bulk };

// Symmetrized relaxation-mode matrix of order n+1; symmetric and negative
// definite for every valid model.
struct ModeMatrix {
    ModeKind kind = ModeKind::shear;
    DenseMatrix matrix;
};

ModeMatrix assemble(const EBMModel& m, ModeKind kind);

// The raw (unsymmetrized) shear mode matrix. Provided to test that the
// diagonal similarity leaves the (1,1) entry of the exponential unchanged.
DenseMatrix assemble_unsymmetrized_shear(const EBMModel& m);

// JSON schema: {"n": int, "R": float, "elements": [{"lambda","mu","eta"}...]}
// with numbers emitted at 17 significant digits.
std::string model_to_json(const EBMModel& m);
EBMModel model_from_json(const std::string& text);

} // namespace ebm
