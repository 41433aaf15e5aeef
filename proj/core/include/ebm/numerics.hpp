#pragma once

#include <functional>
#include <vector>

#include "ebm/dense.hpp"
#include "ebm/poly.hpp"

namespace ebm {

struct EighResult {
    std::vector<double> eigenvalues; // ascending
    DenseMatrix eigenvectors;        // orthonormal columns, matching order
};

// Cyclic Jacobi sweeps (deterministic pivot order) until the off-diagonal
// Frobenius norm drops below 1e-14 * ||M||_F. Throws non_symmetric when the
// input fails a 1e-12 relative symmetry check, no_convergence after 100
// sweeps.
EighResult jacobi_eigh(const DenseMatrix& m);

// exp(t*M) by scaling-and-squaring with a truncated Taylor series; absolute
// accuracy around 1e-13 for the matrix scales used here.
DenseMatrix expm(const DenseMatrix& m, double t);

// Brent's method on [a, b]. Requires a sign change (throws no_sign_change);
// the returned root lies inside the bracket to relative tolerance rel_tol.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double rel_tol = 1e-13);

// Monic characteristic polynomial det(zI - M) via the Faddeev-LeVerrier
// recurrence; exact for small integer matrices. Order <= 64.
Poly char_poly_of_matrix(const DenseMatrix& m);

} // namespace ebm
