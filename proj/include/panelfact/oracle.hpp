#pragma once

#include "panelfact/matrix.hpp"

namespace panelfact {

struct LuFactors {
    Matrix lower; ///< lower triangular, diagonal not normalized
    Matrix upper; ///< upper triangular, unit diagonal
};

struct QrFactors {
    Matrix q;
    Matrix r;
    /// Frobenius norm of the strict lower triangle of Q^T A dropped when forming R.
    double discarded_lower_mass = 0.0;
};

/// Relative pivot threshold shared by LU and QR: 1e-12 * ||A||_F / n.
double pivot_tolerance(const Matrix& a);

namespace oracle {

// Unblocked reference factorizations. All require square input.

/// Left-looking Cholesky: column c is built from columns 1..c-1 with k ascending.
Matrix cholesky_crout(const Matrix& a);

/// Right-looking Cholesky: after each column the trailing block is updated by -v v^T.
Matrix cholesky_recursive(const Matrix& a);

/// Crout LU without pivoting. U has an exact unit diagonal; L keeps the pivots.
LuFactors lu_crout_unit_u(const Matrix& a);

/// Modified Gram-Schmidt. R is formed as Q^T A once Q is complete and its strict
/// lower triangle is zeroed.
QrFactors qr_mgs(const Matrix& a);

} // namespace oracle
} // namespace panelfact
