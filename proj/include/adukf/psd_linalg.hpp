#pragma once

// Small dense symmetric linear algebra shared by all filter variants.
// Matrices here are tiny (n <= ~30), so everything is plain dense Eigen.

#include "adukf/types.hpp"

namespace adukf::linalg {

/// Pivot tolerance, relative to the largest absolute diagonal entry.
inline constexpr double kPivotTolerance = 1e-12;

/// (M + M^T) / 2.
Matrix symmetrize(const Matrix& m);

struct CholeskyFactor {
    Matrix lower;     ///< L with L L^T ~= M; lower triangular only when definite
    bool definite{};  ///< true only if every pivot was strictly positive
};

/// Cholesky factorization that tolerates positive semi-definite input.
///
/// A pivot at or below tol*s (s = max |M_ii|) switches to a symmetrically
/// pivoted factorization that stops once every remaining pivot is below tol*s;
/// `definite` is then false and the factor has trailing zero columns but is not
/// triangular. A remaining pivot below -tol*s throws IndefiniteMatrix.
CholeskyFactor psd_cholesky(const Matrix& m, double tol = kPivotTolerance);

enum class Rank1 { update, downdate };

/// Returns R with R R^T = L L^T + v v^T (update) or L L^T - v v^T (downdate).
/// Throws DowndateBreaksPD if the downdated product is not positive definite.
Matrix chol_rank1(const Matrix& lower, const Vector& v, Rank1 sign);

/// Lower-triangular L (r x r) with L L^T = M M^T for M of size r x c, c >= r.
/// Diagonal entries are normalized to be nonnegative.
Matrix triangularize(const Matrix& m);

/// Solves M X = B for SPD M. Throws IndefiniteMatrix if M is not definite.
Matrix solve_spd(const Matrix& m, const Matrix& b);

/// Inverse of an SPD matrix via solve_spd.
Matrix inverse_spd(const Matrix& m);

}  // namespace adukf::linalg
