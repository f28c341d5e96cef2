#include "adukf/psd_linalg.hpp"

#include <cmath>
#include <string>

#include "adukf/errors.hpp"

namespace adukf::linalg {

Matrix symmetrize(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("symmetrize: matrix is not square");
    }
    return 0.5 * (m + m.transpose());
}

namespace {

// Outer-product Cholesky choosing the largest remaining diagonal each step.
// Column k of the result is the k-th pivot column in the original row order,
// so L L^T = M holds without a permutation but L is not triangular.
Matrix pivoted_psd_factor(const Matrix& m, double pivot_tol) {
    const Index n = m.rows();
    Matrix schur = m;
    Matrix l = Matrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) {
        Index p = 0;
        const double d = schur.diagonal().maxCoeff(&p);
        if (!(d > pivot_tol)) {
            break;
        }
        const Vector col = schur.col(p) / std::sqrt(d);
        l.col(k) = col;
        schur -= col * col.transpose();
    }
    const double lowest = schur.diagonal().minCoeff();
    if (lowest < -pivot_tol || !std::isfinite(lowest)) {
        throw IndefiniteMatrix("psd_cholesky: negative pivot " + std::to_string(lowest));
    }
    return l;
}

}  // namespace

CholeskyFactor psd_cholesky(const Matrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("psd_cholesky: matrix must be square and non-empty");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("psd_cholesky: tolerance must be positive");
    }
    const Index n = m.rows();
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) {
        throw IndefiniteMatrix("psd_cholesky: non-finite entries");
    }
    const double pivot_tol = tol * scale;

    CholeskyFactor out{Matrix::Zero(n, n), true};
    Matrix& l = out.lower;
    for (Index j = 0; j < n; ++j) {
        const double pivot = m(j, j) - l.row(j).head(j).squaredNorm();
        if (!(pivot > pivot_tol)) {
            // Round-off in an unpivoted pass over a singular matrix can push
            // later pivots negative, so restart with symmetric pivoting.
            out.lower = pivoted_psd_factor(m, pivot_tol);
            out.definite = false;
            return out;
        }
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Index i = j + 1; i < n; ++i) {
            l(i, j) = (m(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
        }
    }
    return out;
}

Matrix chol_rank1(const Matrix& lower, const Vector& v, Rank1 sign) {
    const Index n = lower.rows();
    if (lower.cols() != n || v.size() != n) {
        throw std::invalid_argument("chol_rank1: dimension mismatch");
    }
    Matrix l = lower;
    Vector x = v;
    const bool up = sign == Rank1::update;
    for (Index k = 0; k < n; ++k) {
        if (x(k) == 0.0) {
            continue;
        }
        const double lkk = l(k, k);
        if (lkk <= 0.0) {
            if (!up) {
                throw DowndateBreaksPD("chol_rank1: downdate of a singular factor");
            }
            // Semi-definite column: the rotation is undefined, fall back to QR
            // on the remaining sum L L^T + x x^T.
            Matrix stacked(n, n + 1);
            stacked << l, x;
            return triangularize(stacked);
        }
        const double r2 = up ? lkk * lkk + x(k) * x(k) : lkk * lkk - x(k) * x(k);
        if (r2 <= 0.0) {
            throw DowndateBreaksPD("chol_rank1: downdate would lose positive definiteness at index " +
                                   std::to_string(k));
        }
        const double r = std::sqrt(r2);
        const double c = r / lkk;
        const double s = x(k) / lkk;
        l(k, k) = r;
        for (Index i = k + 1; i < n; ++i) {
            l(i, k) = up ? (l(i, k) + s * x(i)) / c : (l(i, k) - s * x(i)) / c;
            x(i) = c * x(i) - s * l(i, k);
        }
    }
    return l;
}

Matrix triangularize(const Matrix& m) {
    const Index r = m.rows();
    if (m.cols() < r) {
        throw std::invalid_argument("triangularize: need at least as many columns as rows");
    }
    Eigen::HouseholderQR<Matrix> qr(m.transpose());
    Matrix l = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
    for (Index j = 0; j < r; ++j) {
        if (l(j, j) < 0.0) {
            l.col(j) *= -1.0;
        }
    }
    return l;
}

Matrix solve_spd(const Matrix& m, const Matrix& b) {
    if (b.rows() != m.rows()) {
        throw std::invalid_argument("solve_spd: right-hand side has wrong row count");
    }
    const CholeskyFactor f = psd_cholesky(m);
    if (!f.definite) {
        throw IndefiniteMatrix("solve_spd: matrix is singular");
    }
    const auto l = f.lower.triangularView<Eigen::Lower>();
    Matrix y = l.solve(b);
    return l.transpose().solve(y);
}

Matrix inverse_spd(const Matrix& m) {
    return solve_spd(m, Matrix::Identity(m.rows(), m.cols()));
}

}  // namespace adukf::linalg
