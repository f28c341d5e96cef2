#include "adukf/sigma_points.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "adukf/errors.hpp"
#include "adukf/psd_linalg.hpp"

namespace adukf {

void UkfTuning::validate() const {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("UkfTuning: alpha must be positive");
    }
    if (gamma_override && !(*gamma_override > 0.0)) {
        throw std::invalid_argument("UkfTuning: gamma_override must be positive");
    }
}

Scaling scaling(Index n, const UkfTuning& tuning) {
    if (n < 1) {
        throw std::invalid_argument("scaling: dimension must be >= 1");
    }
    tuning.validate();
    const auto nd = static_cast<double>(n);
    Scaling s;
    s.lambda = tuning.alpha * tuning.alpha * (nd + tuning.kappa) - nd;
    if (tuning.gamma_override) {
        s.gamma = *tuning.gamma_override;
        return s;
    }
    const double radicand = nd + s.lambda;
    if (radicand < 0.0) {
        throw NegativeRadicand("scaling: n + lambda = " + std::to_string(radicand) + " < 0");
    }
    s.gamma = std::sqrt(radicand);
    return s;
}

WeightSet weights(Index order, double lambda, double alpha, double beta) {
    const double denom = static_cast<double>(order) + lambda;
    if (order < 1 || !(denom > 0.0)) {
        throw DegenerateWeights("weights: L + lambda = " + std::to_string(denom) + " <= 0");
    }
    const Index count = 2 * order + 1;
    WeightSet w;
    w.order = order;
    w.lambda = lambda;
    w.wx = Vector::Constant(count, 1.0 / (2.0 * denom));
    w.wx(0) = lambda / denom;
    w.wc = w.wx;
    w.wc(0) += 1.0 - alpha * alpha + beta;
    return w;
}

WeightSet weights_for_order(Index order, const UkfTuning& tuning) {
    const auto L = static_cast<double>(order);
    const double lambda = tuning.alpha * tuning.alpha * (L + tuning.kappa) - L;
    return weights(order, lambda, tuning.alpha, tuning.beta);
}

SigmaPointSet draw_from_factor(const Vector& mean, const Matrix& lower, double gamma,
                               const WeightSet& weights, const Partition& partition) {
    const Index L = mean.size();
    if (lower.rows() != L || lower.cols() != L || weights.order != L ||
        partition.dimension() != L) {
        throw std::invalid_argument("draw: dimension mismatch between mean, factor, weights");
    }
    SigmaPointSet set{Matrix(L, 2 * L + 1), partition, weights};
    set.points.col(0) = mean;
    for (Index i = 0; i < L; ++i) {
        set.points.col(1 + i) = mean + gamma * lower.col(i);
        set.points.col(1 + L + i) = mean - gamma * lower.col(i);
    }
    return set;
}

SigmaPointSet draw(const Vector& mean, const Matrix& cov, double gamma, const WeightSet& weights,
                   const Partition& partition) {
    return draw_from_factor(mean, linalg::psd_cholesky(cov).lower, gamma, weights, partition);
}

SigmaPointSet draw(const Vector& mean, const Matrix& cov, double gamma, const WeightSet& weights) {
    return draw(mean, cov, gamma, weights, Partition::state_only(mean.size()));
}

AugmentedDistribution augment(const Vector& mean, const Matrix& p, const Matrix& q,
                              const std::optional<Matrix>& r) {
    const Index n = mean.size();
    if (p.rows() != n || p.cols() != n || q.rows() != q.cols()) {
        throw std::invalid_argument("augment: inconsistent dimensions");
    }
    const Index nq = q.rows();
    const Index nr = r ? r->rows() : 0;
    if (r && r->cols() != nr) {
        throw std::invalid_argument("augment: measurement covariance is not square");
    }
    const Index L = n + nq + nr;
    AugmentedDistribution out{Vector::Zero(L), Matrix::Zero(L, L),
                              Partition{{0, n}, {n, nq}, {n + nq, nr}}};
    out.mean.head(n) = mean;
    out.cov.topLeftCorner(n, n) = p;
    out.cov.block(n, n, nq, nq) = q;
    if (r) {
        out.cov.bottomRightCorner(nr, nr) = *r;
    }
    return out;
}

Vector weighted_mean(const Matrix& points, const Vector& w) {
    return points * w;
}

Matrix weighted_cross_cov(const Matrix& a, const Vector& mean_a, const Matrix& b,
                          const Vector& mean_b, const Vector& w) {
    const Matrix da = a.colwise() - mean_a;
    const Matrix db = b.colwise() - mean_b;
    return da * w.asDiagonal() * db.transpose();
}

}  // namespace adukf
