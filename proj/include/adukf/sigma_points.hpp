#pragma once

#include <optional>

#include "adukf/types.hpp"

namespace adukf {

/// Scaled unscented transform parameters. Defaults are the nominal
/// Gaussian choice (alpha, beta, kappa) = (1, 2, 0).
struct UkfTuning {
    double alpha = 1.0;
    double beta = 2.0;
    double kappa = 0.0;
    /// Replaces sqrt(n + lambda) as the sigma-point spread when set.
    std::optional<double> gamma_override;

    void validate() const;
};

struct Scaling {
    double lambda{};
    double gamma{};
};

/// lambda = alpha^2 (n + kappa) - n and gamma = sqrt(n + lambda), with n the
/// nominal state dimension even when the filter is augmented.
Scaling scaling(Index n, const UkfTuning& tuning);

struct WeightSet {
    Vector wx;  ///< mean weights, 2L+1 entries
    Vector wc;  ///< covariance weights, 2L+1 entries
    Index order{};
    double lambda{};
};

/// Unscented weights for an order-L point set. Throws DegenerateWeights if L + lambda <= 0.
WeightSet weights(Index order, double lambda, double alpha, double beta);

/// Weights for an order-L set with lambda re-evaluated at L.
WeightSet weights_for_order(Index order, const UkfTuning& tuning);

struct BlockRange {
    Index begin{};
    Index size{};

    [[nodiscard]] Index end() const { return begin + size; }
};

/// Where the state, process-noise and measurement-noise blocks sit inside an
/// (augmented) sigma-point vector. Absent blocks have size zero.
struct Partition {
    BlockRange state;
    BlockRange process_noise;
    BlockRange measurement_noise;

    [[nodiscard]] Index dimension() const {
        return state.size + process_noise.size + measurement_noise.size;
    }
    static Partition state_only(Index n) { return {{0, n}, {n, 0}, {n, 0}}; }
};

struct SigmaPointSet {
    Matrix points;  ///< one point per column, 2L+1 columns
    Partition partition;
    WeightSet weights;

    [[nodiscard]] Index count() const { return points.cols(); }
    [[nodiscard]] auto state_block() const {
        return points.middleRows(partition.state.begin, partition.state.size);
    }
    [[nodiscard]] auto state_block() {
        return points.middleRows(partition.state.begin, partition.state.size);
    }
};

/// Draws mean, mean +- gamma * column_i(chol(cov)).
SigmaPointSet draw(const Vector& mean, const Matrix& cov, double gamma, const WeightSet& weights,
                   const Partition& partition);
SigmaPointSet draw(const Vector& mean, const Matrix& cov, double gamma, const WeightSet& weights);

/// Same as draw() but from an already computed lower square-root factor.
SigmaPointSet draw_from_factor(const Vector& mean, const Matrix& lower, double gamma,
                               const WeightSet& weights, const Partition& partition);

struct AugmentedDistribution {
    Vector mean;
    Matrix cov;
    Partition partition;
};

/// Block-diagonal augmentation [P, Q] or [P, Q, R] with zero-padded mean.
AugmentedDistribution augment(const Vector& mean, const Matrix& p, const Matrix& q,
                              const std::optional<Matrix>& r = std::nullopt);

/// sum_i w_i * column_i
Vector weighted_mean(const Matrix& points, const Vector& w);

/// sum_i w_i (a_i - mean_a)(b_i - mean_b)^T
Matrix weighted_cross_cov(const Matrix& a, const Vector& mean_a, const Matrix& b,
                          const Vector& mean_b, const Vector& w);

}  // namespace adukf
