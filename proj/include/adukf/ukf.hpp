#pragma once

// Unscented Kalman filter time and measurement updates for additive,
// augmented and fully augmented noise, plus the square-root additive filter.
// The measurement update updates every sigma point through the innovation
// and aggregates the updated points into the posterior.

#include <functional>
#include <optional>
#include <string_view>

#include "adukf/sigma_points.hpp"
#include "adukf/types.hpp"

namespace adukf {

enum class NoiseMode { additive, augmented, fully_augmented };

std::string_view to_string(NoiseMode mode);

struct VariantConfig {
    NoiseMode noise_mode = NoiseMode::additive;
    bool square_root = false;
    UkfTuning tuning;
    /// Resample sigma points from the prior before the measurement update
    /// instead of reusing the propagated ones.
    bool redraw_before_measurement = false;

    void validate() const;
};

struct EstimatorState {
    Vector mean;
    Matrix cov;
    std::optional<Matrix> sqrt_factor;  ///< maintained by the square-root filter only
    double time{};                      ///< days
};

struct NoiseCovariances {
    Matrix process;      ///< Q, n x n
    Matrix measurement;  ///< R, q x q
};

/// Discrete-time system x+ = propagate(x, u, dt), y = output(x).
struct SystemModel {
    Index state_dim{};
    Index output_dim{};
    std::function<Vector(const Vector& x, double u, double dt)> propagate;
    std::function<Vector(const Vector& x)> output;
    /// dh/dx at x.
    std::function<Matrix(const Vector& x)> output_jacobian;
    /// Set when the output map is exactly y = C x.
    std::optional<Matrix> output_matrix;
};

/// Builds a SystemModel with a linear output y = C x.
SystemModel linear_output_model(std::function<Vector(const Vector&, double, double)> propagate,
                                const Matrix& c);

struct Prediction {
    EstimatorState prior;
    SigmaPointSet points;  ///< propagated points; the noise blocks are kept for fully augmented
};

/// Propagates sigma points drawn from the posterior over one sample interval.
Prediction time_update(const EstimatorState& state, double u, double dt,
                       const NoiseCovariances& noise, const SystemModel& model,
                       const VariantConfig& cfg);

/// Innovation-based update of each propagated sigma point, then aggregation.
/// Additive mode adds Q + K R K^T to the aggregated covariance, augmented mode
/// adds K R K^T, and fully augmented mode adds nothing because measurement
/// noise is carried by the points.
EstimatorState measurement_update(const EstimatorState& prior, const SigmaPointSet& points,
                                  const Vector& y, const NoiseCovariances& noise,
                                  const SystemModel& model, const VariantConfig& cfg);

/// One full cycle of the square-root additive filter. The covariance is
/// carried as a lower-triangular factor; `cov` is filled for reporting only.
EstimatorState sr_step(const EstimatorState& state, double u, const Vector& y, double dt,
                       const NoiseCovariances& noise, const SystemModel& model,
                       const VariantConfig& cfg);

/// Points used by the measurement update: the propagated set, or a fresh
/// draw around the prior when cfg.redraw_before_measurement is set.
SigmaPointSet measurement_points(const EstimatorState& prior, const SigmaPointSet& propagated,
                                 const NoiseCovariances& noise, const VariantConfig& cfg);

}  // namespace adukf
