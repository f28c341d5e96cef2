#pragma once

// Constrained measurement update: every propagated sigma point is replaced by
// the minimizer of
//     J(chi) = (y - h(chi))^T R^-1 (y - h(chi)) + (chi - chi_prior)^T P_prior^-1 (chi - chi_prior)
// subject to A chi <= b, and the solutions are aggregated with the unscented
// weights. R already enters J, so no covariance correction terms are added.

#include <functional>
#include <string_view>
#include <vector>

#include "adukf/optimizers.hpp"
#include "adukf/ukf.hpp"

namespace adukf {

enum class Formulation { nlp_fd, nlp_grad, nlp_grad_hess, qp };

std::string_view to_string(Formulation f);

struct ConstrainedSetup {
    Formulation formulation = Formulation::qp;
    opt::LinearConstraints constraints;
    opt::QpOptions qp;
    opt::NlpOptions nlp;  ///< gradient/hessian modes are overridden by `formulation`
};

using OutputFn = std::function<Vector(const Vector&)>;

double nlp_cost(const Vector& chi, const Vector& chi_prior, const Matrix& p_prior, const Vector& y,
                const Matrix& r, const OutputFn& h);

Vector nlp_gradient(const Vector& chi, const Vector& chi_prior, const Matrix& p_prior,
                    const Vector& y, const Matrix& r, const OutputFn& h, const Matrix& dh_dx);

/// 2 P^-1 + 2 (R^-1 dh/dx)^T dh/dx
Matrix nlp_hessian(const Matrix& p_prior, const Matrix& r, const Matrix& dh_dx);

struct QpObjective {
    Matrix h;
    Vector g;
};

/// H = 2 (C^T R^-1 C + P^-1), g = -2 (C^T R^-1 y + P^-1 chi_prior).
QpObjective qp_objective(const Matrix& c, const Matrix& r, const Matrix& p_prior, const Vector& y,
                         const Vector& chi_prior);

/// Cost of one sigma-point problem with the inverses factored once per update.
class MeasurementObjective {
public:
    MeasurementObjective(const Matrix& p_prior, const Matrix& r, OutputFn h,
                         std::function<Matrix(const Vector&)> dh_dx);

    void set_point(const Vector& y, const Vector& chi_prior);

    [[nodiscard]] double value(const Vector& chi) const;
    [[nodiscard]] Vector gradient(const Vector& chi) const;
    [[nodiscard]] Matrix hessian(const Vector& chi) const;

    [[nodiscard]] const Matrix& p_inverse() const { return p_inv_; }
    [[nodiscard]] const Matrix& r_inverse() const { return r_inv_; }

private:
    Matrix p_inv_;
    Matrix r_inv_;
    OutputFn h_;
    std::function<Matrix(const Vector&)> dh_dx_;
    Vector y_;
    Vector chi_prior_;
};

struct ConstrainedUpdate {
    EstimatorState posterior;
    std::vector<opt::SolveStats> point_stats;  ///< one entry per sigma point

    [[nodiscard]] double median_cost_evaluations() const;
    [[nodiscard]] double median_iterations() const;
    [[nodiscard]] opt::SolveStats total() const;
};

/// Solves one constrained problem per propagated sigma point, warm-started at
/// the prior point clipped onto the bounds. The output map is the nominal
/// h(x) in every noise mode.
ConstrainedUpdate constrained_measurement_update(const EstimatorState& prior,
                                                 const SigmaPointSet& points, const Vector& y,
                                                 const Matrix& r, const SystemModel& model,
                                                 const ConstrainedSetup& setup);

/// Median of a list of values; 0 for an empty list.
double median(std::vector<double> values);

}  // namespace adukf
