#pragma once

// Dense convex QP (primal active set) and a small SQP solver for smooth costs
// under linear inequality constraints A x <= b.

#include <functional>
#include <optional>

#include "adukf/types.hpp"

namespace adukf::opt {

class LinearConstraints {
public:
    /// Throws std::invalid_argument if `witness` violates A x <= b.
    LinearConstraints(Matrix a, Vector b, const Vector& witness);

    /// m = 0 constraints on an n-dimensional variable.
    static LinearConstraints none(Index n);
    /// x >= 0, i.e. A = -I, b = 0.
    static LinearConstraints nonnegative(Index n);

    [[nodiscard]] const Matrix& a() const { return a_; }
    [[nodiscard]] const Vector& b() const { return b_; }
    [[nodiscard]] Index count() const { return a_.rows(); }
    [[nodiscard]] Index dimension() const { return a_.cols(); }

    [[nodiscard]] double max_violation(const Vector& x) const;
    [[nodiscard]] bool feasible(const Vector& x, double tol) const {
        return max_violation(x) <= tol;
    }
    /// Clips x onto every single-variable bound row; general rows are left alone.
    [[nodiscard]] Vector clip_to_bounds(const Vector& x) const;

private:
    Matrix a_;
    Vector b_;
};

struct SolveStats {
    int iterations{};
    int cost_evaluations{};
    bool converged{};
    double wall_time{};  ///< seconds
};

struct QpOptions {
    double tol = 1e-8;
    int max_iterations = 200;
};

struct QpResult {
    Vector x;
    Vector multipliers;  ///< one per constraint row, >= 0 at optimum
    SolveStats stats;
};

/// Minimizes 1/2 x^T H x + g^T x subject to A x <= b from a feasible start.
/// Stationarity is H x + g + A^T mu = 0.
QpResult solve_qp(const Matrix& h, const Vector& g, const LinearConstraints& cons,
                  const Vector& x0, const QpOptions& opts = {});

enum class GradientMode { finite_difference, analytic };
enum class HessianMode { none, analytic };

struct NlpProblem {
    std::function<double(const Vector&)> cost;
    std::function<Vector(const Vector&)> gradient;  ///< required for GradientMode::analytic
    std::function<Matrix(const Vector&)> hessian;   ///< required for HessianMode::analytic
};

struct NlpOptions {
    GradientMode gradient = GradientMode::analytic;
    HessianMode hessian = HessianMode::none;
    /// Converged when the SQP step satisfies |d|_inf <= tol * (1 + |x|_inf).
    double tol = 1e-10;
    int max_iterations = 200;
    double fd_step = 1e-6;
    double armijo = 1e-4;
    int max_backtracks = 40;
};

struct NlpResult {
    Vector x;
    SolveStats stats;
};

/// SQP with backtracking line search. Without an analytic Hessian a damped
/// BFGS approximation is used. Every call to `cost` is counted, including the
/// ones made by finite differencing; an analytic gradient evaluated at a point
/// whose cost was already computed is not.
NlpResult solve_nlp(const NlpProblem& problem, const LinearConstraints& cons, const Vector& x0,
                    const NlpOptions& opts = {});

/// Central differences with per-coordinate step max(h_rel, h_rel * |x_i|).
Vector fd_gradient(const std::function<double(const Vector&)>& cost, const Vector& x,
                   double h_rel = 1e-6);

}  // namespace adukf::opt
