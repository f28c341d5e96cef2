#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adukf/errors.hpp"
#include "adukf/optimizers.hpp"

using namespace adukf;
using namespace adukf::opt;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

struct Quadratic {
    Matrix h;
    Vector g;
    [[nodiscard]] NlpProblem problem() const {
        return {[this](const Vector& x) { return 0.5 * x.dot(h * x) + g.dot(x); },
                [this](const Vector& x) -> Vector { return h * x + g; },
                [this](const Vector&) -> Matrix { return h; }};
    }
};

Quadratic random_quadratic(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> nd;
    Matrix a(n, n);
    for (Index i = 0; i < n * n; ++i) a(i) = nd(rng);
    Vector g(n);
    for (Index i = 0; i < n; ++i) g(i) = 3.0 * nd(rng);
    return {a * a.transpose() + Matrix::Identity(n, n), g};
}

NlpOptions mode(GradientMode g, HessianMode h) {
    NlpOptions o;
    o.gradient = g;
    o.hessian = h;
    return o;
}

}  // namespace

TEST(LinearConstraints, WitnessChecked) {
    EXPECT_THROW(LinearConstraints(-Matrix::Identity(2, 2), Vector::Zero(2), v2(-1, 0)),
                 std::invalid_argument);
    const auto c = LinearConstraints::nonnegative(2);
    EXPECT_TRUE(c.feasible(v2(0, 1), 0.0));
    EXPECT_DOUBLE_EQ(c.max_violation(v2(-0.5, 1)), 0.5);
    EXPECT_EQ(c.clip_to_bounds(v2(-0.5, 1)), v2(0, 1));
}

TEST(SolveQp, BoundActive) {
    const QpResult r = solve_qp(2 * Matrix::Identity(2, 2), v2(2, -2), LinearConstraints::nonnegative(2), v2(1, 1));
    EXPECT_NEAR(r.x(0), 0.0, 1e-12);
    EXPECT_NEAR(r.x(1), 1.0, 1e-12);
    EXPECT_NEAR(r.multipliers(0), 2.0, 1e-12);
    EXPECT_NEAR(r.multipliers(1), 0.0, 1e-12);
    EXPECT_TRUE(r.stats.converged);
}

TEST(SolveQp, Unconstrained) {
    const QpResult r = solve_qp(2 * Matrix::Identity(2, 2), v2(2, -2), LinearConstraints::none(2), v2(5, 5));
    EXPECT_NEAR(r.x(0), -1.0, 1e-12);
    EXPECT_NEAR(r.x(1), 1.0, 1e-12);
}

TEST(SolveQp, OriginOptimal) {
    Matrix a(1, 2);
    a << 1, 1;
    const LinearConstraints c(a, Vector::Ones(1), Vector::Zero(2));
    const QpResult r = solve_qp(Matrix::Identity(2, 2), Vector::Zero(2), c, v2(0.2, 0.3));
    EXPECT_LE(r.x.norm(), 1e-12);
}

TEST(SolveQp, InfeasibleStart) {
    EXPECT_THROW(solve_qp(Matrix::Identity(2, 2), Vector::Zero(2), LinearConstraints::nonnegative(2), v2(-1, 0)),
                 InfeasibleStart);
}

TEST(SolveQp, IndefiniteHessian) {
    Matrix h(2, 2);
    h << 1, 0, 0, -1;
    EXPECT_THROW(solve_qp(h, Vector::Zero(2), LinearConstraints::none(2), Vector::Zero(2)), IndefiniteMatrix);
}

TEST(SolveQp, MaxIterations) {
    QpOptions o;
    o.max_iterations = 0;
    EXPECT_THROW(solve_qp(2 * Matrix::Identity(2, 2), v2(2, -2), LinearConstraints::nonnegative(2), v2(1, 1), o),
                 MaxIterations);
}

TEST(SolveQp, KktConditionsRandom) {
    std::mt19937_64 rng(17);
    const double tol = 1e-8;
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 2 + trial % 6;
        const Quadratic q = random_quadratic(rng, n);
        const auto cons = LinearConstraints::nonnegative(n);
        const QpResult r = solve_qp(q.h, q.g, cons, Vector::Ones(n));
        const Vector stat = q.h * r.x + q.g + cons.a().transpose() * r.multipliers;
        EXPECT_LE(stat.norm(), 1e-8 * (1 + q.g.norm()));
        EXPECT_LE(cons.max_violation(r.x), tol);
        EXPECT_GE(r.multipliers.minCoeff(), -tol);
        const Vector slack = cons.a() * r.x - cons.b();
        for (Index i = 0; i < n; ++i) EXPECT_LE(std::abs(r.multipliers(i) * slack(i)), tol);
    }
}

TEST(FdGradient, Quadratic) {
    const Vector g = fd_gradient([](const Vector& x) { return x.squaredNorm(); }, v2(1, 2));
    EXPECT_NEAR(g(0), 2.0, 1e-6);
    EXPECT_NEAR(g(1), 4.0, 1e-6);
}

TEST(FdGradient, Constant) {
    EXPECT_EQ(fd_gradient([](const Vector&) { return 7.0; }, v2(3, -4)), Vector::Zero(2));
}

TEST(SolveNlp, AllModesMatchQp) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 2 + trial % 5;
        const Quadratic q = random_quadratic(rng, n);
        const auto cons = LinearConstraints::nonnegative(n);
        const Vector x0 = Vector::Ones(n);
        const Vector ref = solve_qp(q.h, q.g, cons, x0).x;
        for (const NlpOptions& o : {mode(GradientMode::finite_difference, HessianMode::none),
                                    mode(GradientMode::analytic, HessianMode::none),
                                    mode(GradientMode::analytic, HessianMode::analytic)}) {
            const NlpResult r = solve_nlp(q.problem(), cons, x0, o);
            EXPECT_TRUE(r.stats.converged);
            EXPECT_LE((r.x - ref).lpNorm<Eigen::Infinity>(), 1e-6);
            EXPECT_GE(r.stats.cost_evaluations, r.stats.iterations);
        }
    }
}

TEST(SolveNlp, StartAtOptimum) {
    const Quadratic q{2 * Matrix::Identity(2, 2), v2(-2, -4)};
    const NlpResult r = solve_nlp(q.problem(), LinearConstraints::nonnegative(2), v2(1, 2));
    EXPECT_LE(r.stats.iterations, 1);
    EXPECT_LE(r.stats.cost_evaluations, 3);
    EXPECT_LE((r.x - v2(1, 2)).norm(), 1e-10);
}

TEST(SolveNlp, EvaluationOrdering) {
    std::mt19937_64 rng(29);
    const Quadratic q = random_quadratic(rng, 6);
    const auto cons = LinearConstraints::nonnegative(6);
    const Vector x0 = Vector::Constant(6, 2.0);
    const int fd = solve_nlp(q.problem(), cons, x0, mode(GradientMode::finite_difference, HessianMode::none))
                       .stats.cost_evaluations;
    const int grad = solve_nlp(q.problem(), cons, x0, mode(GradientMode::analytic, HessianMode::none))
                         .stats.cost_evaluations;
    const int hess = solve_nlp(q.problem(), cons, x0, mode(GradientMode::analytic, HessianMode::analytic))
                         .stats.cost_evaluations;
    EXPECT_GT(fd, grad);
    EXPECT_GT(grad, hess);
}

TEST(SolveNlp, NonQuadraticCost) {
    // Rosenbrock restricted to x >= 0; minimum at (1, 1).
    NlpProblem p;
    p.cost = [](const Vector& x) {
        return 100 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1 - x(0), 2);
    };
    p.gradient = [](const Vector& x) -> Vector {
        return v2(-400 * x(0) * (x(1) - x(0) * x(0)) - 2 * (1 - x(0)), 200 * (x(1) - x(0) * x(0)));
    };
    const NlpResult r = solve_nlp(p, LinearConstraints::nonnegative(2), v2(0.5, 0.0));
    EXPECT_LE((r.x - v2(1, 1)).norm(), 1e-6);
}

TEST(SolveNlp, Errors) {
    const Quadratic q{Matrix::Identity(2, 2), Vector::Zero(2)};
    EXPECT_THROW(solve_nlp(q.problem(), LinearConstraints::nonnegative(2), v2(-1, 0)), InfeasibleStart);
    NlpOptions o;
    o.max_iterations = 0;
    EXPECT_THROW(solve_nlp(q.problem(), LinearConstraints::nonnegative(2), v2(1, 1), o), MaxIterations);
    NlpProblem no_grad{q.problem().cost, {}, {}};
    EXPECT_THROW(solve_nlp(no_grad, LinearConstraints::nonnegative(2), v2(1, 1)), std::invalid_argument);
}
