#include <gtest/gtest.h>

#include <random>

#include "adukf/constrained.hpp"
#include "adukf/errors.hpp"
#include "adukf/psd_linalg.hpp"

using namespace adukf;

namespace {

Matrix scalar(double v) {
    Matrix m(1, 1);
    m << v;
    return m;
}

Vector vec1(double v) {
    Vector x(1);
    x << v;
    return x;
}

const OutputFn identity = [](const Vector& x) { return x; };

Matrix random_spd(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> nd;
    Matrix a(n, n);
    for (Index i = 0; i < n * n; ++i) a(i) = nd(rng);
    return a * a.transpose() + 0.5 * Matrix::Identity(n, n);
}

Vector random_vector(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

// Kalman mean for a linear output with prior covariance p.
Vector kalman_mean(const Vector& m, const Matrix& p, const Matrix& c, const Matrix& r, const Vector& y) {
    const Matrix s = c * p * c.transpose() + r;
    const Matrix k = linalg::solve_spd(s, c * p).transpose();
    return m + k * (y - c * m);
}

Prediction propagate(const Vector& m, const Matrix& p, const Matrix& q, const SystemModel& model) {
    VariantConfig cfg;
    return time_update({m, p, std::nullopt, 0.0}, 0.0, 1.0, {q, Matrix::Identity(model.output_dim, model.output_dim)},
                       model, cfg);
}

ConstrainedSetup setup(Formulation f, opt::LinearConstraints cons) {
    return {f, std::move(cons), {}, {}};
}

}  // namespace

TEST(NlpCost, ScalarExample) {
    EXPECT_DOUBLE_EQ(nlp_cost(vec1(1), vec1(0), scalar(1), vec1(0), scalar(1), identity), 2.0);
}

TEST(NlpCost, DoubledNoiseHalvesInnovationTerm) {
    const double base = nlp_cost(vec1(1), vec1(1), scalar(1), vec1(3), scalar(1), identity);
    const double doubled = nlp_cost(vec1(1), vec1(1), scalar(1), vec1(3), scalar(2), identity);
    EXPECT_DOUBLE_EQ(base, 4.0);
    EXPECT_DOUBLE_EQ(doubled, 2.0);
}

TEST(NlpGradient, ScalarExample) {
    const Vector g = nlp_gradient(vec1(1), vec1(0), scalar(1), vec1(0), scalar(1), identity, scalar(1));
    EXPECT_DOUBLE_EQ(g(0), 4.0);
}

TEST(NlpGradient, ZeroAtKalmanPoint) {
    std::mt19937_64 rng(5);
    const Matrix p = random_spd(rng, 3);
    const Matrix r = random_spd(rng, 2);
    Matrix c(2, 3);
    c << 1, 0, 1, 0, 1, 0;
    const Vector prior = random_vector(rng, 3);
    const Vector y = random_vector(rng, 2);
    const OutputFn h = [c](const Vector& x) -> Vector { return c * x; };
    const Vector opt = kalman_mean(prior, p, c, r, y);
    EXPECT_LE(nlp_gradient(opt, prior, p, y, r, h, c).norm(), 1e-10);
}

TEST(NlpGradient, MatchesFiniteDifference) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix p = random_spd(rng, 4);
        const Matrix r = random_spd(rng, 2);
        const Vector prior = random_vector(rng, 4);
        const Vector y = random_vector(rng, 2);
        const Vector chi = random_vector(rng, 4);
        const OutputFn h = [](const Vector& x) -> Vector {
            Vector o(2);
            o << x(0) * x(1), std::exp(0.3 * x(2)) + x(3);
            return o;
        };
        Matrix j(2, 4);
        j << chi(1), chi(0), 0, 0, 0, 0, 0.3 * std::exp(0.3 * chi(2)), 1;
        const Vector fd = opt::fd_gradient([&](const Vector& z) { return nlp_cost(z, prior, p, y, r, h); }, chi);
        const Vector an = nlp_gradient(chi, prior, p, y, r, h, j);
        EXPECT_LE((fd - an).norm(), 1e-5 * (1 + an.norm()));
    }
}

TEST(NlpHessian, IdentityExample) {
    EXPECT_LE((nlp_hessian(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2)) -
               4 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(NlpHessian, NoOutputDependence) {
    Matrix p(2, 2);
    p << 2, 0, 0, 4;
    const Matrix h = nlp_hessian(p, scalar(1), Matrix::Zero(1, 2));
    EXPECT_NEAR(h(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(h(1, 1), 0.5, 1e-15);
}

TEST(NlpHessian, MatchesFiniteDifferenceOfGradient) {
    std::mt19937_64 rng(7);
    const Matrix p = random_spd(rng, 3);
    const Matrix r = random_spd(rng, 2);
    Matrix c(2, 3);
    c << 1, 2, 0, 0, -1, 1;
    const OutputFn h = [c](const Vector& x) -> Vector { return c * x; };
    const Vector prior = random_vector(rng, 3);
    const Vector y = random_vector(rng, 2);
    const Matrix an = nlp_hessian(p, r, c);
    const Vector x = random_vector(rng, 3);
    const double step = 1e-5;
    for (Index i = 0; i < 3; ++i) {
        Vector e = Vector::Zero(3);
        e(i) = step;
        const Vector col = (nlp_gradient(x + e, prior, p, y, r, h, c) - nlp_gradient(x - e, prior, p, y, r, h, c)) /
                           (2 * step);
        EXPECT_LE((col - an.col(i)).norm(), 1e-6 * (1 + an.norm()));
    }
}

TEST(QpObjective, MinimizerIsKalmanUpdate) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix p = random_spd(rng, 4);
        const Matrix r = random_spd(rng, 3);
        Matrix c = Matrix::Zero(3, 4);
        c(0, 0) = 1;
        c(1, 1) = 1;
        c(2, 0) = 0.5;
        c(2, 3) = 1;
        const Vector prior = random_vector(rng, 4);
        const Vector y = random_vector(rng, 3);
        const QpObjective q = qp_objective(c, r, p, y, prior);
        const Vector x = linalg::solve_spd(q.h, -q.g).col(0);
        EXPECT_LE((x - kalman_mean(prior, p, c, r, y)).norm(), 1e-10);
    }
}

TEST(QpObjective, ZeroInnovationKeepsPrior) {
    const Vector prior = Vector::LinSpaced(2, 1.0, 2.0);
    const QpObjective q = qp_objective(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2), prior, prior);
    EXPECT_LE((linalg::solve_spd(q.h, -q.g).col(0) - prior).norm(), 1e-14);
}

TEST(QpObjective, ScalarExample) {
    const QpObjective q = qp_objective(scalar(1), scalar(1), scalar(1), vec1(2), vec1(0));
    EXPECT_DOUBLE_EQ(q.h(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(q.g(0), -4.0);
    EXPECT_DOUBLE_EQ(-q.g(0) / q.h(0, 0), 1.0);
}

TEST(Median, OddEvenEmpty) {
    EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
    EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_DOUBLE_EQ(median({}), 0.0);
}

class ConstrainedUpdateFormulations : public ::testing::TestWithParam<Formulation> {};

TEST_P(ConstrainedUpdateFormulations, SlackConstraintsGiveKalmanMean) {
    std::mt19937_64 rng(9);
    const Index n = 3;
    Matrix c(2, 3);
    c << 1, 0, 0, 0, 1, 1;
    const SystemModel model = linear_output_model([](const Vector& x, double, double) { return x; }, c);
    const Vector m = Vector::Constant(n, 10.0);
    const Matrix p = 0.1 * random_spd(rng, n);
    const Prediction pred = propagate(m, p, 0.01 * Matrix::Identity(n, n), model);
    const Matrix r = 0.5 * Matrix::Identity(2, 2);
    const Vector y = c * m + random_vector(rng, 2) * 0.3;
    const ConstrainedUpdate out = constrained_measurement_update(
        pred.prior, pred.points, y, r, model, setup(GetParam(), opt::LinearConstraints::nonnegative(n)));
    EXPECT_LE((out.posterior.mean - kalman_mean(pred.prior.mean, pred.prior.cov, c, r, y)).norm(), 1e-6);
    EXPECT_EQ(out.point_stats.size(), static_cast<std::size_t>(pred.points.count()));
    EXPECT_TRUE(out.total().converged);
}

TEST_P(ConstrainedUpdateFormulations, BindingConstraintsHold) {
    const Index n = 2;
    const SystemModel model = linear_output_model([](const Vector& x, double, double) { return x; },
                                                  Matrix::Identity(n, n));
    Vector m(2);
    m << 0.1, 1.0;
    const Prediction pred = propagate(m, Matrix::Identity(n, n), 0.1 * Matrix::Identity(n, n), model);
    Vector y(2);
    y << -3.0, 1.0;
    const ConstrainedUpdate out = constrained_measurement_update(
        pred.prior, pred.points, y, 0.1 * Matrix::Identity(n, n), model,
        setup(GetParam(), opt::LinearConstraints::nonnegative(n)));
    EXPECT_GE(out.posterior.mean.minCoeff(), -1e-8);
    EXPECT_NEAR(out.posterior.mean(0), 0.0, 1e-6);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(out.posterior.cov);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
}

INSTANTIATE_TEST_SUITE_P(All, ConstrainedUpdateFormulations,
                         ::testing::Values(Formulation::nlp_fd, Formulation::nlp_grad,
                                           Formulation::nlp_grad_hess, Formulation::qp));

TEST(ConstrainedUpdate, FormulationsAgree) {
    const Index n = 2;
    const SystemModel model = linear_output_model([](const Vector& x, double, double) { return x; },
                                                  Matrix::Identity(n, n));
    Vector m(2);
    m << 0.5, 2.0;
    const Prediction pred = propagate(m, Matrix::Identity(n, n), Matrix::Zero(n, n), model);
    Vector y(2);
    y << -1.0, 2.5;
    const auto run = [&](Formulation f) {
        return constrained_measurement_update(pred.prior, pred.points, y, Matrix::Identity(n, n), model,
                                              setup(f, opt::LinearConstraints::nonnegative(n)));
    };
    const ConstrainedUpdate qp = run(Formulation::qp);
    for (Formulation f : {Formulation::nlp_fd, Formulation::nlp_grad, Formulation::nlp_grad_hess}) {
        const ConstrainedUpdate other = run(f);
        EXPECT_LE((other.posterior.mean - qp.posterior.mean).norm(), 1e-6) << to_string(f);
        EXPECT_LE((other.posterior.cov - qp.posterior.cov).norm(), 1e-6) << to_string(f);
    }
}

TEST(ConstrainedUpdate, QpRequiresLinearOutput) {
    SystemModel model = linear_output_model([](const Vector& x, double, double) { return x; }, scalar(1));
    const Prediction pred = propagate(vec1(1), scalar(1), scalar(0.1), model);
    model.output_matrix.reset();
    EXPECT_THROW(constrained_measurement_update(pred.prior, pred.points, vec1(1), scalar(1), model,
                                                setup(Formulation::qp, opt::LinearConstraints::nonnegative(1))),
                 std::invalid_argument);
    EXPECT_NO_THROW(constrained_measurement_update(pred.prior, pred.points, vec1(1), scalar(1), model,
                                                   setup(Formulation::nlp_grad, opt::LinearConstraints::nonnegative(1))));
}

TEST(ConstrainedUpdate, DimensionMismatch) {
    const SystemModel model = linear_output_model([](const Vector& x, double, double) { return x; }, scalar(1));
    const Prediction pred = propagate(vec1(1), scalar(1), scalar(0.1), model);
    EXPECT_THROW(constrained_measurement_update(pred.prior, pred.points, Vector::Ones(2), scalar(1), model,
                                                setup(Formulation::qp, opt::LinearConstraints::nonnegative(1))),
                 std::invalid_argument);
}
