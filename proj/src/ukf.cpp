#include "adukf/ukf.hpp"

#include <cmath>
#include <stdexcept>

#include "adukf/errors.hpp"
#include "adukf/psd_linalg.hpp"

namespace adukf {

std::string_view to_string(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::additive: return "additive";
        case NoiseMode::augmented: return "augmented";
        case NoiseMode::fully_augmented: return "fully_augmented";
    }
    return "unknown";
}

void VariantConfig::validate() const {
    tuning.validate();
    if (square_root && noise_mode != NoiseMode::additive) {
        throw std::invalid_argument("VariantConfig: square-root filter requires additive noise");
    }
}

SystemModel linear_output_model(std::function<Vector(const Vector&, double, double)> propagate,
                                const Matrix& c) {
    SystemModel m;
    m.state_dim = c.cols();
    m.output_dim = c.rows();
    m.propagate = std::move(propagate);
    m.output = [c](const Vector& x) -> Vector { return c * x; };
    m.output_jacobian = [c](const Vector&) -> Matrix { return c; };
    m.output_matrix = c;
    return m;
}

namespace {

void check_dims(const EstimatorState& state, const NoiseCovariances& noise,
                const SystemModel& model) {
    const Index n = state.mean.size();
    if (n != model.state_dim || state.cov.rows() != n || state.cov.cols() != n ||
        noise.process.rows() != n || noise.process.cols() != n ||
        noise.measurement.rows() != model.output_dim ||
        noise.measurement.cols() != model.output_dim) {
        throw std::invalid_argument("ukf: inconsistent state/noise/model dimensions");
    }
}

AugmentedDistribution sampling_distribution(const Vector& mean, const Matrix& cov,
                                            const Matrix& q, const NoiseCovariances& noise,
                                            NoiseMode mode) {
    switch (mode) {
        case NoiseMode::additive:
            return {mean, cov, Partition::state_only(mean.size())};
        case NoiseMode::augmented:
            return augment(mean, cov, q);
        case NoiseMode::fully_augmented:
            return augment(mean, cov, q, noise.measurement);
    }
    throw std::logic_error("unreachable noise mode");
}

SigmaPointSet draw_for_mode(const Vector& mean, const Matrix& cov, const Matrix& q,
                            const NoiseCovariances& noise, const VariantConfig& cfg) {
    const double gamma = scaling(mean.size(), cfg.tuning).gamma;
    const AugmentedDistribution dist = sampling_distribution(mean, cov, q, noise, cfg.noise_mode);
    const WeightSet w = weights_for_order(dist.mean.size(), cfg.tuning);
    return draw(dist.mean, dist.cov, gamma, w, dist.partition);
}

// Outputs of every sigma point; in fully augmented mode the measurement-noise
// block enters additively, matching the model y = h(x) + w.
Matrix output_points(const SigmaPointSet& pts, const SystemModel& model) {
    const Index count = pts.count();
    Matrix y(model.output_dim, count);
    for (Index i = 0; i < count; ++i) {
        y.col(i) = model.output(pts.state_block().col(i));
    }
    if (pts.partition.measurement_noise.size > 0) {
        y += pts.points.middleRows(pts.partition.measurement_noise.begin,
                                   pts.partition.measurement_noise.size);
    }
    return y;
}

Matrix gain_from(const Matrix& pxy, const Matrix& pyy) {
    try {
        return linalg::solve_spd(linalg::symmetrize(pyy), pxy.transpose()).transpose();
    } catch (const IndefiniteMatrix& e) {
        throw SingularInnovation(std::string("innovation covariance not SPD: ") + e.what());
    }
}

}  // namespace

Prediction time_update(const EstimatorState& state, double u, double dt,
                       const NoiseCovariances& noise, const SystemModel& model,
                       const VariantConfig& cfg) {
    cfg.validate();
    check_dims(state, noise, model);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("time_update: dt must be positive");
    }
    SigmaPointSet pts = draw_for_mode(state.mean, state.cov, noise.process, noise, cfg);
    const Partition& part = pts.partition;
    for (Index i = 0; i < pts.count(); ++i) {
        Vector next = model.propagate(pts.state_block().col(i), u, dt);
        if (part.process_noise.size > 0) {
            next += pts.points.col(i).segment(part.process_noise.begin, part.process_noise.size);
        }
        pts.state_block().col(i) = next;
    }

    Prediction out{EstimatorState{}, std::move(pts)};
    const Matrix x = out.points.state_block();
    const WeightSet& w = out.points.weights;
    out.prior.mean = weighted_mean(x, w.wx);
    Matrix cov = weighted_cross_cov(x, out.prior.mean, x, out.prior.mean, w.wc);
    if (cfg.noise_mode == NoiseMode::additive) {
        cov += noise.process;
    }
    out.prior.cov = linalg::symmetrize(cov);
    out.prior.time = state.time + dt;
    return out;
}

SigmaPointSet measurement_points(const EstimatorState& prior, const SigmaPointSet& propagated,
                                 const NoiseCovariances& noise, const VariantConfig& cfg) {
    if (!cfg.redraw_before_measurement) {
        return propagated;
    }
    // Process noise already sits in the prior covariance.
    const Index n = prior.mean.size();
    return draw_for_mode(prior.mean, prior.cov, Matrix::Zero(n, n), noise, cfg);
}

EstimatorState measurement_update(const EstimatorState& prior, const SigmaPointSet& points,
                                  const Vector& y, const NoiseCovariances& noise,
                                  const SystemModel& model, const VariantConfig& cfg) {
    cfg.validate();
    check_dims(prior, noise, model);
    if (y.size() != model.output_dim) {
        throw std::invalid_argument("measurement_update: measurement has wrong dimension");
    }
    const SigmaPointSet pts = measurement_points(prior, points, noise, cfg);
    const WeightSet& w = pts.weights;
    const Matrix x = pts.state_block();
    const Matrix yp = output_points(pts, model);

    const Vector x_mean = weighted_mean(x, w.wx);
    const Vector y_mean = weighted_mean(yp, w.wx);
    Matrix pyy = weighted_cross_cov(yp, y_mean, yp, y_mean, w.wc);
    if (cfg.noise_mode != NoiseMode::fully_augmented) {
        pyy += noise.measurement;
    }
    const Matrix pxy = weighted_cross_cov(x, x_mean, yp, y_mean, w.wc);
    const Matrix k = gain_from(pxy, pyy);

    Matrix updated = x;
    for (Index i = 0; i < updated.cols(); ++i) {
        updated.col(i) += k * (y - yp.col(i));
    }

    EstimatorState post;
    post.mean = weighted_mean(updated, w.wx);
    Matrix cov = weighted_cross_cov(updated, post.mean, updated, post.mean, w.wc);
    switch (cfg.noise_mode) {
        case NoiseMode::additive:
            cov += noise.process + k * noise.measurement * k.transpose();
            break;
        case NoiseMode::augmented:
            cov += k * noise.measurement * k.transpose();
            break;
        case NoiseMode::fully_augmented:
            break;
    }
    post.cov = linalg::symmetrize(cov);
    post.time = prior.time;
    return post;
}

namespace {

// Square-root covariance of a weighted point cloud plus an additive noise factor.
Matrix sqrt_cloud_cov(const Matrix& pts, const Vector& mean, const WeightSet& w,
                      const Matrix& noise_factor) {
    const Index dim = pts.rows();
    const Index pairs = pts.cols() - 1;
    const double wi = w.wc(1);
    if (!(wi > 0.0)) {
        throw DegenerateWeights("sr_step: square-root filter needs positive outer weights");
    }
    Matrix stacked(dim, pairs + noise_factor.cols());
    stacked << std::sqrt(wi) * (pts.rightCols(pairs).colwise() - mean), noise_factor;
    Matrix s = linalg::triangularize(stacked);
    const double w0 = w.wc(0);
    if (w0 != 0.0) {
        const Vector d0 = std::sqrt(std::abs(w0)) * (pts.col(0) - mean);
        s = linalg::chol_rank1(s, d0, w0 > 0.0 ? linalg::Rank1::update : linalg::Rank1::downdate);
    }
    return s;
}

}  // namespace

EstimatorState sr_step(const EstimatorState& state, double u, const Vector& y, double dt,
                       const NoiseCovariances& noise, const SystemModel& model,
                       const VariantConfig& cfg) {
    cfg.validate();
    if (!cfg.square_root) {
        throw std::invalid_argument("sr_step: configuration is not square-root");
    }
    check_dims(state, noise, model);
    if (!(dt > 0.0) || y.size() != model.output_dim) {
        throw std::invalid_argument("sr_step: bad dt or measurement dimension");
    }
    const Index n = state.mean.size();
    const double gamma = scaling(n, cfg.tuning).gamma;
    const WeightSet w = weights_for_order(n, cfg.tuning);
    const Matrix sqrt_q = linalg::psd_cholesky(noise.process).lower;
    const Matrix sqrt_r = linalg::psd_cholesky(noise.measurement).lower;

    const Matrix s = state.sqrt_factor ? *state.sqrt_factor
                                       : linalg::psd_cholesky(state.cov).lower;
    SigmaPointSet pts = draw_from_factor(state.mean, s, gamma, w, Partition::state_only(n));
    for (Index i = 0; i < pts.count(); ++i) {
        pts.points.col(i) = model.propagate(pts.points.col(i), u, dt);
    }
    Vector x_prior = weighted_mean(pts.points, w.wx);
    const Matrix s_prior = sqrt_cloud_cov(pts.points, x_prior, w, sqrt_q);
    if (cfg.redraw_before_measurement) {
        pts = draw_from_factor(x_prior, s_prior, gamma, w, Partition::state_only(n));
        x_prior = weighted_mean(pts.points, w.wx);
    }

    Matrix yp(model.output_dim, pts.count());
    for (Index i = 0; i < pts.count(); ++i) {
        yp.col(i) = model.output(pts.points.col(i));
    }
    const Vector y_mean = weighted_mean(yp, w.wx);
    const Matrix s_y = sqrt_cloud_cov(yp, y_mean, w, sqrt_r);
    if ((s_y.diagonal().array() <= 0.0).any()) {
        throw SingularInnovation("sr_step: innovation factor is singular");
    }
    const Matrix pxy = weighted_cross_cov(pts.points, x_prior, yp, y_mean, w.wc);
    // K = Pxy (Sy Sy^T)^-1 via two triangular solves.
    const auto sy = s_y.triangularView<Eigen::Lower>();
    const Matrix k = sy.transpose().solve(sy.solve(pxy.transpose())).transpose();

    EstimatorState post;
    post.mean = x_prior + k * (y - y_mean);
    const Matrix u_cols = k * s_y;
    Matrix s_post = s_prior;
    for (Index j = 0; j < u_cols.cols(); ++j) {
        s_post = linalg::chol_rank1(s_post, u_cols.col(j), linalg::Rank1::downdate);
    }
    if (cfg.redraw_before_measurement) {
        // Counterpart of the +Q term the additive update applies to redrawn points.
        Matrix stacked(n, 2 * n);
        stacked << s_post, sqrt_q;
        s_post = linalg::triangularize(stacked);
    }
    post.cov = s_post * s_post.transpose();
    post.sqrt_factor = std::move(s_post);
    post.time = state.time + dt;
    return post;
}

}  // namespace adukf
