#include "adukf/constrained.hpp"

#include <algorithm>
#include <stdexcept>

#include "adukf/errors.hpp"
#include "adukf/psd_linalg.hpp"

namespace adukf {

std::string_view to_string(Formulation f) {
    switch (f) {
        case Formulation::nlp_fd: return "nlp-fd";
        case Formulation::nlp_grad: return "nlp-grad";
        case Formulation::nlp_grad_hess: return "nlp-grad-hess";
        case Formulation::qp: return "qp";
    }
    return "unknown";
}

double nlp_cost(const Vector& chi, const Vector& chi_prior, const Matrix& p_prior, const Vector& y,
                const Matrix& r, const OutputFn& h) {
    const Vector innovation = y - h(chi);
    const Vector deviation = chi - chi_prior;
    return innovation.dot(linalg::solve_spd(r, innovation).col(0)) +
           deviation.dot(linalg::solve_spd(p_prior, deviation).col(0));
}

Vector nlp_gradient(const Vector& chi, const Vector& chi_prior, const Matrix& p_prior,
                    const Vector& y, const Matrix& r, const OutputFn& h, const Matrix& dh_dx) {
    const Vector innovation = y - h(chi);
    const Vector deviation = chi - chi_prior;
    return -2.0 * dh_dx.transpose() * linalg::solve_spd(r, innovation).col(0) +
           2.0 * linalg::solve_spd(p_prior, deviation).col(0);
}

Matrix nlp_hessian(const Matrix& p_prior, const Matrix& r, const Matrix& dh_dx) {
    const Matrix r_inv_j = linalg::solve_spd(r, dh_dx);
    return linalg::symmetrize(2.0 * linalg::inverse_spd(p_prior) +
                              2.0 * r_inv_j.transpose() * dh_dx);
}

QpObjective qp_objective(const Matrix& c, const Matrix& r, const Matrix& p_prior, const Vector& y,
                         const Vector& chi_prior) {
    const Matrix p_inv = linalg::inverse_spd(p_prior);
    const Matrix ct_r_inv = linalg::solve_spd(r, c).transpose();
    QpObjective q;
    q.h = linalg::symmetrize(2.0 * (ct_r_inv * c + p_inv));
    q.g = -2.0 * (ct_r_inv * y + p_inv * chi_prior);
    return q;
}

MeasurementObjective::MeasurementObjective(const Matrix& p_prior, const Matrix& r, OutputFn h,
                                           std::function<Matrix(const Vector&)> dh_dx)
    : p_inv_(linalg::symmetrize(linalg::inverse_spd(p_prior))),
      r_inv_(linalg::symmetrize(linalg::inverse_spd(r))),
      h_(std::move(h)),
      dh_dx_(std::move(dh_dx)) {}

void MeasurementObjective::set_point(const Vector& y, const Vector& chi_prior) {
    y_ = y;
    chi_prior_ = chi_prior;
}

double MeasurementObjective::value(const Vector& chi) const {
    const Vector innovation = y_ - h_(chi);
    const Vector deviation = chi - chi_prior_;
    return innovation.dot(r_inv_ * innovation) + deviation.dot(p_inv_ * deviation);
}

Vector MeasurementObjective::gradient(const Vector& chi) const {
    const Vector innovation = y_ - h_(chi);
    return -2.0 * dh_dx_(chi).transpose() * (r_inv_ * innovation) +
           2.0 * (p_inv_ * (chi - chi_prior_));
}

Matrix MeasurementObjective::hessian(const Vector& chi) const {
    const Matrix j = dh_dx_(chi);
    return 2.0 * p_inv_ + 2.0 * (r_inv_ * j).transpose() * j;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower =
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double ConstrainedUpdate::median_cost_evaluations() const {
    std::vector<double> v;
    v.reserve(point_stats.size());
    for (const auto& s : point_stats) {
        v.push_back(s.cost_evaluations);
    }
    return median(std::move(v));
}

double ConstrainedUpdate::median_iterations() const {
    std::vector<double> v;
    v.reserve(point_stats.size());
    for (const auto& s : point_stats) {
        v.push_back(s.iterations);
    }
    return median(std::move(v));
}

opt::SolveStats ConstrainedUpdate::total() const {
    opt::SolveStats t;
    t.converged = true;
    for (const auto& s : point_stats) {
        t.iterations += s.iterations;
        t.cost_evaluations += s.cost_evaluations;
        t.wall_time += s.wall_time;
        t.converged = t.converged && s.converged;
    }
    return t;
}

ConstrainedUpdate constrained_measurement_update(const EstimatorState& prior,
                                                 const SigmaPointSet& points, const Vector& y,
                                                 const Matrix& r, const SystemModel& model,
                                                 const ConstrainedSetup& setup) {
    const Index n = prior.mean.size();
    if (points.partition.state.size != n || y.size() != model.output_dim ||
        setup.constraints.dimension() != n) {
        throw std::invalid_argument("constrained_measurement_update: dimension mismatch");
    }
    const bool use_qp = setup.formulation == Formulation::qp;
    if (use_qp && !model.output_matrix) {
        throw std::invalid_argument("constrained_measurement_update: QP needs a linear output map");
    }

    MeasurementObjective objective(prior.cov, r, model.output, model.output_jacobian);
    Matrix qp_h;
    Matrix ct_r_inv;
    if (use_qp) {
        const Matrix& c = *model.output_matrix;
        ct_r_inv = c.transpose() * objective.r_inverse();
        qp_h = linalg::symmetrize(2.0 * (ct_r_inv * c + objective.p_inverse()));
    }

    opt::NlpOptions nlp = setup.nlp;
    nlp.gradient = setup.formulation == Formulation::nlp_fd ? opt::GradientMode::finite_difference
                                                            : opt::GradientMode::analytic;
    nlp.hessian = setup.formulation == Formulation::nlp_grad_hess ? opt::HessianMode::analytic
                                                                  : opt::HessianMode::none;
    const opt::NlpProblem problem{
        [&objective](const Vector& z) { return objective.value(z); },
        [&objective](const Vector& z) { return objective.gradient(z); },
        [&objective](const Vector& z) { return objective.hessian(z); },
    };

    const Matrix prior_points = points.state_block();
    Matrix solved(n, prior_points.cols());
    ConstrainedUpdate out;
    out.point_stats.reserve(static_cast<std::size_t>(prior_points.cols()));
    for (Index i = 0; i < prior_points.cols(); ++i) {
        const Vector chi_prior = prior_points.col(i);
        const Vector start = setup.constraints.clip_to_bounds(chi_prior);
        if (use_qp) {
            const Vector g = -2.0 * (ct_r_inv * y + objective.p_inverse() * chi_prior);
            opt::QpResult res = opt::solve_qp(qp_h, g, setup.constraints, start, setup.qp);
            solved.col(i) = res.x;
            out.point_stats.push_back(res.stats);
        } else {
            objective.set_point(y, chi_prior);
            opt::NlpResult res = opt::solve_nlp(problem, setup.constraints, start, nlp);
            solved.col(i) = res.x;
            out.point_stats.push_back(res.stats);
        }
    }

    const WeightSet& w = points.weights;
    out.posterior.mean = weighted_mean(solved, w.wx);
    out.posterior.cov =
        linalg::symmetrize(weighted_cross_cov(solved, out.posterior.mean, solved,
                                              out.posterior.mean, w.wc));
    out.posterior.time = prior.time;
    return out;
}

}  // namespace adukf
