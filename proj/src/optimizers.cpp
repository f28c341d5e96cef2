#include "adukf/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "adukf/errors.hpp"
#include "adukf/psd_linalg.hpp"

namespace adukf::opt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double inf_norm(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

LinearConstraints::LinearConstraints(Matrix a, Vector b, const Vector& witness)
    : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != b_.size() || witness.size() != a_.cols()) {
        throw std::invalid_argument("LinearConstraints: dimension mismatch");
    }
    if (!feasible(witness, 1e-12)) {
        throw std::invalid_argument("LinearConstraints: witness point is infeasible");
    }
}

LinearConstraints LinearConstraints::none(Index n) {
    return {Matrix(0, n), Vector(0), Vector::Zero(n)};
}

LinearConstraints LinearConstraints::nonnegative(Index n) {
    return {-Matrix::Identity(n, n), Vector::Zero(n), Vector::Zero(n)};
}

double LinearConstraints::max_violation(const Vector& x) const {
    if (count() == 0) {
        return 0.0;
    }
    return std::max(0.0, (a_ * x - b_).maxCoeff());
}

Vector LinearConstraints::clip_to_bounds(const Vector& x) const {
    Vector out = x;
    for (Index i = 0; i < count(); ++i) {
        Index col = -1;
        int nonzeros = 0;
        for (Index j = 0; j < a_.cols(); ++j) {
            if (a_(i, j) != 0.0) {
                col = j;
                ++nonzeros;
            }
        }
        if (nonzeros != 1) {
            continue;
        }
        const double bound = b_(i) / a_(i, col);
        if (a_(i, col) > 0.0) {
            out(col) = std::min(out(col), bound);  // upper bound
        } else {
            out(col) = std::max(out(col), bound);  // lower bound
        }
    }
    return out;
}

QpResult solve_qp(const Matrix& h, const Vector& g, const LinearConstraints& cons,
                  const Vector& x0, const QpOptions& opts) {
    const auto start = Clock::now();
    const Index n = h.rows();
    if (h.cols() != n || g.size() != n || x0.size() != n || cons.dimension() != n) {
        throw std::invalid_argument("solve_qp: dimension mismatch");
    }
    if (cons.max_violation(x0) > opts.tol) {
        throw InfeasibleStart("solve_qp: start violates constraints by " +
                              std::to_string(cons.max_violation(x0)));
    }
    const linalg::CholeskyFactor fh = linalg::psd_cholesky(linalg::symmetrize(h));
    if (!fh.definite) {
        throw IndefiniteMatrix("solve_qp: Hessian is not positive definite");
    }
    const auto lh = fh.lower.triangularView<Eigen::Lower>();
    auto h_solve = [&](const Matrix& rhs) -> Matrix { return lh.transpose().solve(lh.solve(rhs)); };

    const Matrix& a = cons.a();
    const Vector& b = cons.b();
    const Index m = cons.count();

    Vector x = x0;
    std::vector<Index> working;
    std::vector<bool> in_working(static_cast<std::size_t>(m), false);
    QpResult res{x, Vector::Zero(m), {}};

    // Stationarity is judged relative to the size of the problem data.
    const double stat_scale = std::max({1.0, inf_norm(g), inf_norm(h * x0)});

    for (int iter = 0;; ++iter) {
        if (iter > opts.max_iterations) {
            throw MaxIterations("solve_qp: no convergence after " +
                                std::to_string(opts.max_iterations) + " iterations");
        }
        const Vector grad = h * x + g;
        Vector mu_w;
        Vector p;
        if (working.empty()) {
            p = -h_solve(grad);
        } else {
            // Range-space KKT solve on the working set.
            Matrix aw(static_cast<Index>(working.size()), n);
            for (std::size_t k = 0; k < working.size(); ++k) {
                aw.row(static_cast<Index>(k)) = a.row(working[k]);
            }
            const Matrix hinv_awt = h_solve(aw.transpose());
            const Vector hinv_g = h_solve(grad);
            const Matrix schur = aw * hinv_awt;
            const Vector rhs = -(aw * hinv_g);
            mu_w = linalg::solve_spd(linalg::symmetrize(schur), rhs);
            p = -(hinv_g + hinv_awt * mu_w);
        }

        if (inf_norm(h * p) <= opts.tol * stat_scale) {
            Index most_negative = -1;
            double worst = -opts.tol;
            for (std::size_t k = 0; k < working.size(); ++k) {
                if (mu_w(static_cast<Index>(k)) < worst) {
                    worst = mu_w(static_cast<Index>(k));
                    most_negative = static_cast<Index>(k);
                }
            }
            if (most_negative < 0) {
                res.x = x;
                for (std::size_t k = 0; k < working.size(); ++k) {
                    res.multipliers(working[k]) = mu_w(static_cast<Index>(k));
                }
                res.stats.iterations = iter;
                res.stats.converged = true;
                res.stats.wall_time = seconds_since(start);
                return res;
            }
            in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(most_negative)])] =
                false;
            working.erase(working.begin() + most_negative);
            continue;
        }

        double step = 1.0;
        Index blocking = -1;
        for (Index i = 0; i < m; ++i) {
            if (in_working[static_cast<std::size_t>(i)]) {
                continue;
            }
            const double ap = a.row(i).dot(p);
            if (ap <= 0.0) {
                continue;
            }
            const double t = std::max(0.0, (b(i) - a.row(i).dot(x)) / ap);
            if (t < step) {
                step = t;
                blocking = i;
            }
        }
        x += step * p;
        if (blocking >= 0) {
            working.push_back(blocking);
            in_working[static_cast<std::size_t>(blocking)] = true;
        }
    }
}

Vector fd_gradient(const std::function<double(const Vector&)>& cost, const Vector& x,
                   double h_rel) {
    Vector grad(x.size());
    Vector probe = x;
    for (Index i = 0; i < x.size(); ++i) {
        const double step = std::max(h_rel, h_rel * std::abs(x(i)));
        probe(i) = x(i) + step;
        const double up = cost(probe);
        const double x_up = probe(i);
        probe(i) = x(i) - step;
        const double down = cost(probe);
        grad(i) = (up - down) / (x_up - probe(i));
        probe(i) = x(i);
    }
    return grad;
}

NlpResult solve_nlp(const NlpProblem& problem, const LinearConstraints& cons, const Vector& x0,
                    const NlpOptions& opts) {
    const auto start = Clock::now();
    const Index n = x0.size();
    if (cons.dimension() != n || !problem.cost) {
        throw std::invalid_argument("solve_nlp: dimension mismatch or missing cost");
    }
    if (opts.gradient == GradientMode::analytic && !problem.gradient) {
        throw std::invalid_argument("solve_nlp: analytic gradient requested but not supplied");
    }
    if (opts.hessian == HessianMode::analytic && !problem.hessian) {
        throw std::invalid_argument("solve_nlp: analytic Hessian requested but not supplied");
    }
    if (cons.max_violation(x0) > 1e-12) {
        throw InfeasibleStart("solve_nlp: start violates constraints by " +
                              std::to_string(cons.max_violation(x0)));
    }

    NlpResult res{x0, {}};
    int evaluations = 0;
    auto cost = [&](const Vector& z) {
        ++evaluations;
        return problem.cost(z);
    };
    auto gradient = [&](const Vector& z) -> Vector {
        if (opts.gradient == GradientMode::analytic) {
            return problem.gradient(z);
        }
        return fd_gradient(cost, z, opts.fd_step);
    };

    Vector x = x0;
    double fx = cost(x);
    Vector grad = gradient(x);
    Matrix b = Matrix::Identity(n, n);
    bool scaled = false;
    const QpOptions qp_opts{1e-12, 200};

    int iterations = 0;
    for (;;) {
        if (opts.hessian == HessianMode::analytic) {
            b = linalg::symmetrize(problem.hessian(x));
        }
        // Step subproblem: min 1/2 d^T B d + grad^T d  s.t.  A d <= b - A x.
        Vector d;
        if (cons.count() == 0) {
            d = solve_qp(b, grad, cons, Vector::Zero(n), qp_opts).x;
        } else {
            const Vector slack = (cons.b() - cons.a() * x).cwiseMax(0.0);
            const LinearConstraints shifted(cons.a(), slack, Vector::Zero(n));
            d = solve_qp(b, grad, shifted, Vector::Zero(n), qp_opts).x;
        }
        if (inf_norm(d) <= opts.tol * (1.0 + inf_norm(x))) {
            res.stats.converged = true;
            break;
        }
        if (++iterations > opts.max_iterations) {
            throw MaxIterations("solve_nlp: no convergence after " +
                                std::to_string(opts.max_iterations) + " iterations");
        }

        const double slope = grad.dot(d);
        // The predicted decrease is below the cost's round-off: no further progress is measurable.
        if (std::abs(slope) <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx))) {
            --iterations;
            res.stats.converged = true;
            break;
        }
        double alpha = 1.0;
        bool accepted = false;
        Vector trial;
        double f_trial = 0.0;
        for (int k = 0; k <= opts.max_backtracks; ++k, alpha *= 0.5) {
            trial = x + alpha * d;
            f_trial = cost(trial);
            if (f_trial <= fx + opts.armijo * alpha * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Round-off floor of the cost: a tiny step that cannot decrease f is converged.
            if (inf_norm(d) <= 1e-6 * (1.0 + inf_norm(x))) {
                --iterations;
                res.stats.converged = true;
                break;
            }
            throw LineSearchFailure("solve_nlp: Armijo backtracking failed");
        }

        const Vector s = trial - x;
        const Vector grad_new = gradient(trial);
        if (opts.hessian == HessianMode::none) {
            Vector y = grad_new - grad;
            const double sy = s.dot(y);
            const bool degenerate = inf_norm(s) <= 1e-14 * (1.0 + inf_norm(x));
            if (!scaled && sy > 0.0 && !degenerate) {
                b = Matrix::Identity(n, n) * (y.squaredNorm() / sy);
                scaled = true;
            }
            // Powell damping keeps B positive definite.
            const Vector bs = b * s;
            const double sbs = s.dot(bs);
            if (sbs > 0.0 && !degenerate) {
                if (sy < 0.2 * sbs) {
                    const double theta = 0.8 * sbs / (sbs - sy);
                    y = theta * y + (1.0 - theta) * bs;
                }
                const double sr = s.dot(y);
                if (sr > std::numeric_limits<double>::min()) {
                    b += y * y.transpose() / sr - bs * bs.transpose() / sbs;
                    b = linalg::symmetrize(b);
                }
            }
        }
        x = trial;
        fx = f_trial;
        grad = grad_new;
    }

    res.x = x;
    res.stats.iterations = iterations;
    res.stats.cost_evaluations = evaluations;
    res.stats.wall_time = seconds_since(start);
    return res;
}

}  // namespace adukf::opt
