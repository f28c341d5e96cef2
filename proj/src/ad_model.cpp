#include "adukf/ad_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

#include "adukf/errors.hpp"

namespace adukf::ad {

namespace odeint = boost::numeric::odeint;

namespace {

using State = Eigen::Matrix<double, kStates, 1>;

struct Rates {
    double inv_volume;
    Eigen::Matrix<double, kStates, kProcesses> yields;  // petersen^T
    Eigen::Matrix<double, kProcesses, 1> k;
    State inlet;

    explicit Rates(const ModelParams& p)
        : inv_volume(p.inv_volume), yields(p.petersen.transpose()), inlet(p.inlet) {
        k << p.k_ch, p.k_pr, p.k_li, p.k_dec;
    }

    void operator()(const State& x, State& dxdt, double u) const {
        Eigen::Matrix<double, kProcesses, 1> r;
        r << k(0) * x(X_ch), k(1) * x(X_pr), k(2) * x(X_li), k(3) * x(X_bac);
        dxdt = inv_volume * u * (inlet - x) + yields * r;
    }
};

using Stepper = odeint::runge_kutta_dopri5<State, double, State, double,
                                           odeint::vector_space_algebra>;

}  // namespace

Stoichiometry ModelParams::default_petersen() {
    Stoichiometry s;
    // clang-format off
    //     S_ch4   S_co2   X_ch  X_pr  X_li  X_bac
    s <<  0.2482, 0.6809, -1.0,  0.0,  0.0,  0.1372,   // fermentation X_ch
          0.3221, 0.7954,  0.0, -1.0,  0.0,  0.1723,   // fermentation X_pr
          0.6393, 0.5817,  0.0,  0.0, -1.0,  0.2286,   // fermentation X_li
          0.0,    0.0,     0.18, 0.77, 0.05, -1.0;     // decay X_bac
    // clang-format on
    return s;
}

Vector ModelParams::default_inlet() {
    Vector xi(kStates);
    xi << 0.0, 0.0, 23.398, 4.750, 1.381, 0.0;
    return xi;
}

ModelParams ModelParams::plant() {
    return ModelParams{};
}

ModelParams ModelParams::filter() {
    ModelParams p;
    p.k_ch = 0.3196;
    p.k_pr = 0.2557;
    p.k_li = 0.1278;
    p.k_dec = 0.0256;
    return p;
}

void ModelParams::validate() const {
    if (!(inv_volume > 0.0 && k_ch > 0.0 && k_pr > 0.0 && k_li > 0.0 && k_dec > 0.0)) {
        throw std::invalid_argument("ModelParams: volume and rate constants must be positive");
    }
    if (inlet.size() != kStates || (inlet.array() < 0.0).any()) {
        throw std::invalid_argument("ModelParams: inlet concentrations must be 6 nonnegative values");
    }
}

Vector rhs(const Vector& x, double u, const ModelParams& p) {
    if (x.size() != kStates) {
        throw std::invalid_argument("rhs: state must have 6 entries");
    }
    const Rates rates(p);
    State dx;
    rates(x, dx, u);
    return dx;
}

Vector output(const Vector& x) {
    if (x.size() != kStates) {
        throw std::invalid_argument("output: state must have 6 entries");
    }
    Vector y(kOutputs);
    y << x(S_ch4), x(S_co2), x(X_bac);
    return y;
}

Matrix output_matrix() {
    Matrix c = Matrix::Zero(kOutputs, kStates);
    c(0, S_ch4) = 1.0;
    c(1, S_co2) = 1.0;
    c(2, X_bac) = 1.0;
    return c;
}

Vector propagate(const Vector& x, double u, double dt, const ModelParams& p,
                 const IntegratorConfig& cfg) {
    if (x.size() != kStates) {
        throw std::invalid_argument("propagate: state must have 6 entries");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("propagate: dt must be positive");
    }
    const Rates rates(p);
    auto system = [&rates, u](const State& s, State& ds, double /*t*/) { rates(s, ds, u); };
    State state = x;
    try {
        if (cfg.fixed_step) {
            const double steps = std::ceil(dt / *cfg.fixed_step - 1e-9);
            const int count = std::max(1, static_cast<int>(steps));
            const double h = dt / count;
            Stepper stepper;
            for (int i = 0; i < count; ++i) {
                stepper.do_step(system, state, i * h, h);
            }
        } else {
            odeint::integrate_adaptive(
                odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, Stepper()), system, state, 0.0,
                dt, dt);
        }
    } catch (const odeint::odeint_error& e) {
        throw IntegrationFailure(std::string("propagate: ") + e.what());
    }
    if (!state.allFinite()) {
        throw IntegrationFailure("propagate: non-finite state");
    }
    return state;
}

SystemModel make_system_model(const ModelParams& p, const IntegratorConfig& cfg) {
    p.validate();
    return linear_output_model(
        [p, cfg](const Vector& x, double u, double dt) { return propagate(x, u, dt, p, cfg); },
        output_matrix());
}

}  // namespace adukf::ad
