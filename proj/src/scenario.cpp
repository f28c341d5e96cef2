#include "adukf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adukf::scenario {

namespace {

bool commensurate(double value, double dt) {
    const double ratio = value / dt;
    return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, std::abs(ratio));
}

// Box-Muller on top of the standard-specified mt19937_64 stream.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open_closed();
        const double u2 = uniform_open_closed();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    // (0, 1] with 53 random bits.
    double uniform_open_closed() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

Vector ScenarioConfig::default_sigma() {
    Vector s(ad::kOutputs);
    s << 0.8, 1.0, 0.4;
    return s;
}

Index ScenarioConfig::sample_count() const {
    return static_cast<Index>(std::llround(horizon / dt)) + 1;
}

void ScenarioConfig::validate() const {
    if (!(dt > 0.0) || !(horizon > 0.0)) {
        throw std::invalid_argument("scenario: horizon and dt must be positive");
    }
    if (!commensurate(horizon, dt)) {
        throw std::invalid_argument("scenario: horizon is not a multiple of dt");
    }
    if (sigma.size() != ad::kOutputs || (sigma.array() < 0.0).any()) {
        throw std::invalid_argument("scenario: sigma must hold 3 nonnegative values");
    }
    std::vector<FeedPulse> sorted = feeds;
    std::sort(sorted.begin(), sorted.end(),
              [](const FeedPulse& a, const FeedPulse& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const FeedPulse& f = sorted[i];
        if (f.flow < 0.0 || f.start < 0.0 || !(f.duration > 0.0)) {
            throw std::invalid_argument("scenario: feed pulses need flow >= 0, start >= 0, duration > 0");
        }
        if (!commensurate(f.start, dt) || !commensurate(f.duration, dt)) {
            throw std::invalid_argument("scenario: feed start/duration not on the sample grid");
        }
        if (i > 0 && sorted[i - 1].start + sorted[i - 1].duration > f.start + 1e-12) {
            throw std::invalid_argument("scenario: feed pulses overlap");
        }
    }
    true_params.validate();
    filter_params.validate();
}

bool mismatch_consistent(const ad::ModelParams& plant, const ad::ModelParams& filter,
                         double ratio, double rel_tol) {
    const double pairs[4][2] = {{plant.k_ch, filter.k_ch},
                                {plant.k_pr, filter.k_pr},
                                {plant.k_li, filter.k_li},
                                {plant.k_dec, filter.k_dec}};
    return std::all_of(std::begin(pairs), std::end(pairs), [&](const double(&p)[2]) {
        return std::abs(p[1] / p[0] - ratio) <= rel_tol * ratio;
    });
}

double feed_profile(double t, std::span<const FeedPulse> feeds) {
    for (const FeedPulse& f : feeds) {
        if (t >= f.start && t < f.start + f.duration) {
            return f.flow;
        }
    }
    return 0.0;
}

Vector initial_state() {
    Vector x0(ad::kStates);
    x0 << 4.09, 10.52, 11.04, 2.57, 0.96, 2.02;
    return x0;
}

TruthTrajectory simulate_truth(const ScenarioConfig& cfg) {
    cfg.validate();
    const Index n = cfg.sample_count();
    TruthTrajectory truth;
    truth.times.reserve(static_cast<std::size_t>(n));
    truth.feed.reserve(static_cast<std::size_t>(n));
    truth.states.reserve(static_cast<std::size_t>(n));
    truth.outputs.reserve(static_cast<std::size_t>(n));

    Vector x = initial_state();
    for (Index k = 0; k < n; ++k) {
        const double t = cfg.time_at(k);
        // Midpoint lookup keeps the hold robust to round-off at grid-aligned switches.
        const double u = feed_profile(t + 0.5 * cfg.dt, cfg.feeds);
        truth.times.push_back(t);
        truth.feed.push_back(u);
        truth.states.push_back(x);
        truth.outputs.push_back(ad::output(x));
        if (k + 1 < n) {
            x = ad::propagate(x, u, cfg.dt, cfg.true_params, cfg.integrator);
        }
    }
    return truth;
}

std::vector<Vector> synthesize_measurements(const TruthTrajectory& truth, const Vector& sigma,
                                            std::uint64_t seed) {
    if (sigma.size() != ad::kOutputs) {
        throw std::invalid_argument("synthesize_measurements: sigma must have 3 entries");
    }
    std::vector<Vector> y = truth.outputs;
    GaussianSource gauss(seed);
    for (Index c = 0; c < ad::kOutputs; ++c) {
        for (Vector& yk : y) {
            yk(c) += sigma(c) * gauss.next();
        }
    }
    return y;
}

Tuning default_tuning(const Vector& sigma) {
    Tuning t;
    t.x0_true = initial_state();
    t.x0_hat = Vector(ad::kStates);
    t.x0_hat << 2.20, 19.30, 24.94, 2.22, 0.31, 2.64;
    t.p0 = (t.x0_hat - t.x0_true).array().square().matrix().asDiagonal();
    t.q = Matrix::Identity(ad::kStates, ad::kStates);
    t.r = (1.5 * sigma.array().square()).matrix().asDiagonal();
    return t;
}

}  // namespace adukf::scenario
