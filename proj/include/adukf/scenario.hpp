#pragma once

// One-week feeding scenario: truth simulation, noisy measurements and the
// common filter tuning.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "adukf/ad_model.hpp"

namespace adukf::scenario {

struct FeedPulse {
    double flow{};      ///< L/d
    double start{};     ///< d
    double duration{};  ///< d
};

struct ScenarioConfig {
    double horizon = 7.0;       ///< d
    double dt = 0.5 / 24.0;     ///< d
    std::vector<FeedPulse> feeds{{168.0, 2.5, 0.5}, {72.0, 5.5, 1.0}};
    Vector sigma = default_sigma();  ///< measurement noise std devs, kg/m^3
    std::uint64_t seed = 1;
    ad::ModelParams true_params = ad::ModelParams::plant();
    ad::ModelParams filter_params = ad::ModelParams::filter();
    ad::IntegratorConfig integrator;

    static Vector default_sigma();

    /// Number of samples including t = 0.
    [[nodiscard]] Index sample_count() const;
    [[nodiscard]] double time_at(Index k) const { return static_cast<double>(k) * dt; }

    void validate() const;
};

/// Checks every filter rate equals ratio * plant rate within rel_tol.
bool mismatch_consistent(const ad::ModelParams& plant, const ad::ModelParams& filter,
                         double ratio = 1.2784, double rel_tol = 2e-3);

/// Piecewise-constant feed, half-open intervals [start, start + duration).
double feed_profile(double t, std::span<const FeedPulse> feeds);

/// Initial plant state (steady state under the average feed).
Vector initial_state();

struct TruthTrajectory {
    std::vector<double> times;
    std::vector<double> feed;  ///< held over [t_k, t_k+1)
    std::vector<Vector> states;
    std::vector<Vector> outputs;  ///< noise-free
};

TruthTrajectory simulate_truth(const ScenarioConfig& cfg);

/// Identifies the generator so that runs are reproducible.
inline constexpr std::string_view kGeneratorId = "mt19937_64+box-muller";

/// y_k = C x_k + w_k with w_k ~ N(0, diag(sigma^2)). Noise is drawn channel by
/// channel, each channel covering all samples in time order.
std::vector<Vector> synthesize_measurements(const TruthTrajectory& truth, const Vector& sigma,
                                            std::uint64_t seed);

struct Tuning {
    Vector x0_true;
    Vector x0_hat;
    Matrix p0;
    Matrix q;
    Matrix r;
};

/// x0_hat, P0 = diag((x0_hat - x0)^2), R = 1.5 diag(sigma^2), Q = I.
Tuning default_tuning(const Vector& sigma = ScenarioConfig::default_sigma());

}  // namespace adukf::scenario
