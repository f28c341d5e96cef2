#include <gtest/gtest.h>

#include <cmath>

#include "adukf/scenario.hpp"

using namespace adukf;
using namespace adukf::scenario;

TEST(FeedProfile, TablePulses) {
    const ScenarioConfig cfg;
    EXPECT_EQ(feed_profile(2.7, cfg.feeds), 168.0);
    EXPECT_EQ(feed_profile(6.0, cfg.feeds), 72.0);
    EXPECT_EQ(feed_profile(1.0, cfg.feeds), 0.0);
}

TEST(FeedProfile, HalfOpenIntervals) {
    const ScenarioConfig cfg;
    EXPECT_EQ(feed_profile(2.5, cfg.feeds), 168.0);
    EXPECT_EQ(feed_profile(3.0, cfg.feeds), 0.0);
    EXPECT_EQ(feed_profile(5.5, cfg.feeds), 72.0);
    EXPECT_EQ(feed_profile(6.5, cfg.feeds), 0.0);
}

TEST(ScenarioConfig, Validate) {
    ScenarioConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.feeds = {{10.0, 1.0, 1.0}, {10.0, 1.5, 1.0}};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.feeds = {{10.0, 1.01, 1.0}};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = ScenarioConfig{};
    cfg.dt = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SimulateTruth, SampleGrid) {
    const ScenarioConfig cfg;
    const TruthTrajectory t = simulate_truth(cfg);
    ASSERT_EQ(t.states.size(), 337U);
    ASSERT_EQ(t.times.size(), 337U);
    EXPECT_DOUBLE_EQ(t.times.back(), 7.0);
    EXPECT_EQ(t.feed[120], 168.0);
    EXPECT_EQ(t.feed[119], 0.0);
}

TEST(SimulateTruth, StartsAtInitialState) {
    const TruthTrajectory t = simulate_truth(ScenarioConfig{});
    Vector x0(6);
    x0 << 4.09, 10.52, 11.04, 2.57, 0.96, 2.02;
    EXPECT_EQ(t.states.front(), x0);
    EXPECT_EQ(initial_state(), x0);
}

TEST(SimulateTruth, Nonnegative) {
    const TruthTrajectory t = simulate_truth(ScenarioConfig{});
    for (const Vector& x : t.states) EXPECT_GE(x.minCoeff(), -1e-10);
}

TEST(SimulateTruth, FedVolume) {
    const ScenarioConfig cfg;
    const TruthTrajectory t = simulate_truth(cfg);
    double volume = 0.0;
    for (std::size_t k = 0; k + 1 < t.feed.size(); ++k) volume += t.feed[k] * cfg.dt;
    EXPECT_NEAR(volume, 156.0, 1e-9);
}

TEST(Measurements, NoiseFreeWithZeroSigma) {
    const TruthTrajectory t = simulate_truth(ScenarioConfig{});
    const auto y = synthesize_measurements(t, Vector::Zero(3), 7);
    for (std::size_t k = 0; k < y.size(); ++k) EXPECT_EQ(y[k], t.outputs[k]);
}

TEST(Measurements, ChannelStd) {
    const TruthTrajectory t = simulate_truth(ScenarioConfig{});
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto y = synthesize_measurements(t, ScenarioConfig::default_sigma(), seed);
        double s = 0.0;
        double s2 = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double e = y[k](1) - t.outputs[k](1);
            s += e;
            s2 += e * e;
        }
        const double n = static_cast<double>(y.size());
        const double sd = std::sqrt((s2 - s * s / n) / (n - 1));
        EXPECT_NEAR(sd, 1.0, 0.15) << "seed " << seed;
    }
}

TEST(Measurements, SeedDeterminism) {
    const TruthTrajectory t = simulate_truth(ScenarioConfig{});
    const Vector sigma = ScenarioConfig::default_sigma();
    EXPECT_EQ(synthesize_measurements(t, sigma, 4), synthesize_measurements(t, sigma, 4));
    EXPECT_NE(synthesize_measurements(t, sigma, 4), synthesize_measurements(t, sigma, 5));
}

TEST(Tuning, Defaults) {
    const Tuning tu = default_tuning();
    EXPECT_NEAR(tu.p0(0, 0), 3.5721, 1e-12);
    EXPECT_NEAR(tu.r(0, 0), 0.96, 1e-12);
    EXPECT_NEAR(tu.r(1, 1), 1.5, 1e-12);
    EXPECT_NEAR(tu.r(2, 2), 0.24, 1e-12);
    EXPECT_EQ(tu.q, Matrix::Identity(6, 6));
    EXPECT_TRUE(tu.p0.isDiagonal());
    Vector xhat(6);
    xhat << 2.20, 19.30, 24.94, 2.22, 0.31, 2.64;
    EXPECT_EQ(tu.x0_hat, xhat);
    for (Index i = 0; i < 6; ++i)
        EXPECT_NEAR(tu.p0(i, i), std::pow(xhat(i) - tu.x0_true(i), 2), 1e-12);
}

TEST(Mismatch, FilterRatesScaled) {
    EXPECT_TRUE(mismatch_consistent(ad::ModelParams::plant(), ad::ModelParams::filter()));
    EXPECT_FALSE(mismatch_consistent(ad::ModelParams::plant(), ad::ModelParams::plant()));
    EXPECT_NEAR(ad::ModelParams::filter().k_ch, 0.3196, 1e-12);
}
