#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lsm/gapbounds.hpp"
#include "oracles.hpp"

using namespace lsm;

namespace {

LabeledDataset random_set(std::mt19937_64& rng, int npos, int nneg, Index start, std::size_t len, bool ints = false) {
    LabeledDataset d;
    for (int i = 0; i < npos; ++i) d.add(oracle::random_series(rng, start, len, ints), Label::positive);
    for (int i = 0; i < nneg; ++i) d.add(oracle::random_series(rng, start, len, ints), Label::negative);
    return d;
}

BoundInputs worked() {
    BoundInputs in;
    in.m = 4;
    in.m_plus = 2;
    in.m_minus = 2;
    in.theta = 1;
    in.delta_max = 0;
    in.n = 10;
    in.sigma = 1;
    in.gamma = 0.125;
    in.gap = 32;
    in.beta = 2;
    return in;
}

BoundInputs random_inputs(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BoundInputs in;
    in.m_plus = 1 + static_cast<int>(rng() % 50);
    in.m_minus = 1 + static_cast<int>(rng() % 50);
    in.m = in.m_plus + in.m_minus;
    in.n = 1 + static_cast<double>(rng() % 10000);
    in.beta = 1.01 + 9 * u(rng);
    in.sigma = 0.01 + 10 * u(rng);
    in.theta = 0.01 + 10 * u(rng);
    in.gamma = 2 * u(rng) / (4 * in.sigma * in.sigma);
    in.delta_max = static_cast<int>(rng() % 200);
    in.gap = 1e4 * u(rng) * in.sigma * in.sigma;
    return in;
}

} // namespace

TEST(Gap, TwoPoints) {
    LabeledDataset d;
    d.add(TimeSeries(1, {0, 0}), Label::positive);
    d.add(TimeSeries(1, {1, 1}), Label::negative);
    EXPECT_EQ(gap(d, 2, 0), 2.0);
}

TEST(Gap, ConstantsAtAnyShift) {
    for (int dmax = 0; dmax <= 4; ++dmax) {
        LabeledDataset d;
        d.add(TimeSeries(-10, std::vector<double>(30, 0.0)), Label::positive);
        d.add(TimeSeries(-10, std::vector<double>(30, 1.0)), Label::negative);
        EXPECT_EQ(gap(d, 2, dmax), 2.0);
    }
}

TEST(Gap, NeedsMarginAndBothClasses) {
    LabeledDataset d;
    d.add(TimeSeries(1, {0, 0, 0}), Label::positive);
    d.add(TimeSeries(1, {1, 1, 1}), Label::negative);
    EXPECT_THROW(gap(d, 2, 1), SupportError);
    d.negatives.clear();
    EXPECT_THROW(gap(d, 2, 0), ParamError);
}

TEST(Gap, MatchesQuadrupleLoop) {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 100; ++i) {
        auto d = random_set(rng, 3, 3, -1, 10, i % 2 == 0);
        const double want = oracle::gap(d, 6, 2);
        EXPECT_EQ(gap(d, 6, 2), want);
        EXPECT_EQ(gap(d, 6, 2, true), want);
    }
}

TEST(Gap, Monotone) {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 100; ++i) {
        auto d = random_set(rng, 2, 3, -5, 20);
        EXPECT_LE(gap(d, 5, 3), gap(d, 5, 2));
        EXPECT_LE(gap(d, 5, 2), gap(d, 5, 0));
        EXPECT_LE(gap(d, 5, 2), gap(d, 6, 2));
    }
}

TEST(Gap, UnshiftedIsPairwiseMinimum) {
    std::mt19937_64 rng(79);
    for (int i = 0; i < 50; ++i) {
        auto d = random_set(rng, 3, 2, -2, 12);
        double best = std::numeric_limits<double>::infinity();
        for (auto& p : d.positives)
            for (auto& n : d.negatives) best = std::min(best, window_sq_dist(p, n, 0, 5));
        EXPECT_EQ(gap(d, 5, 0), best);
        EXPECT_LE(gap(d, 5, 2), best);
    }
}

TEST(GapStar, Examples) {
    LatentSourceModel model;
    model.sources.push_back({TimeSeries(1, {0, 0}), Label::positive});
    model.sources.push_back({TimeSeries(1, {3, 4}), Label::negative});
    EXPECT_EQ(gap_star(model, 2), 25.0);
    model.sources.push_back({TimeSeries(1, {0, 0}), Label::negative});
    EXPECT_EQ(gap_star(model, 2), 0.0);
}

TEST(GapStar, MatchesPairwise) {
    std::mt19937_64 rng(83);
    for (int i = 0; i < 50; ++i) {
        LatentSourceModel model;
        for (int k = 0; k < 5; ++k) model.sources.push_back({oracle::random_series(rng, 1, 8), Label::positive});
        EXPECT_EQ(gap_star(model, 8), oracle::gap_star(model, 8));
    }
}

TEST(Bounds, WorkedValue) {
    const double b = wmv_bound(worked());
    EXPECT_DOUBLE_EQ(b, 10.0 * std::exp(-2.0) + 0.25);
    EXPECT_NEAR(b, 1.6033528323661270, 1e-15);
    EXPECT_EQ(nn_bound(worked()), b);
    EXPECT_TRUE(is_vacuous(b));
}

TEST(Bounds, ZeroGammaDropsExponent) {
    auto in = worked();
    in.gamma = 0;
    in.theta = 2;
    in.m_plus = 1;
    in.m_minus = 3;
    in.delta_max = 2;
    const double want = (2.0 * 1 / 4 + 3.0 / (2 * 4)) * 5 * 10 + std::pow(4.0, -1.0);
    EXPECT_NEAR(wmv_bound(in), want, 1e-12);
}

TEST(Bounds, NearestNeighbourLimits) {
    auto in = worked();
    in.gap = 0;
    in.delta_max = 3;
    EXPECT_DOUBLE_EQ(nn_bound(in), 7 * 10 + 0.25);
    in.gap = 1e9;
    EXPECT_EQ(nn_bound(in), 0.25);
    in.beta = 1;
    EXPECT_THROW(nn_bound(in), ParamError);
    EXPECT_THROW(wmv_bound(in), ParamError);
}

TEST(Bounds, VotingMatchesNearestNeighbourAtCriticalGamma) {
    std::mt19937_64 rng(89);
    for (int i = 0; i < 10000; ++i) {
        auto in = random_inputs(rng);
        in.theta = 1;
        in.gamma = 1.0 / (8.0 * in.sigma * in.sigma);
        ASSERT_EQ(wmv_bound(in), nn_bound(in));
    }
}

TEST(Bounds, Monotone) {
    std::mt19937_64 rng(97);
    for (int i = 0; i < 1000; ++i) {
        auto in = random_inputs(rng);
        in.gap = 1 + static_cast<double>(rng() % 50);
        in.sigma = 1;
        in.gamma = 0.125;
        auto more = in;
        more.gap += 1;
        EXPECT_LT(wmv_bound(more), wmv_bound(in));
        EXPECT_LT(nn_bound(more), nn_bound(in));
        more = in;
        more.n += 1;
        EXPECT_GT(wmv_bound(more), wmv_bound(in));
        EXPECT_GT(nn_bound(more), nn_bound(in));
        more = in;
        more.delta_max += 1;
        EXPECT_GT(wmv_bound(more), wmv_bound(in));
        EXPECT_GT(nn_bound(more), nn_bound(in));
    }
}

TEST(RequiredGap, Examples) {
    EXPECT_NEAR(required_gap(1, 5, 5, 10, 1, 100, 0.1, 0.125, 1), 16 * (std::log(3.0) + std::log(100.0) + std::log(20.0)),
                1e-12);
    EXPECT_NEAR(required_gap(1, 5, 5, 10, 1, 100, 0.1, 0.125, 1), 139.19, 0.01);
    EXPECT_EQ(required_gap(1, 3, 3, 6, 0, 1, 2, 0.125, 1), 0.0);
    EXPECT_THROW(required_gap(1, 1, 1, 2, 0, 1, 0.1, 0.25, 1), ParamError);
    EXPECT_THROW(required_gap(1, 1, 1, 2, 0, 1, 0.0, 0.125, 1), ParamError);
}

TEST(RequiredGap, BringsBoundToDelta) {
    // at the required gap the exponential term is delta/2
    const double delta = 0.1;
    BoundInputs in = worked();
    in.theta = 1.7;
    in.m_plus = 3;
    in.m_minus = 1;
    in.delta_max = 2;
    in.n = 500;
    in.gap = required_gap(in.theta, in.m_plus, in.m_minus, in.m, in.delta_max, in.n, delta, in.gamma, in.sigma);
    EXPECT_NEAR(wmv_bound(in) - std::pow(4.0, 1 - in.beta), delta / 2, 1e-12);
}

TEST(GaussianConditions, Thresholds) {
    auto c = gaussian_conditions(10, 2, 1, 0.05, 40, 100);
    EXPECT_NEAR(c.separation.threshold, 4 * std::log(8000.0), 1e-12);
    EXPECT_NEAR(c.separation.threshold, 35.95, 0.01);
    EXPECT_NEAR(c.horizon.threshold, 209.5, 0.05);
    EXPECT_TRUE(c.separation.holds);
    EXPECT_FALSE(c.horizon.holds);
    EXPECT_FALSE(c.all());

    auto loose = gaussian_conditions(20, 2, 1, 0.999, 1e3, 1e3);
    EXPECT_TRUE(loose.training_size.holds);
    EXPECT_NEAR(loose.training_size.threshold, 2 * std::log(8 / 0.999), 1e-12);
    EXPECT_TRUE(loose.all());
    EXPECT_THROW(gaussian_conditions(10, 2, 1, 0, 1, 1), ParamError);
}
