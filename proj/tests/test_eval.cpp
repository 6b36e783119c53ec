#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lsm/eval.hpp"

using namespace lsm;

namespace {

ExperimentConfig tiny_experiment() {
    ExperimentConfig cfg;
    cfg.model_cfg.m = 4;
    cfg.model_cfg.smoothing_scale = 3;
    cfg.delta_max = 2;
    cfg.T_max = 20;
    cfg.T_grid = {5, 20};
    cfg.beta_grid = {1.5, 4};
    cfg.beta_T = 20;
    cfg.beta = 4;
    cfg.test_size = 30;
    cfg.trials = 3;
    cfg.seed = 5;
    return cfg;
}

TrendCorpusConfig tiny_corpus(std::uint64_t seed = 3) {
    TrendCorpusConfig c;
    c.n_trends = 16;
    c.n_nontrends = 16;
    c.seed = seed;
    return c;
}

DetectionConfig quick_detection() {
    DetectionConfig d;
    d.h_hours = 1;
    d.T = 10;
    d.gamma = 1;
    return d;
}

} // namespace

TEST(Experiment, Validation) {
    auto cfg = tiny_experiment();
    EXPECT_NO_THROW(cfg.validate());
    cfg.T_grid = {};
    EXPECT_THROW(cfg.validate(), ParamError);
    cfg = tiny_experiment();
    cfg.T_grid = {21};
    EXPECT_THROW(cfg.validate(), ParamError);
    cfg = tiny_experiment();
    cfg.trials = 0;
    EXPECT_THROW(cfg.validate(), ParamError);
}

TEST(Experiment, NoiselessSeparableHasNoErrors) {
    auto cfg = tiny_experiment();
    cfg.model_cfg.noise.sigma = 0;
    cfg.model_cfg.smoothing_scale = 1;
    cfg.map_gamma = 1.0;
    cfg.delta_max = 0;
    cfg.beta = 8;
    cfg.T_grid = {10, 20};
    auto curves = error_vs_T(cfg);
    for (auto c : kClassifiers) {
        for (double e : curves.of(c).mean) EXPECT_EQ(e, 0.0) << to_string(c);
    }
}

TEST(Experiment, ShapeAndDeterminism) {
    auto cfg = tiny_experiment();
    auto a = error_vs_T(cfg);
    auto b = error_vs_T(cfg);
    EXPECT_EQ(a.axis, "T");
    EXPECT_EQ(a.x, (std::vector<double>{5, 20}));
    for (auto c : kClassifiers) {
        const auto& s = a.of(c);
        ASSERT_EQ(s.mean.size(), 2u);
        ASSERT_EQ(s.per_trial.size(), 3u);
        EXPECT_EQ(s.per_trial, b.of(c).per_trial);
        for (std::size_t p = 0; p < 2; ++p) {
            double mu = 0;
            for (auto& row : s.per_trial) mu += row[p];
            EXPECT_NEAR(s.mean[p], mu / 3, 1e-15);
            EXPECT_GE(s.stddev[p], 0.0);
        }
    }
}

TEST(Experiment, MapFlatInBeta) {
    auto curves = error_vs_beta(tiny_experiment());
    EXPECT_EQ(curves.axis, "beta");
    for (const auto& row : curves.of(Classifier::map).per_trial) {
        for (double e : row) EXPECT_EQ(e, row.front());
    }
}

TEST(Experiment, SharedTestSetAcrossSweeps) {
    // same trial seed gives the same MAP error at T = beta_T in both sweeps
    auto cfg = tiny_experiment();
    auto t = error_vs_T(cfg);
    auto b = error_vs_beta(cfg);
    for (std::size_t trial = 0; trial < 3; ++trial) {
        EXPECT_EQ(t.of(Classifier::map).per_trial[trial][1], b.of(Classifier::map).per_trial[trial][0]);
    }
}

TEST(Corpus, Deterministic) {
    auto a = make_trend_corpus(tiny_corpus());
    auto b = make_trend_corpus(tiny_corpus());
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 32u);
    std::set<std::string> ids;
    for (const auto& r : a) {
        EXPECT_NO_THROW(r.validate());
        EXPECT_GT(r.counts.front(), 0.0);
        ids.insert(r.topic_id);
        if (r.onset_index) {
            EXPECT_GE(*r.onset_index, 150);
            EXPECT_LE(*r.onset_index, 250);
        }
    }
    EXPECT_EQ(ids.size(), a.size());
    EXPECT_NE(make_trend_corpus(tiny_corpus(4)), a);
}

TEST(Detection, ExactCopyFiresImmediately) {
    std::vector<double> p(30), n(30, -5.0);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::sin(0.3 * static_cast<double>(i));
    LabeledDataset train;
    train.add(TimeSeries(1, p, "p"), Label::positive);
    train.add(TimeSeries(1, n, "n"), Label::negative);

    std::vector<double> v = p;
    v.insert(v.end(), n.begin(), n.end());
    TimeSeries series(1, v, "topic");
    auto cfg = quick_detection();
    cfg.gamma = 100;
    auto r = detect_online(series, train, cfg, 30);
    ASSERT_TRUE(r.detected);
    EXPECT_EQ(*r.detection_index, 10);
    EXPECT_EQ(*r.relative_minutes, (10 - 30) * 2.0);
}

TEST(Detection, NearNegativesNeverFires) {
    LabeledDataset train;
    train.add(TimeSeries(1, std::vector<double>(30, 10.0), "p"), Label::positive);
    train.add(TimeSeries(1, std::vector<double>(30, 0.0), "n"), Label::negative);
    TimeSeries series(1, std::vector<double>(80, 0.1), "topic");
    auto cfg = quick_detection();
    cfg.gamma = 100;
    auto r = detect_online(series, train, cfg, 40);
    EXPECT_FALSE(r.detected);
    EXPECT_FALSE(r.detection_index.has_value());
    EXPECT_FALSE(r.relative_minutes.has_value());
    EXPECT_THROW(detect_online(series, train, cfg, 60), SupportError);
}

TEST(Detection, Summary) {
    std::vector<DetectionResult> rs(5);
    rs[0] = {"a", true, 90, -20.0, Label::positive, 100};
    rs[1] = {"b", true, 105, 10.0, Label::positive, 100};
    rs[2] = {"c", false, std::nullopt, std::nullopt, Label::positive, 100};
    rs[3] = {"d", true, 50, 0.0, Label::negative, 50};
    rs[4] = {"e", false, std::nullopt, std::nullopt, Label::negative, 50};
    auto s = summarize_detections(rs);
    EXPECT_DOUBLE_EQ(s.tpr, 2.0 / 3);
    EXPECT_DOUBLE_EQ(s.fpr, 0.5);
    EXPECT_DOUBLE_EQ(s.early_fraction_detected, 0.5);
    EXPECT_DOUBLE_EQ(s.early_fraction_all, 1.0 / 3);
    EXPECT_DOUBLE_EQ(s.mean_relative_minutes, -5.0);
    EXPECT_DOUBLE_EQ(s.mean_early_hours, 20.0 / 60);
}

TEST(Detection, SplitHygieneAndTiming) {
    auto corpus = make_trend_corpus(tiny_corpus());
    auto run = run_detection(corpus, quick_detection(), 9);
    std::set<std::string> train(run.train_ids.begin(), run.train_ids.end());
    std::set<std::string> test(run.test_ids.begin(), run.test_ids.end());
    EXPECT_EQ(train.size(), 16u);
    EXPECT_EQ(test.size(), 16u);
    for (const auto& id : test) EXPECT_EQ(train.count(id), 0u);
    for (const auto& r : run.results) {
        EXPECT_EQ(r.detected, r.detection_index.has_value());
        if (r.detected) {
            EXPECT_EQ(*r.relative_minutes < 0, *r.detection_index < r.anchor);
        }
    }
    auto again = run_detection(corpus, quick_detection(), 9);
    EXPECT_EQ(again.test_ids, run.test_ids);
    EXPECT_EQ(again.summary.tpr, run.summary.tpr);
    EXPECT_EQ(again.summary.fpr, run.summary.fpr);
}

TEST(Detection, RejectsDuplicateIds) {
    auto corpus = make_trend_corpus(tiny_corpus());
    corpus[1].topic_id = corpus[0].topic_id;
    EXPECT_THROW(run_detection(corpus, quick_detection(), 1), ParamError);
}

TEST(Roc, EnvelopeIsMonotone) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        std::vector<RocPoint> cloud(20);
        for (auto& p : cloud) p = {std::round(u(rng) * 10) / 10, u(rng)};
        auto env = roc_envelope(cloud);
        for (std::size_t k = 1; k < env.size(); ++k) {
            EXPECT_LT(env[k - 1].fpr, env[k].fpr);
            EXPECT_LE(env[k - 1].tpr, env[k].tpr);
        }
    }
}

TEST(Roc, ExtremesReachCorners) {
    auto corpus = make_trend_corpus(tiny_corpus());
    SweepGrid grid;
    grid.gamma = {0.0};
    grid.theta = {0.5, 2.0};
    auto sweep = roc_sweep(corpus, quick_detection(), grid, 4);
    ASSERT_EQ(sweep.points.size(), 2u);
    EXPECT_EQ(sweep.points[0].summary.fpr, 1.0);
    EXPECT_EQ(sweep.points[0].summary.tpr, 1.0);
    EXPECT_EQ(sweep.points[1].summary.fpr, 0.0);
    EXPECT_EQ(sweep.points[1].summary.tpr, 0.0);
    EXPECT_EQ(sweep.envelope.front().fpr, 0.0);
    EXPECT_EQ(sweep.envelope.back().tpr, 1.0);
}

TEST(Roc, SkipsInfeasibleT) {
    auto corpus = make_trend_corpus(tiny_corpus());
    SweepGrid grid;
    grid.T = {10, 500};
    EXPECT_EQ(roc_sweep(corpus, quick_detection(), grid, 4).points.size(), 1u);
}
