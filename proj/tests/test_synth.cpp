#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "lsm/synth.hpp"

using namespace lsm;

namespace {

GeneratorConfig small_cfg(int m = 4, int len = 40, int dmax = 3) {
    GeneratorConfig c;
    c.m = m;
    c.series_length = len;
    c.smoothing_scale = 3.0;
    c.delta_max = dmax;
    c.seed = 77;
    return c;
}

LatentSourceModel fixed_model(int m, int dmax, NoiseSpec noise = {}) {
    LatentSourceModel model;
    for (int i = 0; i < m; ++i) {
        std::vector<double> v(10 + static_cast<std::size_t>(dmax));
        std::iota(v.begin(), v.end(), 10.0 * i);
        model.sources.push_back({TimeSeries(1, v, "v" + std::to_string(i)), i % 2 == 0 ? Label::positive : Label::negative});
    }
    model.delta_max = dmax;
    model.window_length = 10;
    model.noise = noise;
    return model;
}

} // namespace

TEST(RngStream, DerivedStreamsAreReproducible) {
    RngStream a(5), b(5);
    EXPECT_EQ(a.derive(3).seed(), b.derive(3).seed());
    EXPECT_NE(a.derive(3).seed(), a.derive(4).seed());
    auto x = a.derive(9), y = b.derive(9);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(x.normal(), y.normal());
}

TEST(Kernel, NormalizedAndSymmetric) {
    auto k = gaussian_kernel(2.5);
    EXPECT_EQ(k.size(), 2u * 10 + 1);
    EXPECT_NEAR(std::accumulate(k.begin(), k.end(), 0.0), 1.0, 1e-14);
    for (std::size_t i = 0; i < k.size(); ++i) EXPECT_EQ(k[i], k[k.size() - 1 - i]);
    EXPECT_THROW(gaussian_kernel(0.0), ParamError);
}

TEST(Sources, TwoSourcesOnePerLabel) {
    auto model = make_latent_sources(small_cfg(2));
    ASSERT_EQ(model.m(), 2u);
    EXPECT_EQ(model.count(Label::positive), 1u);
    EXPECT_EQ(model.count(Label::negative), 1u);
}

TEST(Sources, HalfPositiveRoundedUp) {
    auto model = make_latent_sources(small_cfg(7));
    EXPECT_EQ(model.count(Label::positive), 4u);
    EXPECT_EQ(model.count(Label::negative), 3u);
    EXPECT_NO_THROW(model.validate());
}

TEST(Sources, RejectsBadConfig) {
    auto c = small_cfg();
    c.smoothing_scale = 0;
    EXPECT_THROW(make_latent_sources(c), ParamError);
    c = small_cfg();
    c.amplitude_variance = -1;
    EXPECT_THROW(make_latent_sources(c), ParamError);
    c = small_cfg();
    c.m = 1;
    EXPECT_THROW(make_latent_sources(c), ParamError);
}

TEST(Sources, NarrowKernelKeepsVariance) {
    GeneratorConfig c;
    c.m = 2;
    c.series_length = 10000;
    c.smoothing_scale = 0.05;
    c.seed = 3;
    auto model = make_latent_sources(c);
    auto v = model.sources[0].series.values();
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = ss / (v.size() - 1);
    // sd of the sample variance is about 100 sqrt(2/n) = 1.41
    EXPECT_NEAR(var, 100.0, 6.0);
}

TEST(Sources, Deterministic) {
    auto a = make_latent_sources(small_cfg());
    auto b = make_latent_sources(small_cfg());
    for (std::size_t i = 0; i < a.m(); ++i) EXPECT_EQ(a.sources[i].series, b.sources[i].series);
}

TEST(Sample, NoiselessShiftless) {
    auto model = fixed_model(3, 0, {NoiseFamily::gaussian, 0.0});
    RngStream rng(1);
    for (int i = 0; i < 20; ++i) {
        auto s = sample_series(model, rng);
        const auto& src = model.sources[static_cast<std::size_t>(s.provenance.source_index)];
        EXPECT_EQ(s.provenance.shift, 0);
        EXPECT_EQ(s.label, src.label);
        for (Index t = 1; t <= 10; ++t) EXPECT_EQ(s.series.at(t), src.series.at(t));
    }
}

TEST(Sample, ShiftedNoiseless) {
    auto model = fixed_model(2, 4, {NoiseFamily::gaussian, 0.0});
    RngStream rng(2);
    for (int i = 0; i < 50; ++i) {
        auto s = sample_series(model, rng);
        const auto& src = model.sources[static_cast<std::size_t>(s.provenance.source_index)];
        for (Index t = 1; t <= 10; ++t) EXPECT_EQ(s.series.at(t), src.series.at(t + s.provenance.shift));
    }
}

TEST(Sample, ShiftHistogramIsUniform) {
    auto model = fixed_model(2, 3);
    RngStream rng(3);
    std::array<int, 4> hist{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        auto s = sample_series(model, rng);
        ASSERT_GE(s.provenance.shift, 0);
        ASSERT_LE(s.provenance.shift, 3);
        ++hist[static_cast<std::size_t>(s.provenance.shift)];
    }
    const double p = 0.25, band = 3.0 * std::sqrt(n * p * (1 - p));
    for (int c : hist) EXPECT_NEAR(c, n * p, band);
}

TEST(Sample, DegenerateWeights) {
    auto model = fixed_model(4, 0);
    model.weights = {1.0, 0.0, 0.0, 0.0};
    model.validate();
    RngStream rng(4);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_series(model, rng).provenance.source_index, 0);
}

TEST(Sample, NoiseMoments) {
    for (auto family : {NoiseFamily::gaussian, NoiseFamily::uniform}) {
        NoiseSpec noise{family, 2.0};
        RngStream rng(5);
        const int n = 100000;
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            const double e = draw_noise(noise, rng);
            if (family == NoiseFamily::uniform) {
                ASSERT_GE(e, -2.0);
                ASSERT_LE(e, 2.0);
            }
            sum += e;
        }
        EXPECT_LE(std::abs(sum / n), 4.0 * 2.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST(Dataset, SingleDraw) {
    auto model = fixed_model(2, 1);
    auto d = sample_dataset(model, 1, RngStream(6));
    EXPECT_EQ(d.size(), 1u);
    EXPECT_TRUE(d.positives.empty() != d.negatives.empty());
    EXPECT_THROW(sample_dataset(model, 0, RngStream(6)), ParamError);
}

TEST(Dataset, ReproducibleWithProvenance) {
    auto model = make_latent_sources(small_cfg());
    auto a = sample_dataset(model, 50, RngStream(8));
    auto b = sample_dataset(model, 50, RngStream(8));
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.has_provenance());
    for (Label l : {Label::positive, Label::negative}) {
        const auto& provs = l == Label::positive ? a.positive_provenance : a.negative_provenance;
        for (const auto& p : provs) {
            EXPECT_EQ(model.sources[static_cast<std::size_t>(p.source_index)].label, l);
            EXPECT_GE(p.shift, 0);
            EXPECT_LE(p.shift, model.delta_max);
        }
    }
}

TEST(Dataset, ClassSizesAreBinomial) {
    auto model = fixed_model(5, 0); // 3 positive sources of 5
    const int n = 5000;
    auto d = sample_dataset(model, n, RngStream(9));
    const double p = 0.6;
    EXPECT_NEAR(static_cast<double>(d.positives.size()), n * p, 3.0 * std::sqrt(n * p * (1 - p)));
}

TEST(Dataset, TrainingSize) {
    EXPECT_EQ(training_size(8.0, 200), 8478u);
    EXPECT_EQ(training_size(1.0, 10), 24u);
}

TEST(Coverage, CountsAndErrors) {
    auto model = fixed_model(1, 0);
    auto d = sample_dataset(model, 17, RngStream(10));
    EXPECT_EQ(coverage_counts(d, model), std::vector<std::size_t>{17});

    LabeledDataset bare;
    bare.add(TimeSeries(1, {1.0}), Label::positive);
    EXPECT_THROW(coverage_counts(bare, model), ProvenanceError);
}

TEST(Coverage, UniformWeightsSeeEverySource) {
    // n > m log(2m/delta) at m = 10, delta = 0.2
    auto model = fixed_model(10, 0);
    const double delta = 0.2;
    const auto n = static_cast<std::size_t>(std::floor(10 * std::log(2 * 10 / delta))) + 1;
    const int trials = 500;
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        auto counts = coverage_counts(sample_dataset(model, n, RngStream(1000 + t)), model);
        ok += *std::min_element(counts.begin(), counts.end()) > 0 ? 1 : 0;
    }
    EXPECT_GE(static_cast<double>(ok) / trials, 1 - delta / 2);
}
