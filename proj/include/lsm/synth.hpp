#ifndef LSM_SYNTH_HPP
#define LSM_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lsm/core.hpp"
#include "lsm/model.hpp"

namespace lsm {

/// Seedable, splittable random stream. Children derived from the same parent
/// and key are identical, so draws can be generated in any order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    RngStream derive(std::uint64_t key) const {
        return RngStream(mix(seed_ ^ mix(key + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::mt19937_64& engine() noexcept { return engine_; }

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }

    /// SplitMix64 finalizer.
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct GeneratorConfig {
    int m = 10;
    /// Length of each source; its support starts at start_index.
    int series_length = 130;
    double amplitude_variance = 100.0;
    double smoothing_scale = 30.0;
    std::uint64_t seed = 1;
    Index start_index = 1;
    int delta_max = 0;
    NoiseSpec noise;

    void validate() const {
        if (m < 2) throw ParamError("generator.m must be >= 2");
        if (series_length < 1) throw ParamError("generator.series_length must be >= 1");
        if (!(amplitude_variance > 0.0)) throw ParamError("generator.amplitude_variance must be > 0");
        if (!(smoothing_scale > 0.0)) throw ParamError("generator.smoothing_scale must be > 0");
        if (delta_max < 0) throw ParamError("delta_max must be >= 0");
        if (series_length - delta_max < 1) {
            throw ParamError("generator.series_length must exceed delta_max");
        }
    }
};

/// Normalized Gaussian kernel truncated at +-ceil(4 * scale).
inline std::vector<double> gaussian_kernel(double scale) {
    if (!(scale > 0.0)) throw ParamError("smoothing scale must be > 0");
    const int half = static_cast<int>(std::ceil(4.0 * scale));
    std::vector<double> w(2 * static_cast<std::size_t>(half) + 1);
    double total = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double v = std::exp(-0.5 * (j / scale) * (j / scale));
        w[static_cast<std::size_t>(j + half)] = v;
        total += v;
    }
    for (double& v : w) v /= total;
    return w;
}

/// Smoothed-noise latent sources with alternating labels (+1 first). Each
/// source is i.i.d. N(0, amplitude_variance) filtered by a Gaussian kernel;
/// the raw draw is padded by the kernel half-width on both sides and the
/// padding cropped, so no output entry sees a truncated window.
inline LatentSourceModel make_latent_sources(const GeneratorConfig& cfg) {
    cfg.validate();
    const auto kernel = gaussian_kernel(cfg.smoothing_scale);
    const std::size_t margin = kernel.size() / 2;
    const std::size_t len = static_cast<std::size_t>(cfg.series_length);
    const double sd = std::sqrt(cfg.amplitude_variance);
    const RngStream root(cfg.seed);

    LatentSourceModel model;
    model.delta_max = cfg.delta_max;
    model.noise = cfg.noise;
    model.window_start = cfg.start_index;
    model.window_length = cfg.series_length - cfg.delta_max;
    model.sources.reserve(static_cast<std::size_t>(cfg.m));

    std::vector<double> raw(len + 2 * margin);
    for (int i = 0; i < cfg.m; ++i) {
        auto rng = root.derive(static_cast<std::uint64_t>(i));
        for (double& x : raw) x = sd * rng.normal();
        std::vector<double> out(len, 0.0);
        for (std::size_t t = 0; t < len; ++t) {
            double acc = 0.0;
            for (std::size_t j = 0; j < kernel.size(); ++j) acc += kernel[j] * raw[t + j];
            out[t] = acc;
        }
        char id[32];
        std::snprintf(id, sizeof id, "source-%04d", i);
        model.sources.push_back({TimeSeries(cfg.start_index, std::move(out), id),
                                 i % 2 == 0 ? Label::positive : Label::negative});
    }
    return model;
}

struct Sample {
    TimeSeries series;
    Label label;
    Provenance provenance;
};

inline double draw_noise(const NoiseSpec& noise, RngStream& rng) {
    if (noise.sigma == 0.0) return 0.0;
    return noise.family == NoiseFamily::gaussian ? noise.sigma * rng.normal()
                                                 : rng.uniform(-noise.sigma, noise.sigma);
}

inline std::size_t draw_source(const LatentSourceModel& model, RngStream& rng) {
    const std::size_t m = model.m();
    if (model.weights.empty()) return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(m) - 1));
    const double u = rng.uniform(0.0, 1.0);
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (model.weights[i] <= 0.0) continue;
        last_positive = i;
        cum += model.weights[i];
        if (u < cum) return i;
    }
    return last_positive;
}

/// One draw S(t) = V(t + shift) + E(t) over the model's sampling window.
inline Sample sample_series(const LatentSourceModel& model, RngStream& rng, std::string id = {}) {
    if (model.sources.empty()) throw ParamError("latent source model has no sources");
    const std::size_t src = draw_source(model, rng);
    const int shift = static_cast<int>(rng.uniform_int(0, model.delta_max));
    const auto& v = model.sources[src];
    const Index first = model.window_start;
    const Index last = model.window_start + model.window_length - 1;
    auto base = v.series.window(first + shift, last + shift);
    std::vector<double> values(base.begin(), base.end());
    for (double& x : values) x += draw_noise(model.noise, rng);
    return {TimeSeries(first, std::move(values), std::move(id)), v.label,
            {static_cast<int>(src), shift}};
}

/// n independent draws; draw i uses stream rng.derive(i).
inline std::vector<Sample> sample_many(const LatentSourceModel& model, std::size_t n, const RngStream& rng,
                                       const std::string& id_prefix = "s") {
    model.validate();
    std::vector<Sample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto child = rng.derive(i);
        out.push_back(sample_series(model, child, id_prefix + "-" + std::to_string(i)));
    }
    return out;
}

inline LabeledDataset to_dataset(std::vector<Sample> samples) {
    LabeledDataset data;
    for (auto& s : samples) data.add(std::move(s.series), s.label, s.provenance);
    return data;
}

inline LabeledDataset sample_dataset(const LatentSourceModel& model, std::size_t n, const RngStream& rng,
                                     const std::string& id_prefix = "train") {
    if (n < 1) throw ParamError("dataset size must be >= 1");
    return to_dataset(sample_many(model, n, rng, id_prefix));
}

/// ceil(beta * m * ln m).
inline std::size_t training_size(double beta, std::size_t m) {
    const double md = static_cast<double>(m);
    return static_cast<std::size_t>(std::ceil(beta * md * std::log(md)));
}

/// Number of training examples drawn from each source.
inline std::vector<std::size_t> coverage_counts(const LabeledDataset& data, const LatentSourceModel& model) {
    if (!data.has_provenance()) throw ProvenanceError("dataset carries no source provenance");
    std::vector<std::size_t> counts(model.m(), 0);
    for (const auto* provs : {&data.positive_provenance, &data.negative_provenance}) {
        for (const auto& p : *provs) {
            if (p.source_index < 0 || static_cast<std::size_t>(p.source_index) >= counts.size()) {
                throw ProvenanceError("provenance names source " + std::to_string(p.source_index) +
                                      " outside the model");
            }
            ++counts[static_cast<std::size_t>(p.source_index)];
        }
    }
    return counts;
}

} // namespace lsm

#endif
