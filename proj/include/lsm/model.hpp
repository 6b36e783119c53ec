#ifndef LSM_MODEL_HPP
#define LSM_MODEL_HPP

#include <cmath>
#include <string>
#include <vector>

#include "lsm/core.hpp"

namespace lsm {

enum class NoiseFamily { gaussian, uniform };

/// Zero-mean sub-Gaussian noise with parameter sigma. Gaussian uses sigma as
/// its standard deviation; uniform is supported on [-sigma, sigma].
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma = 1.0;
};

struct LatentSource {
    TimeSeries series;
    Label label;
};

/// The m labeled latent sources together with how observations are drawn
/// from them. Observations are produced on [window_start, window_start +
/// window_length - 1], so every source must cover that range plus delta_max
/// steps to the right.
struct LatentSourceModel {
    std::vector<LatentSource> sources;
    int delta_max = 0;
    NoiseSpec noise;
    /// Sampling probabilities per source; empty means uniform.
    std::vector<double> weights;
    Index window_start = 1;
    int window_length = 1;

    std::size_t m() const noexcept { return sources.size(); }

    std::size_t count(Label l) const noexcept {
        std::size_t c = 0;
        for (const auto& s : sources) c += s.label == l ? 1 : 0;
        return c;
    }

    double weight(std::size_t i) const {
        return weights.empty() ? 1.0 / static_cast<double>(sources.size()) : weights.at(i);
    }

    double min_weight() const {
        double w = weight(0);
        for (std::size_t i = 1; i < sources.size(); ++i) w = std::min(w, weight(i));
        return w;
    }

    void validate() const {
        if (sources.empty()) throw ParamError("latent source model has no sources");
        if (delta_max < 0) throw ParamError("delta_max must be >= 0");
        if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
            throw ParamError("noise sigma must be finite and >= 0");
        }
        if (window_length < 1) throw ParamError("sampling window length must be >= 1");
        if (!weights.empty()) {
            if (weights.size() != sources.size()) {
                throw ParamError("weights has length " + std::to_string(weights.size()) + ", expected " +
                                 std::to_string(sources.size()));
            }
            double total = 0.0;
            for (double w : weights) {
                if (!(w >= 0.0)) throw ParamError("weights must be nonnegative");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-12) throw ParamError("weights must sum to 1");
        }
        const Index last = window_start + window_length - 1 + delta_max;
        for (const auto& s : sources) s.series.require(window_start, last);
    }

    void require_both_labels() const {
        if (count(Label::positive) == 0) throw ParamError("model has no positive sources");
        if (count(Label::negative) == 0) throw ParamError("model has no negative sources");
    }
};

} // namespace lsm

#endif
