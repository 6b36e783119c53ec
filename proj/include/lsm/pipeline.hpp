#ifndef LSM_PIPELINE_HPP
#define LSM_PIPELINE_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lsm/core.hpp"
#include "lsm/synth.hpp"

namespace lsm {

/// Bucketed activity counts rho(t) for one topic, t = 1..counts.size().
struct RateSeries {
    std::string topic_id;
    std::vector<double> counts;
    double bucket_width_minutes = 2.0;
    /// Bucket (1-based) at which the topic first trended; absent for non-trends.
    std::optional<Index> onset_index;

    Label truth() const noexcept { return onset_index ? Label::positive : Label::negative; }

    void validate() const {
        if (counts.empty()) throw ParamError("rate series '" + topic_id + "' is empty");
        if (!(bucket_width_minutes > 0.0)) throw ParamError("bucket_width_minutes must be > 0");
        for (double c : counts) {
            if (!(c >= 0.0) || !std::isfinite(c)) {
                throw ParamError("rate series '" + topic_id + "' has a negative or non-finite count");
            }
        }
        if (onset_index && (*onset_index < 1 || *onset_index > static_cast<Index>(counts.size()))) {
            throw ParamError("rate series '" + topic_id + "' onset lies outside the series");
        }
    }

    friend bool operator==(const RateSeries&, const RateSeries&) = default;
};

struct PipelineParams {
    double alpha = 1.2;
    int t_smooth = 80;
    double log_floor = 1e-12;

    void validate() const {
        if (!(alpha >= 1.0)) throw ParamError("pipeline.alpha must be >= 1");
        if (t_smooth < 1) throw ParamError("pipeline.t_smooth must be >= 1");
        if (!(log_floor > 0.0)) throw ParamError("pipeline.log_floor must be > 0");
    }
};

/// rho_b(t) = rho(t) / sum_{tau <= t} rho(tau).
inline TimeSeries baseline_normalize(const RateSeries& rho) {
    rho.validate();
    if (rho.counts.front() == 0.0) {
        throw EmptyPrefixError("rate series '" + rho.topic_id + "' has an empty first bucket");
    }
    std::vector<double> out(rho.counts.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < out.size(); ++t) {
        cum += rho.counts[t];
        out[t] = rho.counts[t] / cum;
    }
    return TimeSeries(1, std::move(out), rho.topic_id);
}

/// |x(t) - x(t-1)|^alpha, with x taken as 0 just before the first index.
inline TimeSeries spike_emphasize(const TimeSeries& rho_b, double alpha) {
    if (!(alpha >= 1.0)) throw ParamError("alpha must be >= 1");
    auto in = rho_b.values();
    std::vector<double> out(in.size());
    double prev = 0.0;
    for (std::size_t t = 0; t < in.size(); ++t) {
        out[t] = std::pow(std::abs(in[t] - prev), alpha);
        prev = in[t];
    }
    return TimeSeries(rho_b.start_index(), std::move(out), rho_b.id());
}

/// Causal moving sum over the last t_smooth entries, truncated at the start.
inline TimeSeries smooth(const TimeSeries& rho_bs, int t_smooth) {
    if (t_smooth < 1) throw ParamError("t_smooth must be >= 1");
    auto in = rho_bs.values();
    const std::size_t w = static_cast<std::size_t>(t_smooth);
    std::vector<double> out(in.size());
    for (std::size_t t = 0; t < in.size(); ++t) {
        const std::size_t from = t + 1 >= w ? t + 1 - w : 0;
        double acc = 0.0;
        for (std::size_t k = from; k <= t; ++k) acc += in[k];
        out[t] = acc;
    }
    return TimeSeries(rho_bs.start_index(), std::move(out), rho_bs.id());
}

/// ln(max(x, log_floor)).
inline TimeSeries log_transform(const TimeSeries& rho_bsc, double log_floor) {
    if (!(log_floor > 0.0)) throw ParamError("log_floor must be > 0");
    auto in = rho_bsc.values();
    std::vector<double> out(in.size());
    for (std::size_t t = 0; t < in.size(); ++t) out[t] = std::log(std::max(in[t], log_floor));
    return TimeSeries(rho_bsc.start_index(), std::move(out), rho_bsc.id());
}

inline TimeSeries preprocess(const RateSeries& rho, const PipelineParams& params) {
    params.validate();
    return log_transform(smooth(spike_emphasize(baseline_normalize(rho), params.alpha), params.t_smooth),
                         params.log_floor);
}

enum class SliceMode { pre_onset, random };

/// Number of buckets spanning h hours.
inline int buckets_for_hours(double hours, double bucket_width_minutes) {
    if (!(hours > 0.0) || !(bucket_width_minutes > 0.0)) {
        throw ParamError("hours and bucket width must be > 0");
    }
    return static_cast<int>(std::lround(hours * 60.0 / bucket_width_minutes));
}

/// h-hour slice of a processed series, re-indexed to start at 1. pre_onset
/// takes the buckets ending at `anchor`; random places the slice uniformly.
inline TimeSeries slice_training_window(const TimeSeries& series, Index anchor, double h_hours,
                                        double bucket_width_minutes, SliceMode mode, RngStream& rng) {
    const Index len = buckets_for_hours(h_hours, bucket_width_minutes);
    if (len < 1) throw ParamError("slice would be empty");
    Index first = 0;
    if (mode == SliceMode::pre_onset) {
        first = anchor - len + 1;
    } else {
        const Index hi = series.end_index() - len + 1;
        if (hi < series.start_index()) {
            throw SupportError("series '" + series.id() + "' is shorter than a " + std::to_string(len) +
                               "-bucket slice");
        }
        first = rng.uniform_int(series.start_index(), hi);
    }
    auto w = series.window(first, first + len - 1);
    return TimeSeries(1, std::vector<double>(w.begin(), w.end()), series.id());
}

} // namespace lsm

#endif
