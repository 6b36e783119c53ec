#ifndef LSM_CLASSIFY_HPP
#define LSM_CLASSIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lsm/core.hpp"
#include "lsm/model.hpp"

namespace lsm {

/// log(sum(exp(x))) with the maximum factored out. Empty input gives -inf.
inline double log_sum_exp(std::span<const double> xs) noexcept {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double mx = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(mx)) return mx;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

struct NearestNeighbor {
    std::string id;
    Label label = Label::positive;
    double distance = std::numeric_limits<double>::infinity();
    int shift = 0;
};

struct ClassificationOutcome {
    Label label = Label::positive;
    /// log Lambda; +-inf when one class contributes no weight.
    double log_lambda = 0.0;
    double log_votes_positive = 0.0;
    double log_votes_negative = 0.0;
    NearestNeighbor nearest;
};

namespace detail {

inline ShiftRange training_range(const TimeSeries& r, const VotingParams& p) {
    return p.full_range ? ShiftRange::all_chunks(r, p.T) : ShiftRange::symmetric(p.delta_max);
}

inline Label decide(double log_lambda, double theta) noexcept {
    return log_lambda >= std::log(theta) ? Label::positive : Label::negative;
}

} // namespace detail

/// Best-shift match of s against every training example, per class.
struct DistanceTable {
    std::vector<ShiftMatch> positive;
    std::vector<ShiftMatch> negative;

    const std::vector<ShiftMatch>& of(Label l) const noexcept {
        return l == Label::positive ? positive : negative;
    }
};

inline DistanceTable distance_table(const TimeSeries& s, const LabeledDataset& data,
                                    const VotingParams& params) {
    DistanceTable table;
    table.positive.reserve(data.positives.size());
    table.negative.reserve(data.negatives.size());
    for (const auto& r : data.positives) {
        table.positive.push_back(best_shift(r, s, params.T, detail::training_range(r, params)));
    }
    for (const auto& r : data.negatives) {
        table.negative.push_back(best_shift(r, s, params.T, detail::training_range(r, params)));
    }
    return table;
}

/// log sum_r exp(-gamma * d(r, s)). In sum mode every (r, shift) pair
/// contributes its own vote instead of only the best shift of r.
inline double log_vote_sum(std::span<const TimeSeries> examples, const TimeSeries& s,
                           const VotingParams& params) {
    params.validate();
    if (examples.empty()) throw ParamError("log_vote_sum needs at least one example");
    std::vector<double> exponents;
    for (const auto& r : examples) {
        const auto range = detail::training_range(r, params);
        if (params.shift_mode == ShiftMode::min) {
            exponents.push_back(-params.gamma * best_shift(r, s, params.T, range).distance);
        } else {
            for (double d : shift_distances(r, s, params.T, range)) exponents.push_back(-params.gamma * d);
        }
    }
    return log_sum_exp(exponents);
}

/// log Lambda^(T)(s; gamma) = log votes(R+) - log votes(R-).
inline double lambda_ratio(const TimeSeries& s, const LabeledDataset& data, const VotingParams& params) {
    data.require_both_classes();
    return log_vote_sum(data.positives, s, params) - log_vote_sum(data.negatives, s, params);
}

namespace detail {

inline NearestNeighbor nearest_of(const DistanceTable& table, const LabeledDataset& data) {
    NearestNeighbor nn;
    // Positives first so equal distances resolve toward +1.
    for (Label l : {Label::positive, Label::negative}) {
        const auto& matches = table.of(l);
        for (std::size_t i = 0; i < matches.size(); ++i) {
            if (matches[i].distance < nn.distance) {
                nn = {data.of(l)[i].id(), l, matches[i].distance, matches[i].shift};
            }
        }
    }
    return nn;
}

inline double log_votes(const std::vector<ShiftMatch>& matches, double gamma) {
    std::vector<double> e(matches.size());
    std::transform(matches.begin(), matches.end(), e.begin(),
                   [gamma](const ShiftMatch& m) { return -gamma * m.distance; });
    return log_sum_exp(e);
}

} // namespace detail

/// Generalized weighted majority voting from a precomputed min-mode table.
inline ClassificationOutcome gwmv_from_table(const DistanceTable& table, const LabeledDataset& data,
                                             const VotingParams& params) {
    ClassificationOutcome out;
    out.log_votes_positive = detail::log_votes(table.positive, params.gamma);
    out.log_votes_negative = detail::log_votes(table.negative, params.gamma);
    out.log_lambda = out.log_votes_positive - out.log_votes_negative;
    out.label = detail::decide(out.log_lambda, params.theta);
    out.nearest = detail::nearest_of(table, data);
    return out;
}

/// +1 iff Lambda >= theta; theta = 1 is plain weighted majority voting.
inline ClassificationOutcome classify_gwmv(const TimeSeries& s, const LabeledDataset& data,
                                           const VotingParams& params) {
    params.validate();
    data.require_both_classes();
    const auto table = distance_table(s, data, params);
    if (params.shift_mode == ShiftMode::min) return gwmv_from_table(table, data, params);

    ClassificationOutcome out;
    out.log_votes_positive = log_vote_sum(data.positives, s, params);
    out.log_votes_negative = log_vote_sum(data.negatives, s, params);
    out.log_lambda = out.log_votes_positive - out.log_votes_negative;
    out.label = detail::decide(out.log_lambda, params.theta);
    out.nearest = detail::nearest_of(table, data);
    return out;
}

/// k-nearest-neighbor voting from a precomputed table. Only the k nearest
/// examples vote (weights exp(-gamma d)), and the class with the larger total
/// wins, +1 on ties. Distance ties order positives first, then by position.
inline ClassificationOutcome knn_from_table(const DistanceTable& table, const LabeledDataset& data,
                                            const VotingParams& params, std::size_t k) {
    const std::size_t n = table.positive.size() + table.negative.size();
    if (k < 1 || k > n) {
        throw ParamError("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    }
    struct Candidate {
        double distance;
        int rank; // 0 for +1, 1 for -1
        std::size_t index;
    };
    std::vector<Candidate> cands;
    cands.reserve(n);
    for (std::size_t i = 0; i < table.positive.size(); ++i) cands.push_back({table.positive[i].distance, 0, i});
    for (std::size_t i = 0; i < table.negative.size(); ++i) cands.push_back({table.negative[i].distance, 1, i});
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                          if (a.distance != b.distance) return a.distance < b.distance;
                          if (a.rank != b.rank) return a.rank < b.rank;
                          return a.index < b.index;
                      });

    // Votes are summed in dataset order so that k = n reproduces the full
    // majority vote bit for bit.
    std::vector<char> chosen_pos(table.positive.size(), 0), chosen_neg(table.negative.size(), 0);
    for (std::size_t j = 0; j < k; ++j) (cands[j].rank == 0 ? chosen_pos : chosen_neg)[cands[j].index] = 1;
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < table.positive.size(); ++i) {
        if (chosen_pos[i]) pos.push_back(-params.gamma * table.positive[i].distance);
    }
    for (std::size_t i = 0; i < table.negative.size(); ++i) {
        if (chosen_neg[i]) neg.push_back(-params.gamma * table.negative[i].distance);
    }
    ClassificationOutcome out;
    out.log_votes_positive = log_sum_exp(pos);
    out.log_votes_negative = log_sum_exp(neg);
    if (pos.empty()) {
        out.log_lambda = -std::numeric_limits<double>::infinity();
    } else if (neg.empty()) {
        out.log_lambda = std::numeric_limits<double>::infinity();
    } else {
        out.log_lambda = out.log_votes_positive - out.log_votes_negative;
    }
    const auto& first = cands.front();
    out.label = k == 1 ? (first.rank == 0 ? Label::positive : Label::negative)
                       : (out.log_lambda >= 0.0 ? Label::positive : Label::negative);
    const Label nl = first.rank == 0 ? Label::positive : Label::negative;
    const auto& m = table.of(nl)[first.index];
    out.nearest = {data.of(nl)[first.index].id(), nl, m.distance, m.shift};
    return out;
}

inline ClassificationOutcome classify_knn(const TimeSeries& s, const LabeledDataset& data,
                                          const VotingParams& params, std::size_t k) {
    params.validate();
    data.require_both_classes();
    if (k < 1 || k > data.size()) {
        throw ParamError("k must lie in [1, " + std::to_string(data.size()) + "], got " + std::to_string(k));
    }
    return knn_from_table(distance_table(s, data, params), data, params, k);
}

/// Oracle MAP rule: sums over true sources and over shifts {0..delta_max}
/// of the model. Uses params.gamma and params.T; +1 iff Lambda_MAP >= 1.
inline ClassificationOutcome classify_map(const TimeSeries& s, const LatentSourceModel& model,
                                          const VotingParams& params) {
    params.validate();
    model.require_both_labels();
    const auto range = ShiftRange::nonnegative(model.delta_max);
    std::vector<double> pos, neg;
    NearestNeighbor nn;
    for (const auto& src : model.sources) {
        const auto dists = shift_distances(src.series, s, params.T, range);
        auto& bucket = src.label == Label::positive ? pos : neg;
        for (std::size_t k = 0; k < dists.size(); ++k) {
            bucket.push_back(-params.gamma * dists[k]);
            if (dists[k] < nn.distance) {
                nn = {src.series.id(), src.label, dists[k], range.lo + static_cast<int>(k)};
            }
        }
    }
    ClassificationOutcome out;
    out.log_votes_positive = log_sum_exp(pos);
    out.log_votes_negative = log_sum_exp(neg);
    out.log_lambda = out.log_votes_positive - out.log_votes_negative;
    out.label = out.log_lambda >= 0.0 ? Label::positive : Label::negative;
    out.nearest = nn;
    return out;
}

} // namespace lsm

#endif
