#ifndef LSM_CORE_HPP
#define LSM_CORE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsm/errors.hpp"

namespace lsm {

using Index = std::int64_t;

/// Real-valued signal defined on the contiguous index range
/// [start_index, start_index + size() - 1]. Immutable once built.
class TimeSeries {
public:
    TimeSeries(Index start_index, std::vector<double> values, std::string id = {})
        : start_(start_index), values_(std::move(values)), id_(std::move(id)) {
        if (values_.empty()) {
            throw ParamError("time series '" + id_ + "' has no values");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw ParamError("time series '" + id_ + "' has a non-finite value at offset " +
                                 std::to_string(i));
            }
        }
    }

    Index start_index() const noexcept { return start_; }
    Index end_index() const noexcept { return start_ + static_cast<Index>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    const std::string& id() const noexcept { return id_; }
    std::span<const double> values() const noexcept { return values_; }

    bool covers(Index first, Index last) const noexcept {
        return first >= start_ && last <= end_index();
    }

    double at(Index t) const {
        if (!covers(t, t)) {
            throw SupportError("time series '" + id_ + "' is undefined at t=" + std::to_string(t) +
                               " (support [" + std::to_string(start_) + ", " +
                               std::to_string(end_index()) + "])");
        }
        return values_[static_cast<std::size_t>(t - start_)];
    }

    /// Contiguous view of [first, last]; throws SupportError if not covered.
    std::span<const double> window(Index first, Index last) const {
        require(first, last);
        return std::span<const double>(values_).subspan(static_cast<std::size_t>(first - start_),
                                                        static_cast<std::size_t>(last - first + 1));
    }

    void require(Index first, Index last) const {
        if (!covers(first, last)) {
            throw SupportError("time series '" + id_ + "' does not cover [" + std::to_string(first) +
                               ", " + std::to_string(last) + "] (support [" + std::to_string(start_) +
                               ", " + std::to_string(end_index()) + "])");
        }
    }

    TimeSeries with_id(std::string id) const { return TimeSeries(start_, values_, std::move(id)); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    Index start_;
    std::vector<double> values_;
    std::string id_;
};

enum class Label : int { positive = 1, negative = -1 };

inline int to_int(Label l) noexcept { return static_cast<int>(l); }

inline Label label_from_int(int v) {
    if (v == 1) return Label::positive;
    if (v == -1) return Label::negative;
    throw ParamError("label must be +1 or -1, got " + std::to_string(v));
}

inline Label opposite(Label l) noexcept {
    return l == Label::positive ? Label::negative : Label::positive;
}

/// Which latent source generated an example and with what shift.
struct Provenance {
    int source_index = 0;
    int shift = 0;
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Training sets R+ and R-. Provenance vectors are either empty (unknown)
/// or parallel to their class.
struct LabeledDataset {
    std::vector<TimeSeries> positives;
    std::vector<TimeSeries> negatives;
    std::vector<Provenance> positive_provenance;
    std::vector<Provenance> negative_provenance;

    std::size_t size() const noexcept { return positives.size() + negatives.size(); }

    bool has_provenance() const noexcept {
        return positive_provenance.size() == positives.size() &&
               negative_provenance.size() == negatives.size();
    }

    const std::vector<TimeSeries>& of(Label l) const noexcept {
        return l == Label::positive ? positives : negatives;
    }

    void add(TimeSeries series, Label label, std::optional<Provenance> prov = std::nullopt) {
        auto& bucket = label == Label::positive ? positives : negatives;
        auto& provs = label == Label::positive ? positive_provenance : negative_provenance;
        bucket.push_back(std::move(series));
        if (prov) provs.push_back(*prov);
    }

    void require_both_classes() const {
        if (positives.empty()) throw ParamError("dataset has no positive examples");
        if (negatives.empty()) throw ParamError("dataset has no negative examples");
    }

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

enum class ShiftMode { min, sum };

struct VotingParams {
    double gamma = 1.0;
    double theta = 1.0;
    int T = 1;
    int delta_max = 0;
    ShiftMode shift_mode = ShiftMode::min;
    /// Compare against every T-length chunk of each training series instead
    /// of the symmetric range [-delta_max, delta_max].
    bool full_range = false;

    void validate() const {
        if (!(gamma >= 0.0)) throw ParamError("gamma must be >= 0");
        if (!(theta > 0.0)) throw ParamError("theta must be > 0");
        if (T < 1) throw ParamError("T must be >= 1");
        if (delta_max < 0) throw ParamError("delta_max must be >= 0");
    }
};

/// Inclusive range of integer shifts.
struct ShiftRange {
    int lo = 0;
    int hi = 0;

    static ShiftRange symmetric(int delta_max) { return {-delta_max, delta_max}; }
    static ShiftRange nonnegative(int delta_max) { return {0, delta_max}; }

    /// Every shift that keeps [1+d, T+d] inside the support of r.
    static ShiftRange all_chunks(const TimeSeries& r, int T) {
        const auto lo = r.start_index() - 1;
        const auto hi = r.end_index() - T;
        if (hi < lo) {
            throw SupportError("time series '" + r.id() + "' is shorter than T=" + std::to_string(T));
        }
        return {static_cast<int>(lo), static_cast<int>(hi)};
    }

    std::size_t count() const noexcept { return static_cast<std::size_t>(hi - lo + 1); }
};

/// (q * delta)(t) = q(t + delta): the series advanced by delta steps.
inline TimeSeries advance(const TimeSeries& q, Index delta) {
    auto vals = q.values();
    return TimeSeries(q.start_index() - delta, std::vector<double>(vals.begin(), vals.end()), q.id());
}

namespace detail {

inline double sq_dist(const double* a, const double* b, int T) noexcept {
    double acc = 0.0;
    for (int t = 0; t < T; ++t) {
        const double d = a[t] - b[t];
        acc += d * d;
    }
    return acc;
}

inline void check_T(int T) {
    if (T < 1) throw ParamError("T must be >= 1");
}

} // namespace detail

/// Sum_{t=1..T} (r(t+delta) - s(t))^2. No padding: both windows must be defined.
inline double window_sq_dist(const TimeSeries& r, const TimeSeries& s, Index delta, int T) {
    detail::check_T(T);
    auto rw = r.window(1 + delta, T + delta);
    auto sw = s.window(1, T);
    return detail::sq_dist(rw.data(), sw.data(), T);
}

/// Windowed squared distance for every shift in `range`, in ascending order.
inline std::vector<double> shift_distances(const TimeSeries& r, const TimeSeries& s, int T,
                                           ShiftRange range) {
    detail::check_T(T);
    auto rw = r.window(1 + range.lo, T + range.hi);
    auto sw = s.window(1, T);
    std::vector<double> out(range.count());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = detail::sq_dist(rw.data() + k, sw.data(), T);
    }
    return out;
}

struct ShiftMatch {
    double distance = 0.0;
    int shift = 0;
};

/// Minimum over `range` of the windowed distance; the first minimizer in
/// ascending shift order wins ties.
inline ShiftMatch best_shift(const TimeSeries& r, const TimeSeries& s, int T, ShiftRange range) {
    detail::check_T(T);
    auto rw = r.window(1 + range.lo, T + range.hi);
    auto sw = s.window(1, T);
    ShiftMatch best{std::numeric_limits<double>::infinity(), range.lo};
    for (int d = range.lo; d <= range.hi; ++d) {
        const double v = detail::sq_dist(rw.data() + (d - range.lo), sw.data(), T);
        if (v < best.distance) best = {v, d};
    }
    return best;
}

/// d^(T)(r, s): shift-minimized squared Euclidean distance over
/// {-delta_max..delta_max}. r must be defined on [1-delta_max, T+delta_max].
inline ShiftMatch shift_min_distance(const TimeSeries& r, const TimeSeries& s, int T, int delta_max) {
    if (delta_max < 0) throw ParamError("delta_max must be >= 0");
    return best_shift(r, s, T, ShiftRange::symmetric(delta_max));
}

} // namespace lsm

#endif
