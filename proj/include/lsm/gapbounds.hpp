#ifndef LSM_GAPBOUNDS_HPP
#define LSM_GAPBOUNDS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lsm/core.hpp"
#include "lsm/model.hpp"

namespace lsm {

/// G^(T)(R+, R-, delta_max): smallest windowed distance between a shifted
/// positive and a shifted negative example. Each series is read on
/// [1 - delta_max, T + delta_max].
///
/// With `cutoff` set, a candidate's partial sum is abandoned once it exceeds
/// the best value so far. Any candidate that can still tie or win is summed in
/// full and in the same order, so the result is bit-identical either way.
inline double gap(const LabeledDataset& data, int T, int delta_max, bool cutoff = false) {
    data.require_both_classes();
    if (T < 1) throw ParamError("T must be >= 1");
    if (delta_max < 0) throw ParamError("delta_max must be >= 0");
    const Index first = 1 - delta_max;
    const Index last = T + delta_max;
    const int width = 2 * delta_max + 1;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& rp : data.positives) {
        const double* a = rp.window(first, last).data();
        for (const auto& rn : data.negatives) {
            const double* b = rn.window(first, last).data();
            for (int dp = 0; dp < width; ++dp) {
                for (int dn = 0; dn < width; ++dn) {
                    double acc = 0.0;
                    int t = 0;
                    for (; t < T; ++t) {
                        const double d = a[dp + t] - b[dn + t];
                        acc += d * d;
                        if (cutoff && acc > best) break;
                    }
                    if (t == T && acc < best) best = acc;
                }
            }
        }
    }
    return best;
}

/// G^(T)*: smallest squared distance between two distinct true sources over
/// [1, T], labels ignored.
inline double gap_star(const LatentSourceModel& model, int T) {
    if (model.m() < 2) throw ParamError("gap_star needs at least two sources");
    if (T < 1) throw ParamError("T must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.m(); ++i) {
        const double* a = model.sources[i].series.window(1, T).data();
        for (std::size_t j = i + 1; j < model.m(); ++j) {
            const double* b = model.sources[j].series.window(1, T).data();
            best = std::min(best, detail::sq_dist(a, b, T));
        }
    }
    return best;
}

struct BoundInputs {
    int m = 2;
    int m_plus = 1;
    int m_minus = 1;
    double n = 1;
    double beta = 2.0;
    double sigma = 1.0;
    double gamma = 0.125;
    double theta = 1.0;
    int delta_max = 0;
    double gap = 0.0;
};

namespace detail {

/// theta m+/m + m-/(theta m), written so that theta = 1 gives exactly 1.
inline double class_balance(const BoundInputs& in) {
    return (in.theta * in.theta * in.m_plus + in.m_minus) / (in.theta * in.m);
}

} // namespace detail

/// Misclassification bound for generalized weighted majority voting:
///   (theta m+/m + m-/(theta m)) (2 dmax + 1) n exp(-(gamma - 4 sigma^2 gamma^2) G) + m^(1 - beta).
/// Returned unclamped; values >= 1 are vacuous.
///
/// The exponent rate is evaluated as (1 - (1 - 8 sigma^2 gamma)^2) / (16 sigma^2),
/// which is algebraically identical and reduces to the nearest-neighbor rate
/// exactly at gamma = 1/(8 sigma^2).
inline double wmv_bound(const BoundInputs& in) {
    if (!(in.beta > 1.0)) throw ParamError("beta must be > 1");
    const double s2 = in.sigma * in.sigma;
    const double u = 1.0 - 8.0 * s2 * in.gamma;
    const double shape = 1.0 - u * u;
    const double prefactor = detail::class_balance(in) * (2.0 * in.delta_max + 1.0) * in.n;
    return prefactor * std::exp(-(shape * in.gap) / (16.0 * s2)) + std::pow(static_cast<double>(in.m), 1.0 - in.beta);
}

/// Nearest-neighbor bound: (2 dmax + 1) n exp(-G / (16 sigma^2)) + m^(1 - beta).
inline double nn_bound(const BoundInputs& in) {
    if (!(in.beta > 1.0)) throw ParamError("beta must be > 1");
    const double s2 = in.sigma * in.sigma;
    const double prefactor = (2.0 * in.delta_max + 1.0) * in.n;
    return prefactor * std::exp(-in.gap / (16.0 * s2)) + std::pow(static_cast<double>(in.m), 1.0 - in.beta);
}

inline bool is_vacuous(double bound) noexcept { return !(bound < 1.0); }

/// Smallest training gap for which the voting bound drops to delta, with the
/// coverage term budgeted at delta/2.
inline double required_gap(double theta, int m_plus, int m_minus, int m, int delta_max, double n,
                           double delta, double gamma, double sigma) {
    const double rate = gamma - 4.0 * sigma * sigma * gamma * gamma;
    if (!(rate > 0.0)) {
        throw ParamError("required_gap needs 0 < gamma < 1/(4 sigma^2)");
    }
    if (!(delta > 0.0)) throw ParamError("delta must be > 0");
    BoundInputs in;
    in.theta = theta;
    in.m_plus = m_plus;
    in.m_minus = m_minus;
    in.m = m;
    const double num = std::log(detail::class_balance(in)) + std::log(2.0 * delta_max + 1.0) + std::log(n) +
                       std::log(2.0 / delta);
    return num / rate;
}

struct Condition {
    bool holds = false;
    double value = 0.0;
    double threshold = 0.0;
};

/// Sufficient conditions for correct classification in the Gaussian,
/// shift-free setting.
struct GaussianConditions {
    Condition training_size; // n > m log(4m/delta)
    Condition separation;    // G* >= 4 sigma^2 log(4 n^2 / delta)
    Condition horizon;       // T >= (12 + 8 sqrt 2) log(4 n^2 / delta)

    bool all() const noexcept { return training_size.holds && separation.holds && horizon.holds; }
};

inline GaussianConditions gaussian_conditions(double n, int m, double sigma, double delta, double g_star, double T) {
    if (!(delta > 0.0)) throw ParamError("delta must be > 0");
    const double log_term = std::log(4.0 * n * n / delta);
    GaussianConditions out;
    out.training_size.value = n;
    out.training_size.threshold = m * std::log(4.0 * m / delta);
    out.training_size.holds = n > out.training_size.threshold;
    out.separation.value = g_star;
    out.separation.threshold = 4.0 * sigma * sigma * log_term;
    out.separation.holds = g_star >= out.separation.threshold;
    out.horizon.value = T;
    out.horizon.threshold = (12.0 + 8.0 * std::sqrt(2.0)) * log_term;
    out.horizon.holds = T >= out.horizon.threshold;
    return out;
}

} // namespace lsm

#endif
