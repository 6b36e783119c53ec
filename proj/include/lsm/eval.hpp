#ifndef LSM_EVAL_HPP
#define LSM_EVAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lsm/classify.hpp"
#include "lsm/core.hpp"
#include "lsm/detail/parallel.hpp"
#include "lsm/pipeline.hpp"
#include "lsm/synth.hpp"

namespace lsm {

// ---------------------------------------------------------------------------
// Synthetic error curves
// ---------------------------------------------------------------------------

enum class Classifier { wmv = 0, nn = 1, map = 2 };
inline constexpr std::array<Classifier, 3> kClassifiers{Classifier::wmv, Classifier::nn, Classifier::map};

inline const char* to_string(Classifier c) noexcept {
    switch (c) {
    case Classifier::wmv: return "wmv";
    case Classifier::nn: return "nn";
    case Classifier::map: return "map";
    }
    return "?";
}

struct ExperimentConfig {
    /// m, amplitude_variance, smoothing_scale and noise are used; the support
    /// and seed of each trial's sources are derived below.
    GeneratorConfig model_cfg;
    double beta = 8.0;
    double gamma = 0.125;
    double theta = 1.0;
    int delta_max = 10;
    /// Longest prefix any classifier will look at.
    int T_max = 100;
    std::vector<int> T_grid{5, 10, 20, 40, 60, 80, 100};
    std::vector<double> beta_grid{1, 2, 4, 8};
    /// Prefix length for the beta sweep.
    int beta_T = 100;
    int test_size = 200;
    int trials = 20;
    std::uint64_t seed = 1;
    /// Vote sharpness of the oracle MAP rule; defaults to 1/(2 sigma^2), the
    /// value matching Gaussian noise.
    std::optional<double> map_gamma;

    double effective_map_gamma() const {
        return map_gamma ? *map_gamma : 1.0 / (2.0 * model_cfg.noise.sigma * model_cfg.noise.sigma);
    }

    /// Sources live on [1 - dmax, T_max + 2 dmax]; observations on
    /// [1 - dmax, T_max + dmax], enough for every shift in {-dmax..dmax}.
    GeneratorConfig trial_generator(std::uint64_t trial_seed) const {
        GeneratorConfig g = model_cfg;
        g.delta_max = delta_max;
        g.start_index = 1 - delta_max;
        g.series_length = T_max + 3 * delta_max;
        g.seed = trial_seed;
        return g;
    }

    void validate() const {
        if (T_grid.empty() || beta_grid.empty()) throw ParamError("experiment grids must be non-empty");
        if (trials < 1) throw ParamError("experiment.trials must be >= 1");
        if (test_size < 1) throw ParamError("experiment.test_size must be >= 1");
        if (delta_max < 0) throw ParamError("delta_max must be >= 0");
        if (!(gamma >= 0.0)) throw ParamError("gamma must be >= 0");
        if (!(theta > 0.0)) throw ParamError("theta must be > 0");
        for (int T : T_grid) {
            if (T < 1 || T > T_max) throw ParamError("experiment.T_grid entries must lie in [1, T_max]");
        }
        if (beta_T < 1 || beta_T > T_max) throw ParamError("experiment.beta_T must lie in [1, T_max]");
        for (double b : beta_grid) {
            if (!(b > 0.0)) throw ParamError("experiment.beta_grid entries must be > 0");
        }
        if (!(beta > 0.0)) throw ParamError("experiment.beta must be > 0");
        trial_generator(seed).validate();
    }
};

struct CurveStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    /// per_trial[trial][point]
    std::vector<std::vector<double>> per_trial;
};

struct ErrorCurves {
    std::string axis; // "T" or "beta"
    std::vector<double> x;
    std::array<CurveStats, 3> curves;

    const CurveStats& of(Classifier c) const { return curves[static_cast<std::size_t>(c)]; }
};

namespace detail {

inline void summarize(CurveStats& stats, std::size_t points) {
    const std::size_t trials = stats.per_trial.size();
    stats.mean.assign(points, 0.0);
    stats.stddev.assign(points, 0.0);
    for (std::size_t p = 0; p < points; ++p) {
        double sum = 0.0;
        for (const auto& row : stats.per_trial) sum += row[p];
        const double mu = sum / static_cast<double>(trials);
        double ss = 0.0;
        for (const auto& row : stats.per_trial) ss += (row[p] - mu) * (row[p] - mu);
        stats.mean[p] = mu;
        stats.stddev[p] = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1)) : 0.0;
    }
}

/// Misclassification rates of WMV, 1-NN and (optionally) MAP on `test` at
/// prefix length T. A training set missing a class predicts its only class.
inline std::array<double, 3> error_rates(const LatentSourceModel& model, const LabeledDataset& train,
                                         const std::vector<Sample>& test, int T, const ExperimentConfig& cfg,
                                         bool with_map = true) {
    VotingParams vp;
    vp.gamma = cfg.gamma;
    vp.theta = cfg.theta;
    vp.T = T;
    vp.delta_max = cfg.delta_max;
    VotingParams mp = vp;
    mp.gamma = cfg.effective_map_gamma();
    mp.theta = 1.0;

    const bool both = !train.positives.empty() && !train.negatives.empty();
    const Label only = train.positives.empty() ? Label::negative : Label::positive;
    std::array<std::size_t, 3> wrong{};
    for (const auto& smp : test) {
        if (both) {
            const auto table = distance_table(smp.series, train, vp);
            wrong[0] += gwmv_from_table(table, train, vp).label != smp.label;
            wrong[1] += knn_from_table(table, train, vp, 1).label != smp.label;
        } else {
            wrong[0] += only != smp.label;
            wrong[1] += only != smp.label;
        }
        if (with_map) wrong[2] += classify_map(smp.series, model, mp).label != smp.label;
    }
    const double n = static_cast<double>(test.size());
    return {wrong[0] / n, wrong[1] / n, wrong[2] / n};
}

inline std::vector<double> map_error_curve(const LatentSourceModel& model, const std::vector<Sample>& test,
                                           const std::vector<int>& Ts, const ExperimentConfig& cfg) {
    VotingParams mp;
    mp.gamma = cfg.effective_map_gamma();
    mp.delta_max = cfg.delta_max;
    std::vector<double> out;
    for (int T : Ts) {
        mp.T = T;
        std::size_t wrong = 0;
        for (const auto& smp : test) wrong += classify_map(smp.series, model, mp).label != smp.label;
        out.push_back(static_cast<double>(wrong) / static_cast<double>(test.size()));
    }
    return out;
}

struct Trial {
    LatentSourceModel model;
    std::vector<Sample> test;
    RngStream stream;
};

inline Trial make_trial(const ExperimentConfig& cfg, std::size_t trial) {
    const RngStream stream = RngStream(cfg.seed).derive(trial);
    auto model = make_latent_sources(cfg.trial_generator(stream.derive(0).seed()));
    auto test = sample_many(model, static_cast<std::size_t>(cfg.test_size), stream.derive(2), "test");
    return {std::move(model), std::move(test), stream};
}

} // namespace detail

/// Error rate versus observed prefix length T, for weighted majority voting,
/// 1-NN and the oracle MAP rule. Every trial draws fresh sources, a training
/// set of ceil(beta m ln m) series and a fresh test set.
inline ErrorCurves error_vs_T(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t points = cfg.T_grid.size();
    std::vector<std::array<std::vector<double>, 3>> rows(trials);

    detail::parallel_for(trials, [&](std::size_t trial) {
        auto tr = detail::make_trial(cfg, trial);
        const auto train = sample_dataset(tr.model, training_size(cfg.beta, tr.model.m()), tr.stream.derive(1));
        for (auto& r : rows[trial]) r.resize(points);
        for (std::size_t p = 0; p < points; ++p) {
            const auto e = detail::error_rates(tr.model, train, tr.test, cfg.T_grid[p], cfg);
            for (std::size_t c = 0; c < 3; ++c) rows[trial][c][p] = e[c];
        }
    });

    ErrorCurves out;
    out.axis = "T";
    out.x.assign(cfg.T_grid.begin(), cfg.T_grid.end());
    for (std::size_t c = 0; c < 3; ++c) {
        for (auto& row : rows) out.curves[c].per_trial.push_back(std::move(row[c]));
        detail::summarize(out.curves[c], points);
    }
    return out;
}

/// Error rate at T = beta_T versus training-set multiplier beta. Within a
/// trial the sources and test set are shared by all beta values, so the MAP
/// curve is flat.
inline ErrorCurves error_vs_beta(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t points = cfg.beta_grid.size();
    std::vector<std::array<std::vector<double>, 3>> rows(trials);

    detail::parallel_for(trials, [&](std::size_t trial) {
        auto tr = detail::make_trial(cfg, trial);
        const double map_err = detail::map_error_curve(tr.model, tr.test, {cfg.beta_T}, cfg).front();
        for (auto& r : rows[trial]) r.resize(points);
        for (std::size_t p = 0; p < points; ++p) {
            const auto train = sample_dataset(tr.model, std::max<std::size_t>(1, training_size(cfg.beta_grid[p], tr.model.m())),
                                              tr.stream.derive(100 + p));
            const auto e = detail::error_rates(tr.model, train, tr.test, cfg.beta_T, cfg, false);
            rows[trial][0][p] = e[0];
            rows[trial][1][p] = e[1];
            rows[trial][2][p] = map_err;
        }
    });

    ErrorCurves out;
    out.axis = "beta";
    out.x = cfg.beta_grid;
    for (std::size_t c = 0; c < 3; ++c) {
        for (auto& row : rows) out.curves[c].per_trial.push_back(std::move(row[c]));
        detail::summarize(out.curves[c], points);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic trend corpus
// ---------------------------------------------------------------------------

/// Generator for labeled activity-count series. Trends follow one of a few
/// growth patterns (rise lead time, steepness, amplitude) that takes off
/// shortly before the onset bucket; non-trends hover around a topic-specific
/// base rate with occasional short bursts. Counts are Poisson draws.
struct TrendCorpusConfig {
    int n_trends = 200;
    int n_nontrends = 200;
    int length = 360;
    double bucket_width_minutes = 2.0;
    int n_patterns = 4;
    Index onset_min = 150;
    Index onset_max = 250;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_trends < 2 || n_nontrends < 2) throw ParamError("corpus needs at least two topics per class");
        if (length < 2) throw ParamError("corpus series length must be >= 2");
        if (n_patterns < 1) throw ParamError("corpus needs at least one pattern");
        if (onset_min < 1 || onset_max > length || onset_min > onset_max) {
            throw ParamError("corpus onset range must lie inside the series");
        }
        if (!(bucket_width_minutes > 0.0)) throw ParamError("bucket width must be > 0");
    }
};

inline std::vector<RateSeries> make_trend_corpus(const TrendCorpusConfig& cfg) {
    cfg.validate();
    const RngStream root(cfg.seed);

    struct Pattern {
        double lead, steepness, amplitude;
    };
    std::vector<Pattern> patterns;
    for (int k = 0; k < cfg.n_patterns; ++k) {
        auto r = root.derive(1'000'000 + static_cast<std::uint64_t>(k));
        patterns.push_back({r.uniform(15.0, 40.0), r.uniform(3.0, 10.0), r.uniform(4.0, 15.0)});
    }

    auto draw_counts = [](const std::vector<double>& rate, RngStream& r) {
        std::vector<double> counts(rate.size());
        for (std::size_t t = 0; t < rate.size(); ++t) {
            counts[t] = static_cast<double>(std::poisson_distribution<long>(rate[t])(r.engine()));
        }
        if (counts.front() == 0.0) counts.front() = 1.0;
        return counts;
    };

    std::vector<RateSeries> corpus;
    const std::size_t len = static_cast<std::size_t>(cfg.length);
    for (int i = 0; i < cfg.n_trends + cfg.n_nontrends; ++i) {
        auto r = root.derive(static_cast<std::uint64_t>(i));
        const bool trend = i < cfg.n_trends;
        std::vector<double> rate(len);
        RateSeries rs;
        rs.bucket_width_minutes = cfg.bucket_width_minutes;
        char id[32];
        if (trend) {
            std::snprintf(id, sizeof id, "trend-%04d", i);
            const auto& p = patterns[static_cast<std::size_t>(r.uniform_int(0, cfg.n_patterns - 1))];
            const Index onset = r.uniform_int(cfg.onset_min, cfg.onset_max);
            const double base = r.uniform(2.0, 10.0);
            const double lead = p.lead + r.uniform(-5.0, 5.0);
            for (std::size_t t = 0; t < len; ++t) {
                const double u = (static_cast<double>(t + 1) - static_cast<double>(onset) + lead) / p.steepness;
                rate[t] = base * (1.0 + p.amplitude / (1.0 + std::exp(-u)));
            }
            rs.onset_index = onset;
        } else {
            std::snprintf(id, sizeof id, "nontrend-%04d", i - cfg.n_trends);
            const double base = std::exp(r.uniform(std::log(2.0), std::log(200.0)));
            std::fill(rate.begin(), rate.end(), base);
            const auto bursts = std::poisson_distribution<int>(1.0)(r.engine());
            for (int b = 0; b < bursts; ++b) {
                const double centre = r.uniform(0.0, static_cast<double>(len));
                const double width = r.uniform(2.0, 8.0);
                const double height = r.uniform(0.5, 2.0) * base;
                for (std::size_t t = 0; t < len; ++t) {
                    const double z = (static_cast<double>(t) - centre) / width;
                    rate[t] += height * std::exp(-0.5 * z * z);
                }
            }
        }
        rs.topic_id = id;
        rs.counts = draw_counts(rate, r);
        corpus.push_back(std::move(rs));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Online detection
// ---------------------------------------------------------------------------

struct DetectionConfig {
    double h_hours = 1.0;
    /// Width of the detection region around the anchor; 0 means 2 h.
    double window_hours = 0.0;
    int T = 10;
    double gamma = 1.0;
    double theta = 1.0;
    double bucket_width_minutes = 2.0;
    PipelineParams pipeline{1.2, 20, 1e-12};

    double effective_window_hours() const { return window_hours > 0.0 ? window_hours : 2.0 * h_hours; }
    int slice_length() const { return buckets_for_hours(h_hours, bucket_width_minutes); }
    int half_window() const { return buckets_for_hours(effective_window_hours() / 2.0, bucket_width_minutes); }

    void validate() const {
        pipeline.validate();
        if (!(h_hours > 0.0)) throw ParamError("detect.h_hours must be > 0");
        if (window_hours < 0.0) throw ParamError("detect.window_hours must be >= 0");
        if (T < 1) throw ParamError("detect.T must be >= 1");
        if (T > slice_length()) throw ParamError("detect.T exceeds the h-hour training slice");
        if (T > 2 * half_window()) throw ParamError("detect.T exceeds the detection window");
        if (!(gamma >= 0.0)) throw ParamError("detect.gamma must be >= 0");
        if (!(theta > 0.0)) throw ParamError("detect.theta must be > 0");
        if (!(bucket_width_minutes > 0.0)) throw ParamError("bucket width must be > 0");
    }
};

struct DetectionResult {
    std::string topic_id;
    bool detected = false;
    std::optional<Index> detection_index;
    /// Minutes from the anchor to the end of the detecting window; negative is early.
    std::optional<double> relative_minutes;
    Label truth = Label::negative;
    Index anchor = 0;
};

/// Slides a T-bucket observation window, one bucket at a time, across the
/// region of 2 * half_window buckets centred on `anchor` and classifies each
/// position by weighted majority voting against every T-chunk of the
/// training slices. The first +1 verdict is the detection.
inline DetectionResult detect_online(const TimeSeries& series, const LabeledDataset& training,
                                     const DetectionConfig& cfg, Index anchor) {
    cfg.validate();
    training.require_both_classes();
    const Index half = cfg.half_window();
    const Index first = anchor - half + 1;
    const Index last = anchor + half;
    series.require(first, last);

    VotingParams vp;
    vp.gamma = cfg.gamma;
    vp.theta = cfg.theta;
    vp.T = cfg.T;
    vp.full_range = true;

    DetectionResult out;
    out.topic_id = series.id();
    out.anchor = anchor;
    for (Index end = first + cfg.T - 1; end <= last; ++end) {
        auto w = series.window(end - cfg.T + 1, end);
        const TimeSeries s(1, std::vector<double>(w.begin(), w.end()), series.id());
        if (classify_gwmv(s, training, vp).label == Label::positive) {
            out.detected = true;
            out.detection_index = end;
            out.relative_minutes = static_cast<double>(end - anchor) * cfg.bucket_width_minutes;
            break;
        }
    }
    return out;
}

struct DetectionSummary {
    std::size_t trends = 0;
    std::size_t nontrends = 0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t early = 0;
    double tpr = 0.0;
    double fpr = 0.0;
    /// Early detections over detected trends.
    double early_fraction_detected = 0.0;
    /// Early detections over all trends.
    double early_fraction_all = 0.0;
    /// Mean (detection - onset) in minutes over detected trends; NaN if none.
    double mean_relative_minutes = std::numeric_limits<double>::quiet_NaN();
    /// Mean lead in hours over early detections; NaN if none.
    double mean_early_hours = std::numeric_limits<double>::quiet_NaN();
};

struct DetectionRun {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::vector<DetectionResult> results;
    DetectionSummary summary;
};

inline DetectionSummary summarize_detections(const std::vector<DetectionResult>& results) {
    DetectionSummary s;
    double rel_sum = 0.0, early_sum = 0.0;
    for (const auto& r : results) {
        if (r.truth == Label::positive) {
            ++s.trends;
            if (r.detected) {
                ++s.true_positives;
                rel_sum += *r.relative_minutes;
                if (*r.relative_minutes < 0.0) {
                    ++s.early;
                    early_sum += -*r.relative_minutes / 60.0;
                }
            }
        } else {
            ++s.nontrends;
            s.false_positives += r.detected ? 1 : 0;
        }
    }
    auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    s.tpr = ratio(s.true_positives, s.trends);
    s.fpr = ratio(s.false_positives, s.nontrends);
    s.early_fraction_detected = ratio(s.early, s.true_positives);
    s.early_fraction_all = ratio(s.early, s.trends);
    if (s.true_positives > 0) s.mean_relative_minutes = rel_sum / static_cast<double>(s.true_positives);
    if (s.early > 0) s.mean_early_hours = early_sum / static_cast<double>(s.early);
    return s;
}

/// Splits trends and non-trends each into a training half and a test half,
/// builds h-hour training slices (pre-onset for trends, random for
/// non-trends), and runs online detection on every test topic. Non-trend
/// anchors are drawn uniformly among positions whose region fits.
inline DetectionRun run_detection(const std::vector<RateSeries>& corpus, const DetectionConfig& cfg,
                                  std::uint64_t seed) {
    cfg.validate();
    const RngStream root(seed);
    std::vector<std::size_t> trends, nontrends;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!seen.insert(corpus[i].topic_id).second) {
            throw ParamError("duplicate topic id '" + corpus[i].topic_id + "'");
        }
        (corpus[i].onset_index ? trends : nontrends).push_back(i);
    }
    if (trends.size() < 2 || nontrends.size() < 2) {
        throw ParamError("detection needs at least two trends and two non-trends");
    }
    {
        auto split_rng = root.derive(0);
        std::shuffle(trends.begin(), trends.end(), split_rng.engine());
        std::shuffle(nontrends.begin(), nontrends.end(), split_rng.engine());
    }

    const Index half = cfg.half_window();
    std::vector<TimeSeries> processed;
    processed.reserve(corpus.size());
    for (const auto& rs : corpus) processed.push_back(preprocess(rs, cfg.pipeline));

    DetectionRun run;
    LabeledDataset training;
    std::vector<std::pair<std::size_t, Index>> tests; // (corpus index, anchor)
    for (const auto* group : {&trends, &nontrends}) {
        const std::size_t n_train = group->size() / 2;
        for (std::size_t j = 0; j < group->size(); ++j) {
            const std::size_t idx = (*group)[j];
            const auto& rs = corpus[idx];
            const auto& series = processed[idx];
            if (j < n_train) {
                auto rng = root.derive(1).derive(idx);
                if (rs.onset_index) {
                    training.add(slice_training_window(series, *rs.onset_index, cfg.h_hours, cfg.bucket_width_minutes,
                                                       SliceMode::pre_onset, rng),
                                 Label::positive);
                } else {
                    training.add(slice_training_window(series, 0, cfg.h_hours, cfg.bucket_width_minutes,
                                                       SliceMode::random, rng),
                                 Label::negative);
                }
                run.train_ids.push_back(rs.topic_id);
            } else {
                Index anchor = 0;
                if (rs.onset_index) {
                    anchor = *rs.onset_index;
                } else {
                    const Index lo = series.start_index() + half - 1;
                    const Index hi = series.end_index() - half;
                    if (hi < lo) throw SupportError("series '" + rs.topic_id + "' is shorter than the detection window");
                    auto rng = root.derive(2).derive(idx);
                    anchor = rng.uniform_int(lo, hi);
                }
                tests.emplace_back(idx, anchor);
                run.test_ids.push_back(rs.topic_id);
            }
        }
    }

    std::set<std::string> train_set(run.train_ids.begin(), run.train_ids.end());
    for (const auto& id : run.test_ids) {
        if (train_set.count(id)) throw ParamError("topic '" + id + "' appears in both training and test halves");
    }

    run.results.resize(tests.size());
    detail::parallel_for(tests.size(), [&](std::size_t k) {
        const auto [idx, anchor] = tests[k];
        auto r = detect_online(processed[idx], training, cfg, anchor);
        r.truth = corpus[idx].truth();
        run.results[k] = std::move(r);
    });
    run.summary = summarize_detections(run.results);
    return run;
}

struct SweepGrid {
    std::vector<double> gamma{1.0};
    std::vector<int> T{10};
    std::vector<int> t_smooth{20};
    std::vector<double> h_hours{1.0};
    std::vector<double> theta{1.0};

    std::size_t size() const noexcept {
        return gamma.size() * T.size() * t_smooth.size() * h_hours.size() * theta.size();
    }
};

struct SweepPoint {
    DetectionConfig params;
    DetectionSummary summary;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<RocPoint> envelope;
};

/// Upper envelope of a ROC cloud: for each distinct FPR the best TPR reached
/// at that FPR or below, in ascending FPR order.
inline std::vector<RocPoint> roc_envelope(std::vector<RocPoint> cloud) {
    std::sort(cloud.begin(), cloud.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fpr != b.fpr ? a.fpr < b.fpr : a.tpr > b.tpr;
    });
    std::vector<RocPoint> env;
    double best = -1.0;
    for (const auto& p : cloud) {
        if (!env.empty() && env.back().fpr == p.fpr) continue;
        best = std::max(best, p.tpr);
        env.push_back({p.fpr, best});
    }
    return env;
}

/// Detection over the Cartesian product of the grids, all with the same
/// train/test split. Grid points whose T does not fit the slice are skipped.
inline SweepResult roc_sweep(const std::vector<RateSeries>& corpus, const DetectionConfig& base, const SweepGrid& grid,
                             std::uint64_t seed) {
    if (grid.size() == 0) throw ParamError("sweep grids must be non-empty");
    SweepResult out;
    for (int ts : grid.t_smooth) {
        for (double h : grid.h_hours) {
            for (int T : grid.T) {
                for (double g : grid.gamma) {
                    for (double th : grid.theta) {
                        DetectionConfig cfg = base;
                        cfg.pipeline.t_smooth = ts;
                        cfg.h_hours = h;
                        cfg.T = T;
                        cfg.gamma = g;
                        cfg.theta = th;
                        if (T > cfg.slice_length() || T > 2 * cfg.half_window()) continue;
                        out.points.push_back({cfg, run_detection(corpus, cfg, seed).summary});
                    }
                }
            }
        }
    }
    std::vector<RocPoint> cloud;
    for (const auto& p : out.points) cloud.push_back({p.summary.fpr, p.summary.tpr});
    out.envelope = roc_envelope(std::move(cloud));
    return out;
}

} // namespace lsm

#endif
