#ifndef LSM_CLI_COMMANDS_HPP
#define LSM_CLI_COMMANDS_HPP

#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "lsm/classify.hpp"
#include "lsm/cli/config.hpp"
#include "lsm/cli/io.hpp"
#include "lsm/eval.hpp"
#include "lsm/gapbounds.hpp"
#include "lsm/pipeline.hpp"
#include "lsm/synth.hpp"

namespace lsm::cli {

using io::json;
namespace fs = std::filesystem;

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2, kNumeric = 3 };

namespace detail {

inline json header(const RunConfig& cfg, const std::string& command) {
    json j;
    j["schema_version"] = io::kSchemaVersion;
    j["command"] = command;
    j["seed"] = cfg.seed();
    j["config_hash"] = io::fnv1a_hex(cfg.canonical());
    return j;
}

inline json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : cfg.values()) {
        if (k != "output_dir") j[k] = v;
    }
    return j;
}

inline const std::string& require_input(const RunConfig& cfg, const std::string& key) {
    const auto& path = cfg.text(key);
    if (path.empty()) throw ConfigError(key + ": required by this command");
    return path;
}

inline NoiseSpec noise_from(const RunConfig& cfg) {
    return {cfg.text("noise.family") == "uniform" ? NoiseFamily::uniform : NoiseFamily::gaussian,
            cfg.real("noise.sigma")};
}

inline VotingParams voting_from(const RunConfig& cfg) {
    VotingParams p;
    p.gamma = cfg.real("voting.gamma");
    p.theta = cfg.real("voting.theta");
    p.T = cfg.int32("voting.T");
    p.delta_max = cfg.int32("voting.delta_max");
    p.shift_mode = cfg.text("voting.shift_mode") == "sum" ? ShiftMode::sum : ShiftMode::min;
    return p;
}

inline PipelineParams pipeline_from(const RunConfig& cfg) {
    return {cfg.real("pipeline.alpha"), cfg.int32("pipeline.t_smooth"), cfg.real("pipeline.log_floor")};
}

inline json outcome_json(const ClassificationOutcome& o) {
    json j;
    j["label"] = to_int(o.label);
    j["log_lambda"] = io::number(o.log_lambda);
    j["log_votes_positive"] = io::number(o.log_votes_positive);
    j["log_votes_negative"] = io::number(o.log_votes_negative);
    j["nearest"] = {{"id", o.nearest.id},
                    {"label", to_int(o.nearest.label)},
                    {"distance", io::number(o.nearest.distance)},
                    {"shift", o.nearest.shift}};
    return j;
}

inline std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    for (const auto& c : cells) {
        if (!row.empty()) row += ',';
        row += c;
    }
    return row + "\n";
}

} // namespace detail

/// Generator settings for on-disk datasets: sources on
/// [1 - dmax, T_max + 2 dmax], observations on [1 - dmax, T_max + dmax].
inline GeneratorConfig generator_from(const RunConfig& cfg) {
    GeneratorConfig g;
    g.m = cfg.int32("generator.m");
    g.delta_max = cfg.int32("generator.delta_max");
    g.start_index = 1 - g.delta_max;
    g.series_length = cfg.int32("generator.T_max") + 3 * g.delta_max;
    g.amplitude_variance = cfg.real("generator.amplitude_variance");
    g.smoothing_scale = cfg.real("generator.smoothing_scale");
    g.noise = detail::noise_from(cfg);
    g.seed = RngStream(cfg.seed()).derive(0).seed();
    return g;
}

inline std::size_t training_size_from(const RunConfig& cfg) {
    const auto n = cfg.integer("data.n");
    if (n > 0) return static_cast<std::size_t>(n);
    return std::max<std::size_t>(1, training_size(cfg.real("data.beta"), static_cast<std::size_t>(cfg.int32("generator.m"))));
}

/// Writes sources.jsonl, train.jsonl, test.jsonl and manifest.json.
inline void cmd_generate(const RunConfig& cfg, std::ostream& out) {
    const auto model = make_latent_sources(generator_from(cfg));
    const RngStream root(cfg.seed());
    const std::size_t n = training_size_from(cfg);
    const auto train = sample_dataset(model, n, root.derive(1), "train");
    const auto test = sample_many(model, static_cast<std::size_t>(cfg.integer("data.test_size")), root.derive(2), "test");

    const fs::path dir = cfg.output_dir();
    io::write_jsonl(dir / "sources.jsonl", io::source_records(model));
    io::write_jsonl(dir / "train.jsonl", io::dataset_records(train));
    std::vector<io::SeriesRecord> test_records;
    for (const auto& s : test) test_records.push_back({s.series, s.label, {}, {}, s.provenance});
    io::write_jsonl(dir / "test.jsonl", test_records);

    json manifest = detail::header(cfg, "generate");
    manifest["m"] = model.m();
    manifest["m_plus"] = model.count(Label::positive);
    manifest["m_minus"] = model.count(Label::negative);
    manifest["delta_max"] = model.delta_max;
    manifest["noise"] = {{"family", cfg.text("noise.family")}, {"sigma", model.noise.sigma}};
    manifest["window_start"] = model.window_start;
    manifest["window_length"] = model.window_length;
    manifest["n_train"] = train.size();
    manifest["n_train_positive"] = train.positives.size();
    manifest["n_train_negative"] = train.negatives.size();
    manifest["n_test"] = test.size();
    manifest["files"] = {"sources.jsonl", "train.jsonl", "test.jsonl"};
    manifest["config"] = detail::config_json(cfg);
    io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    out << json{{"output_dir", dir.string()}, {"n_train", train.size()}, {"n_test", test.size()}}.dump() << "\n";
}

/// Classifies every series of input.series; one JSON record per line.
inline void cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const auto method = cfg.text("classify.method");
    const auto params = detail::voting_from(cfg);
    const auto queries = io::read_jsonl(detail::require_input(cfg, "input.series"));

    LabeledDataset train;
    LatentSourceModel model;
    if (method == "map") {
        model.sources = io::read_sources(detail::require_input(cfg, "input.sources"));
        model.delta_max = params.delta_max;
        model.require_both_labels();
    } else {
        const auto& path = detail::require_input(cfg, "input.train");
        train = io::read_dataset(path);
        if (train.positives.empty()) throw ParamError(path + ": training data has no positive examples");
        if (train.negatives.empty()) throw ParamError(path + ": training data has no negative examples");
    }

    std::string lines;
    for (const auto& q : queries) {
        ClassificationOutcome o;
        if (method == "wmv") {
            o = classify_gwmv(q.series, train, params);
        } else if (method == "nn") {
            o = classify_knn(q.series, train, params, 1);
        } else if (method == "knn") {
            o = classify_knn(q.series, train, params, static_cast<std::size_t>(cfg.integer("classify.k")));
        } else {
            o = classify_map(q.series, model, params);
        }
        json j;
        j["schema_version"] = io::kSchemaVersion;
        j["id"] = q.series.id();
        j["method"] = method;
        j.update(detail::outcome_json(o));
        if (q.label) j["truth"] = to_int(*q.label);
        lines += j.dump() + "\n";
    }
    io::write_text(cfg.output_dir() / "classify.jsonl", lines);
    out << lines;
}

/// Runs the rate pipeline on input.rates; writes every stage.
inline void cmd_preprocess(const RunConfig& cfg, std::ostream& out) {
    const auto params = detail::pipeline_from(cfg);
    const auto rates = io::read_rates(detail::require_input(cfg, "input.rates"), cfg.real("pipeline.bucket_width_minutes"));

    std::vector<io::SeriesRecord> records;
    std::string csv = detail::csv_row({"topic_id", "t", "rho", "rho_b", "rho_bs", "rho_bsc", "rho_bscl"});
    for (const auto& rs : rates) {
        const auto b = baseline_normalize(rs);
        const auto bs = spike_emphasize(b, params.alpha);
        const auto bsc = smooth(bs, params.t_smooth);
        const auto bscl = log_transform(bsc, params.log_floor);
        for (std::size_t t = 0; t < rs.counts.size(); ++t) {
            csv += detail::csv_row({rs.topic_id, std::to_string(t + 1), io::fmt_double(rs.counts[t]),
                                    io::fmt_double(b.values()[t]), io::fmt_double(bs.values()[t]),
                                    io::fmt_double(bsc.values()[t]), io::fmt_double(bscl.values()[t])});
        }
        std::optional<Label> label;
        if (rs.onset_index) label = Label::positive;
        records.push_back({bscl, label, rs.onset_index, rs.bucket_width_minutes, {}});
    }
    const fs::path dir = cfg.output_dir();
    io::write_jsonl(dir / "preprocessed.jsonl", records);
    io::write_text(dir / "preprocessed.csv", csv);

    json summary = detail::header(cfg, "preprocess");
    summary["series"] = records.size();
    summary["files"] = {"preprocessed.jsonl", "preprocessed.csv"};
    io::write_text(dir / "preprocess.json", summary.dump(2) + "\n");
    out << summary.dump() << "\n";
}

/// Training gap of input.train, plus source separation when input.sources is set.
inline void cmd_gap(const RunConfig& cfg, std::ostream& out) {
    const int T = cfg.int32("voting.T");
    const int dmax = cfg.int32("voting.delta_max");
    const auto train = io::read_dataset(detail::require_input(cfg, "input.train"));
    json j = detail::header(cfg, "gap");
    j["T"] = T;
    j["delta_max"] = dmax;
    j["n_positive"] = train.positives.size();
    j["n_negative"] = train.negatives.size();
    const double g = gap(train, T, dmax, true);
    j["gap"] = g;
    std::string csv = detail::csv_row({"T", "delta_max", "gap", "gap_star"});
    std::string gs;
    if (!cfg.text("input.sources").empty()) {
        LatentSourceModel model;
        model.sources = io::read_sources(cfg.text("input.sources"));
        const double g_star = gap_star(model, T);
        j["gap_star"] = g_star;
        gs = io::fmt_double(g_star);
    }
    csv += detail::csv_row({std::to_string(T), std::to_string(dmax), io::fmt_double(g), gs});
    const fs::path dir = cfg.output_dir();
    io::write_text(dir / "gap.json", j.dump(2) + "\n");
    io::write_text(dir / "gap.csv", csv);
    out << j.dump() << "\n";
}

inline BoundInputs bound_inputs_from(const RunConfig& cfg) {
    BoundInputs in;
    in.m = cfg.int32("bounds.m");
    in.m_plus = cfg.int32("bounds.m_plus");
    in.m_minus = cfg.int32("bounds.m_minus");
    in.n = cfg.real("bounds.n");
    in.beta = cfg.real("bounds.beta");
    in.sigma = cfg.real("bounds.sigma");
    in.gamma = cfg.real("bounds.gamma");
    in.theta = cfg.real("bounds.theta");
    in.delta_max = cfg.int32("bounds.delta_max");
    in.gap = cfg.real("bounds.gap");
    if (in.m_plus + in.m_minus != in.m) throw ConfigError("bounds.m: must equal bounds.m_plus + bounds.m_minus");
    return in;
}

/// Error-bound values and side conditions for the bounds.* inputs.
inline void cmd_bounds(const RunConfig& cfg, std::ostream& out) {
    const auto in = bound_inputs_from(cfg);
    const double delta = cfg.real("bounds.delta");
    const double wmv = wmv_bound(in);
    const double nn = nn_bound(in);

    json j = detail::header(cfg, "bounds");
    j["wmv_bound"] = io::number(wmv);
    j["wmv_vacuous"] = is_vacuous(wmv);
    j["nn_bound"] = io::number(nn);
    j["nn_vacuous"] = is_vacuous(nn);
    j["delta"] = delta;
    try {
        j["required_gap"] = io::number(
            required_gap(in.theta, in.m_plus, in.m_minus, in.m, in.delta_max, in.n, delta, in.gamma, in.sigma));
        j["gap_condition_holds"] = in.gap >= j["required_gap"].get<double>();
    } catch (const ParamError& e) {
        j["required_gap"] = nullptr;
        j["required_gap_error"] = e.what();
    }
    const auto gc = gaussian_conditions(in.n, in.m, in.sigma, delta, cfg.real("bounds.g_star"), cfg.real("bounds.T"));
    auto cond = [](const Condition& c) {
        return json{{"holds", c.holds}, {"value", io::number(c.value)}, {"threshold", io::number(c.threshold)}};
    };
    j["gaussian_conditions"] = {{"training_size", cond(gc.training_size)},
                                {"separation", cond(gc.separation)},
                                {"horizon", cond(gc.horizon)},
                                {"all", gc.all()}};

    std::string csv = detail::csv_row({"quantity", "value", "threshold", "holds"});
    csv += detail::csv_row({"wmv_bound", io::fmt_double(wmv), "1", is_vacuous(wmv) ? "false" : "true"});
    csv += detail::csv_row({"nn_bound", io::fmt_double(nn), "1", is_vacuous(nn) ? "false" : "true"});
    for (const auto& [name, c] : {std::pair{"training_size", gc.training_size}, std::pair{"separation", gc.separation},
                                  std::pair{"horizon", gc.horizon}}) {
        csv += detail::csv_row({name, io::fmt_double(c.value), io::fmt_double(c.threshold), c.holds ? "true" : "false"});
    }
    const fs::path dir = cfg.output_dir();
    io::write_text(dir / "bounds.json", j.dump(2) + "\n");
    io::write_text(dir / "bounds.csv", csv);
    out << j.dump() << "\n";
}

inline ExperimentConfig experiment_from(const RunConfig& cfg) {
    ExperimentConfig e;
    e.model_cfg = generator_from(cfg);
    e.beta = cfg.real("data.beta");
    e.gamma = cfg.real("voting.gamma");
    e.theta = cfg.real("voting.theta");
    e.delta_max = cfg.int32("generator.delta_max");
    e.T_max = cfg.int32("generator.T_max");
    e.T_grid = cfg.int_list("experiment.T_grid");
    e.beta_grid = cfg.real_list("experiment.beta_grid");
    e.beta_T = cfg.int32("experiment.beta_T");
    e.test_size = cfg.int32("data.test_size");
    e.trials = cfg.int32("experiment.trials");
    e.seed = cfg.seed();
    if (cfg.real("experiment.map_gamma") > 0.0) e.map_gamma = cfg.real("experiment.map_gamma");
    e.validate();
    return e;
}

inline json curves_json(const ErrorCurves& c) {
    json j;
    j["axis"] = c.axis;
    j["x"] = c.x;
    for (Classifier k : kClassifiers) {
        const auto& s = c.of(k);
        j[to_string(k)] = {{"mean", s.mean}, {"stddev", s.stddev}, {"per_trial", s.per_trial}};
    }
    return j;
}

inline std::string curves_csv(const ErrorCurves& c) {
    std::string csv = detail::csv_row({c.axis, "classifier", "mean_error", "stddev"});
    for (std::size_t p = 0; p < c.x.size(); ++p) {
        for (Classifier k : kClassifiers) {
            csv += detail::csv_row({io::fmt_double(c.x[p]), to_string(k), io::fmt_double(c.of(k).mean[p]),
                                    io::fmt_double(c.of(k).stddev[p])});
        }
    }
    return csv;
}

/// Synthetic error curves versus T and/or beta.
inline void cmd_experiment(const RunConfig& cfg, std::ostream& out) {
    const auto e = experiment_from(cfg);
    const auto& sweeps = cfg.text("experiment.sweeps");
    const fs::path dir = cfg.output_dir();
    json j = detail::header(cfg, "experiment");
    j["n_train"] = training_size(e.beta, static_cast<std::size_t>(e.model_cfg.m));
    j["map_gamma"] = e.effective_map_gamma();
    if (sweeps.find('T') != std::string::npos) {
        const auto c = error_vs_T(e);
        j["error_vs_T"] = curves_json(c);
        io::write_text(dir / "experiment_T.csv", curves_csv(c));
    }
    if (sweeps.find("beta") != std::string::npos) {
        const auto c = error_vs_beta(e);
        j["error_vs_beta"] = curves_json(c);
        io::write_text(dir / "experiment_beta.csv", curves_csv(c));
    }
    j["config"] = detail::config_json(cfg);
    io::write_text(dir / "experiment.json", j.dump(2) + "\n");
    json brief = detail::header(cfg, "experiment");
    for (const char* key : {"error_vs_T", "error_vs_beta"}) {
        if (!j.contains(key)) continue;
        json b;
        b["x"] = j[key]["x"];
        for (Classifier k : kClassifiers) b[to_string(k)] = j[key][to_string(k)]["mean"];
        brief[key] = b;
    }
    out << brief.dump() << "\n";
}

inline DetectionConfig detection_from(const RunConfig& cfg) {
    DetectionConfig d;
    d.h_hours = cfg.real("detect.h_hours");
    d.window_hours = cfg.real("detect.window_hours");
    d.T = cfg.int32("detect.T");
    d.gamma = cfg.real("detect.gamma");
    d.theta = cfg.real("detect.theta");
    d.bucket_width_minutes = cfg.real("pipeline.bucket_width_minutes");
    d.pipeline = detail::pipeline_from(cfg);
    return d;
}

inline std::vector<RateSeries> corpus_from(const RunConfig& cfg) {
    if (!cfg.text("input.corpus").empty()) {
        return io::read_rates(cfg.text("input.corpus"), cfg.real("pipeline.bucket_width_minutes"));
    }
    TrendCorpusConfig c;
    c.n_trends = cfg.int32("corpus.n_trends");
    c.n_nontrends = cfg.int32("corpus.n_nontrends");
    c.length = cfg.int32("corpus.length");
    c.n_patterns = cfg.int32("corpus.patterns");
    c.onset_min = cfg.integer("corpus.onset_min");
    c.onset_max = cfg.integer("corpus.onset_max");
    c.bucket_width_minutes = cfg.real("pipeline.bucket_width_minutes");
    c.seed = RngStream(cfg.seed()).derive(10).seed();
    return make_trend_corpus(c);
}

inline json summary_json(const DetectionSummary& s) {
    return {{"trends", s.trends},
            {"nontrends", s.nontrends},
            {"tpr", s.tpr},
            {"fpr", s.fpr},
            {"early_fraction_detected", s.early_fraction_detected},
            {"early_fraction_all", s.early_fraction_all},
            {"mean_relative_minutes", io::number(s.mean_relative_minutes)},
            {"mean_early_hours", io::number(s.mean_early_hours)}};
}

/// Online detection at the detect.* point, then the ROC sweep over the grids
/// (an empty grid falls back to the single detect.* value).
inline void cmd_detect(const RunConfig& cfg, std::ostream& out) {
    const auto base = detection_from(cfg);
    const auto corpus = corpus_from(cfg);
    const std::uint64_t split_seed = RngStream(cfg.seed()).derive(11).seed();
    const auto run = run_detection(corpus, base, split_seed);

    std::string results;
    for (const auto& r : run.results) {
        json j;
        j["topic_id"] = r.topic_id;
        j["truth"] = to_int(r.truth);
        j["anchor"] = r.anchor;
        j["detected"] = r.detected;
        j["detection_index"] = r.detection_index ? json(*r.detection_index) : json(nullptr);
        j["relative_minutes"] = r.relative_minutes ? json(*r.relative_minutes) : json(nullptr);
        results += j.dump() + "\n";
    }

    SweepGrid grid;
    auto or_base = [](auto list, auto value) {
        using T = typename decltype(list)::value_type;
        return list.empty() ? std::vector<T>{static_cast<T>(value)} : list;
    };
    grid.gamma = or_base(cfg.real_list("detect.gamma_grid"), base.gamma);
    grid.T = or_base(cfg.int_list("detect.T_grid"), base.T);
    grid.t_smooth = or_base(cfg.int_list("detect.t_smooth_grid"), base.pipeline.t_smooth);
    grid.h_hours = or_base(cfg.real_list("detect.h_grid"), base.h_hours);
    grid.theta = or_base(cfg.real_list("detect.theta_grid"), base.theta);
    const auto sweep = roc_sweep(corpus, base, grid, split_seed);

    std::string roc = detail::csv_row({"gamma", "T", "t_smooth", "h_hours", "theta", "fpr", "tpr",
                                       "early_fraction_detected", "early_fraction_all", "mean_relative_minutes",
                                       "mean_early_hours"});
    json points = json::array();
    for (const auto& p : sweep.points) {
        roc += detail::csv_row({io::fmt_double(p.params.gamma), std::to_string(p.params.T),
                                std::to_string(p.params.pipeline.t_smooth), io::fmt_double(p.params.h_hours),
                                io::fmt_double(p.params.theta), io::fmt_double(p.summary.fpr),
                                io::fmt_double(p.summary.tpr), io::fmt_double(p.summary.early_fraction_detected),
                                io::fmt_double(p.summary.early_fraction_all),
                                io::fmt_double(p.summary.mean_relative_minutes),
                                io::fmt_double(p.summary.mean_early_hours)});
        json pj = summary_json(p.summary);
        pj["params"] = {{"gamma", p.params.gamma},
                        {"T", p.params.T},
                        {"t_smooth", p.params.pipeline.t_smooth},
                        {"h_hours", p.params.h_hours},
                        {"theta", p.params.theta}};
        points.push_back(pj);
    }
    std::string env = detail::csv_row({"fpr", "tpr"});
    json env_json = json::array();
    for (const auto& e : sweep.envelope) {
        env += detail::csv_row({io::fmt_double(e.fpr), io::fmt_double(e.tpr)});
        env_json.push_back({e.fpr, e.tpr});
    }

    json j = detail::header(cfg, "detect");
    j["topics"] = corpus.size();
    j["train_topics"] = run.train_ids.size();
    j["test_topics"] = run.test_ids.size();
    j["summary"] = summary_json(run.summary);
    j["sweep"] = points;
    j["envelope"] = env_json;
    j["config"] = detail::config_json(cfg);

    const fs::path dir = cfg.output_dir();
    io::write_text(dir / "detections.jsonl", results);
    io::write_text(dir / "roc.csv", roc);
    io::write_text(dir / "envelope.csv", env);
    io::write_text(dir / "detect.json", j.dump(2) + "\n");
    json brief = detail::header(cfg, "detect");
    brief["summary"] = j["summary"];
    brief["sweep_points"] = sweep.points.size();
    out << brief.dump() << "\n";
}

} // namespace lsm::cli

#endif
