#ifndef LSM_CLI_CONFIG_HPP
#define LSM_CLI_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lsm/errors.hpp"

namespace lsm::cli {

enum class FieldType { integer, real, text, boolean, int_list, real_list };

struct FieldSpec {
    std::string key;
    FieldType type;
    std::string default_value;
    std::string help;
    /// Extra domain check on the parsed value; returns an error message or "".
    std::function<std::string(const std::string&)> check;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline bool parse_int(const std::string& s, long long& out) {
    try {
        std::size_t used = 0;
        out = std::stoll(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline bool parse_real(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string num_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::function<std::string(const std::string&)> at_least(double lo) {
    return [lo](const std::string& v) {
        double x = 0;
        parse_real(v, x);
        return x >= lo ? std::string{} : "must be >= " + num_text(lo);
    };
}

inline std::function<std::string(const std::string&)> greater_than(double lo) {
    return [lo](const std::string& v) {
        double x = 0;
        parse_real(v, x);
        return x > lo ? std::string{} : "must be > " + num_text(lo);
    };
}

inline std::function<std::string(const std::string&)> one_of(std::vector<std::string> options) {
    return [options](const std::string& v) {
        for (const auto& o : options) {
            if (o == v) return std::string{};
        }
        std::string msg = "must be one of";
        for (const auto& o : options) msg += " " + o;
        return msg;
    };
}

inline std::function<std::string(const std::string&)> list_at_least(double lo) {
    return [lo](const std::string& v) {
        for (const auto& item : split_list(v)) {
            double x = 0;
            if (!parse_real(item, x) || x < lo) return "entries must be >= " + num_text(lo);
        }
        return std::string{};
    };
}

} // namespace detail

/// Every key a run configuration may carry.
inline const std::vector<FieldSpec>& schema() {
    using namespace detail;
    using F = FieldType;
    static const std::vector<FieldSpec> fields = {
        {"seed", F::integer, "1", "root seed for every random draw", {}},
        {"output_dir", F::text, "", "output directory (default: $LSM_OUTPUT_DIR, else ./lsm_out)", {}},

        {"generator.m", F::integer, "10", "number of latent sources", at_least(2)},
        {"generator.T_max", F::integer, "100", "longest observed prefix the generated data must support", at_least(1)},
        {"generator.amplitude_variance", F::real, "100", "variance of raw source entries", greater_than(0)},
        {"generator.smoothing_scale", F::real, "30", "Gaussian smoothing scale for sources", greater_than(0)},
        {"generator.delta_max", F::integer, "10", "maximum time shift of generated series", at_least(0)},
        {"noise.family", F::text, "gaussian", "gaussian | uniform", one_of({"gaussian", "uniform"})},
        {"noise.sigma", F::real, "1", "sub-Gaussian noise parameter", at_least(0)},
        {"data.beta", F::real, "8", "training size multiplier: n = ceil(beta m ln m)", greater_than(0)},
        {"data.n", F::integer, "0", "explicit training size (0: derive from data.beta)", at_least(0)},
        {"data.test_size", F::integer, "200", "number of test series", at_least(1)},

        {"voting.gamma", F::real, "0.125", "vote sharpness", at_least(0)},
        {"voting.theta", F::real, "1", "class-ratio threshold", greater_than(0)},
        {"voting.T", F::integer, "100", "observed prefix length", at_least(1)},
        {"voting.delta_max", F::integer, "10", "maximum shift considered by classifiers", at_least(0)},
        {"voting.shift_mode", F::text, "min", "min | sum", one_of({"min", "sum"})},
        {"classify.method", F::text, "wmv", "wmv | nn | knn | map", one_of({"wmv", "nn", "knn", "map"})},
        {"classify.k", F::integer, "1", "neighbors for knn", at_least(1)},

        {"input.train", F::text, "", "labeled training series (JSONL)", {}},
        {"input.series", F::text, "", "series to classify (JSONL)", {}},
        {"input.sources", F::text, "", "latent sources (JSONL)", {}},
        {"input.rates", F::text, "", "raw rate series (JSONL or t,value CSV)", {}},
        {"input.corpus", F::text, "", "labeled rate corpus with onsets (JSONL); synthetic when empty", {}},

        {"pipeline.alpha", F::real, "1.2", "spike exponent", at_least(1)},
        {"pipeline.t_smooth", F::integer, "80", "smoothing window length", at_least(1)},
        {"pipeline.log_floor", F::real, "1e-12", "clamp applied before the log", greater_than(0)},
        {"pipeline.bucket_width_minutes", F::real, "2", "bucket width of rate series", greater_than(0)},

        {"experiment.T_grid", F::int_list, "5,10,20,40,60,80,100", "prefix lengths for the T sweep", list_at_least(1)},
        {"experiment.beta_grid", F::real_list, "1,2,4,8", "training multipliers for the beta sweep", list_at_least(0)},
        {"experiment.beta_T", F::integer, "100", "prefix length for the beta sweep", at_least(1)},
        {"experiment.trials", F::integer, "20", "independent repetitions", at_least(1)},
        {"experiment.map_gamma", F::real, "0", "MAP vote sharpness (0: 1/(2 sigma^2))", at_least(0)},
        {"experiment.sweeps", F::text, "T,beta", "which sweeps to run: T, beta or both", one_of({"T", "beta", "T,beta"})},

        {"bounds.m", F::integer, "4", "number of latent sources", at_least(1)},
        {"bounds.m_plus", F::integer, "2", "positive sources", at_least(0)},
        {"bounds.m_minus", F::integer, "2", "negative sources", at_least(0)},
        {"bounds.n", F::real, "10", "training size", greater_than(0)},
        {"bounds.beta", F::real, "2", "coverage exponent (> 1)", greater_than(1)},
        {"bounds.sigma", F::real, "1", "noise parameter", greater_than(0)},
        {"bounds.gamma", F::real, "0.125", "vote sharpness", at_least(0)},
        {"bounds.theta", F::real, "1", "class-ratio threshold", greater_than(0)},
        {"bounds.delta_max", F::integer, "0", "maximum shift", at_least(0)},
        {"bounds.gap", F::real, "32", "training gap G", at_least(0)},
        {"bounds.delta", F::real, "0.05", "error tolerance", greater_than(0)},
        {"bounds.g_star", F::real, "0", "source separation G*", at_least(0)},
        {"bounds.T", F::real, "0", "observed prefix length for the Gaussian conditions", at_least(0)},

        {"detect.h_hours", F::real, "1", "training slice length in hours", greater_than(0)},
        {"detect.window_hours", F::real, "0", "detection region width in hours (0: 2h)", at_least(0)},
        {"detect.T", F::integer, "10", "observation window length", at_least(1)},
        {"detect.gamma", F::real, "1", "vote sharpness", at_least(0)},
        {"detect.theta", F::real, "1", "class-ratio threshold", greater_than(0)},
        {"detect.gamma_grid", F::real_list, "", "sweep values for gamma", list_at_least(0)},
        {"detect.T_grid", F::int_list, "", "sweep values for T", list_at_least(1)},
        {"detect.t_smooth_grid", F::int_list, "", "sweep values for pipeline.t_smooth", list_at_least(1)},
        {"detect.h_grid", F::real_list, "", "sweep values for h_hours", list_at_least(0)},
        {"detect.theta_grid", F::real_list, "", "sweep values for theta", list_at_least(0)},
        {"corpus.n_trends", F::integer, "200", "synthetic trends", at_least(2)},
        {"corpus.n_nontrends", F::integer, "200", "synthetic non-trends", at_least(2)},
        {"corpus.length", F::integer, "360", "buckets per synthetic series", at_least(2)},
        {"corpus.patterns", F::integer, "4", "distinct trend growth patterns", at_least(1)},
        {"corpus.onset_min", F::integer, "150", "earliest synthetic onset bucket", at_least(1)},
        {"corpus.onset_max", F::integer, "250", "latest synthetic onset bucket", at_least(1)},
    };
    return fields;
}

inline const FieldSpec* find_field(const std::string& key) {
    for (const auto& f : schema()) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

/// Flat key/value configuration, validated against schema().
///
///   # comment
///   seed = 7
///   generator.m = 10
///   experiment.T_grid = 5, 10, 20
class RunConfig {
public:
    RunConfig() {
        for (const auto& f : schema()) values_[f.key] = f.default_value;
    }

    static RunConfig parse(const std::string& text, const std::string& origin = "<config>") {
        RunConfig cfg;
        std::stringstream ss(text);
        std::string line;
        for (std::size_t lineno = 1; std::getline(ss, line); ++lineno) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
            }
            cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)),
                    origin + ":" + std::to_string(lineno));
        }
        return cfg;
    }

    static RunConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path.string());
    }

    /// Sets and validates one field; unknown keys are rejected.
    void set(const std::string& key, const std::string& value, const std::string& where = "") {
        const auto* spec = find_field(key);
        const std::string prefix = where.empty() ? "" : where + ": ";
        if (!spec) throw ConfigError(prefix + "unknown key '" + key + "'");
        if (auto msg = check(*spec, value); !msg.empty()) {
            throw ConfigError(prefix + key + ": " + msg + " (got '" + value + "')");
        }
        values_[key] = value;
    }

    const std::string& raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
        return it->second;
    }

    long long integer(const std::string& key) const {
        long long v = 0;
        detail::parse_int(raw(key), v);
        return v;
    }
    int int32(const std::string& key) const { return static_cast<int>(integer(key)); }
    double real(const std::string& key) const {
        double v = 0;
        detail::parse_real(raw(key), v);
        return v;
    }
    const std::string& text(const std::string& key) const { return raw(key); }
    std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }

    std::vector<int> int_list(const std::string& key) const {
        std::vector<int> out;
        for (const auto& s : detail::split_list(raw(key))) out.push_back(std::stoi(s));
        return out;
    }
    std::vector<double> real_list(const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : detail::split_list(raw(key))) out.push_back(std::stod(s));
        return out;
    }

    /// Canonical "key = value" listing of every field that affects results,
    /// sorted by key. output_dir is left out so the same run written to two
    /// places hashes the same.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : values_) {
            if (k != "output_dir") out += k + " = " + v + "\n";
        }
        return out;
    }

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

    std::filesystem::path output_dir() const {
        if (!raw("output_dir").empty()) return raw("output_dir");
        if (const char* env = std::getenv("LSM_OUTPUT_DIR"); env && *env) return env;
        return "lsm_out";
    }

private:
    static std::string check(const FieldSpec& spec, const std::string& value) {
        long long i = 0;
        double r = 0;
        switch (spec.type) {
        case FieldType::integer:
            if (!detail::parse_int(value, i)) return "expected an integer";
            break;
        case FieldType::real:
            if (!detail::parse_real(value, r)) return "expected a number";
            break;
        case FieldType::boolean:
            if (value != "true" && value != "false") return "expected true or false";
            break;
        case FieldType::int_list:
            for (const auto& s : detail::split_list(value)) {
                if (!detail::parse_int(s, i)) return "expected a comma-separated list of integers";
            }
            break;
        case FieldType::real_list:
            for (const auto& s : detail::split_list(value)) {
                if (!detail::parse_real(s, r)) return "expected a comma-separated list of numbers";
            }
            break;
        case FieldType::text:
            break;
        }
        return spec.check ? spec.check(value) : std::string{};
    }

    std::map<std::string, std::string> values_;
};

} // namespace lsm::cli

#endif
