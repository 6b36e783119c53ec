#ifndef LSM_CLI_IO_HPP
#define LSM_CLI_IO_HPP

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsm/core.hpp"
#include "lsm/model.hpp"
#include "lsm/pipeline.hpp"

namespace lsm::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// One line of a series file.
///
///   {"id": "...", "label": 1, "start_index": 1, "values": [...],
///    "onset_index": 240, "bucket_width_minutes": 2,
///    "source_index": 3, "shift": 7}
///
/// Everything but start_index and values is optional.
struct SeriesRecord {
    TimeSeries series;
    std::optional<Label> label;
    std::optional<Index> onset_index;
    std::optional<double> bucket_width_minutes;
    std::optional<Provenance> provenance;

    friend bool operator==(const SeriesRecord&, const SeriesRecord&) = default;
};

inline json to_json(const SeriesRecord& r) {
    json j;
    j["id"] = r.series.id();
    if (r.label) j["label"] = to_int(*r.label);
    j["start_index"] = r.series.start_index();
    j["values"] = std::vector<double>(r.series.values().begin(), r.series.values().end());
    if (r.onset_index) j["onset_index"] = *r.onset_index;
    if (r.bucket_width_minutes) j["bucket_width_minutes"] = *r.bucket_width_minutes;
    if (r.provenance) {
        j["source_index"] = r.provenance->source_index;
        j["shift"] = r.provenance->shift;
    }
    return j;
}

inline SeriesRecord record_from_json(const json& j) {
    if (!j.is_object()) throw IoError("expected a JSON object");
    for (const char* key : {"start_index", "values"}) {
        if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    }
    const std::string id = j.value("id", std::string{});
    auto values = j.at("values").get<std::vector<double>>();
    SeriesRecord r{TimeSeries(j.at("start_index").get<Index>(), std::move(values), id), {}, {}, {}, {}};
    if (j.contains("label") && !j.at("label").is_null()) r.label = label_from_int(j.at("label").get<int>());
    if (j.contains("onset_index") && !j.at("onset_index").is_null()) r.onset_index = j.at("onset_index").get<Index>();
    if (j.contains("bucket_width_minutes")) r.bucket_width_minutes = j.at("bucket_width_minutes").get<double>();
    if (j.contains("source_index") || j.contains("shift")) {
        r.provenance = Provenance{j.at("source_index").get<int>(), j.at("shift").get<int>()};
    }
    return r;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

inline std::vector<SeriesRecord> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<SeriesRecord> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<SeriesRecord>& records) {
    std::string text;
    for (const auto& r : records) text += to_json(r).dump() + "\n";
    write_text(path, text);
}

// -- datasets ---------------------------------------------------------------

inline std::vector<SeriesRecord> dataset_records(const LabeledDataset& data) {
    std::vector<SeriesRecord> out;
    const bool prov = data.has_provenance();
    for (Label l : {Label::positive, Label::negative}) {
        const auto& series = data.of(l);
        const auto& provs = l == Label::positive ? data.positive_provenance : data.negative_provenance;
        for (std::size_t i = 0; i < series.size(); ++i) {
            SeriesRecord r{series[i], l, {}, {}, {}};
            if (prov) r.provenance = provs[i];
            out.push_back(std::move(r));
        }
    }
    return out;
}

inline LabeledDataset dataset_from_records(const std::vector<SeriesRecord>& records, const std::string& origin) {
    LabeledDataset data;
    bool all_prov = true;
    for (const auto& r : records) all_prov = all_prov && r.provenance.has_value();
    for (const auto& r : records) {
        if (!r.label) throw IoError(origin + ": series '" + r.series.id() + "' has no label");
        data.add(r.series, *r.label, all_prov ? r.provenance : std::nullopt);
    }
    return data;
}

inline LabeledDataset read_dataset(const std::filesystem::path& path) {
    return dataset_from_records(read_jsonl(path), path.string());
}

// -- latent sources ---------------------------------------------------------

inline std::vector<SeriesRecord> source_records(const LatentSourceModel& model) {
    std::vector<SeriesRecord> out;
    for (const auto& s : model.sources) out.push_back({s.series, s.label, {}, {}, {}});
    return out;
}

inline std::vector<LatentSource> read_sources(const std::filesystem::path& path) {
    std::vector<LatentSource> out;
    for (auto& r : read_jsonl(path)) {
        if (!r.label) throw IoError(path.string() + ": source '" + r.series.id() + "' has no label");
        out.push_back({std::move(r.series), *r.label});
    }
    return out;
}

// -- rate series ------------------------------------------------------------

inline RateSeries rate_from_record(const SeriesRecord& r) {
    if (r.series.start_index() != 1) {
        throw IoError("rate series '" + r.series.id() + "' must start at index 1");
    }
    RateSeries rs;
    rs.topic_id = r.series.id();
    rs.counts.assign(r.series.values().begin(), r.series.values().end());
    rs.bucket_width_minutes = r.bucket_width_minutes.value_or(2.0);
    rs.onset_index = r.onset_index;
    if (r.label && *r.label == Label::positive && !rs.onset_index) {
        throw IoError("trend '" + rs.topic_id + "' has no onset_index");
    }
    rs.validate();
    return rs;
}

inline SeriesRecord rate_to_record(const RateSeries& rs) {
    return {TimeSeries(1, rs.counts, rs.topic_id), rs.truth(), rs.onset_index, rs.bucket_width_minutes, {}};
}

/// Raw rate CSV: one "t,value" row per bucket, t consecutive, optional header.
inline RateSeries read_rate_csv(const std::filesystem::path& path, double bucket_width_minutes) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    RateSeries rs;
    rs.topic_id = path.stem().string();
    rs.bucket_width_minutes = bucket_width_minutes;
    std::string line;
    std::optional<long long> prev_t;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        auto fail = [&](const std::string& why) {
            return IoError(path.string() + ":" + std::to_string(lineno) + ": " + why);
        };
        if (comma == std::string::npos) throw fail("expected 't,value'");
        long long t = 0;
        double v = 0.0;
        try {
            std::size_t used = 0;
            t = std::stoll(line.substr(0, comma), &used);
            v = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            if (lineno == 1 && !prev_t) continue; // header
            throw fail("cannot parse '" + line + "'");
        }
        if (prev_t && t != *prev_t + 1) throw fail("time index must increase by 1");
        prev_t = t;
        rs.counts.push_back(v);
    }
    try {
        rs.validate();
    } catch (const ParamError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return rs;
}

inline std::vector<RateSeries> read_rates(const std::filesystem::path& path, double bucket_width_minutes) {
    if (path.extension() == ".csv") return {read_rate_csv(path, bucket_width_minutes)};
    std::vector<RateSeries> out;
    for (const auto& r : read_jsonl(path)) {
        auto rs = rate_from_record(r);
        if (!r.bucket_width_minutes) rs.bucket_width_minutes = bucket_width_minutes;
        out.push_back(std::move(rs));
    }
    return out;
}

// -- misc -------------------------------------------------------------------

/// Shortest decimal text that reads back as the same double.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

/// JSON number, or the strings "inf" / "-inf" / "nan" where JSON has none.
inline json number(double v) {
    if (std::isfinite(v)) return v;
    return fmt_double(v);
}

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace lsm::io

#endif
