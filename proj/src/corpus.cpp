#include "loopscan/corpus.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "loopscan/extractor.hpp"

namespace loopscan {

namespace {

using nlohmann::json;

[[noreturn]] void fail_record(size_t index, const std::string& field, const std::string& why) {
    throw CorpusError("malformed corpus record " + std::to_string(index) + ", field '" + field +
                      "': " + why);
}

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           size_t index, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) {
            throw CorpusError("unknown field '" + key + "' in " + where + " of record " +
                              std::to_string(index));
        }
    }
}

GroundTruthAnnotation parse_annotation(const json& obj, size_t record_index,
                                       const std::string& sample_id) {
    if (!obj.is_object()) fail_record(record_index, "annotations", "entry is not an object");
    reject_unknown_fields(obj, {"line_start", "line_end", "category", "kind", "note"},
                          record_index, "annotation");
    GroundTruthAnnotation ann;
    ann.sample_id = sample_id;
    if (!obj.contains("line_start") || !obj["line_start"].is_number_integer()) {
        fail_record(record_index, "line_start", "missing or not an integer");
    }
    if (!obj.contains("line_end") || !obj["line_end"].is_number_integer()) {
        fail_record(record_index, "line_end", "missing or not an integer");
    }
    ann.line_start = obj["line_start"].get<int>();
    ann.line_end = obj["line_end"].get<int>();
    if (ann.line_start < 1) fail_record(record_index, "line_start", "must be >= 1");
    if (ann.line_end < ann.line_start) fail_record(record_index, "line_end", "must be >= line_start");

    if (!obj.contains("category") || !obj["category"].is_string()) {
        fail_record(record_index, "category", "missing or not a string");
    }
    if (!obj.contains("kind") || !obj["kind"].is_string()) {
        fail_record(record_index, "kind", "missing or not a string");
    }
    auto category = category_from_id(obj["category"].get<std::string>());
    if (!category) fail_record(record_index, "category", "unknown category id");
    auto kind = kind_from_id(obj["kind"].get<std::string>());
    if (!kind) fail_record(record_index, "kind", "unknown kind id");
    if (category_of(*kind) != *category) {
        throw CorpusError("sample '" + sample_id + "': kind '" + obj["kind"].get<std::string>() +
                          "' does not belong to category '" + obj["category"].get<std::string>() +
                          "'");
    }
    ann.category = *category;
    ann.kind = *kind;
    if (obj.contains("note")) {
        if (!obj["note"].is_string()) fail_record(record_index, "note", "not a string");
        ann.note = obj["note"].get<std::string>();
    }
    return ann;
}

}  // namespace

std::vector<CodeSample> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("corpus file not found: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw CorpusError("corpus file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw CorpusError("corpus root must be a JSON object");
    reject_unknown_fields(doc, {"version", "samples", "config_fingerprint"}, 0, "corpus root");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != 1) {
        throw CorpusError("corpus version must be 1");
    }
    if (!doc.contains("samples") || !doc["samples"].is_array()) {
        throw CorpusError("corpus must contain a 'samples' array");
    }

    std::vector<CodeSample> samples;
    std::set<std::string> seen_ids;
    size_t index = 0;
    for (const auto& entry : doc["samples"]) {
        if (!entry.is_object()) fail_record(index, "samples", "entry is not an object");
        reject_unknown_fields(entry, {"sample_id", "min_python_version", "source", "annotations"},
                              index, "sample");
        CodeSample sample;
        if (!entry.contains("sample_id") || !entry["sample_id"].is_string()) {
            fail_record(index, "sample_id", "missing or not a string");
        }
        sample.sample_id = entry["sample_id"].get<std::string>();
        if (sample.sample_id.empty()) fail_record(index, "sample_id", "must be non-empty");
        if (!seen_ids.insert(sample.sample_id).second) {
            throw CorpusError("duplicate sample_id '" + sample.sample_id + "'");
        }
        if (!entry.contains("source") || !entry["source"].is_string()) {
            fail_record(index, "source", "missing or not a string");
        }
        sample.source = entry["source"].get<std::string>();
        if (entry.contains("min_python_version")) {
            if (!entry["min_python_version"].is_string()) {
                fail_record(index, "min_python_version", "not a string");
            }
            sample.min_python_version = entry["min_python_version"].get<std::string>();
        }
        int total_lines = static_cast<int>(split_lines(sample.source).size());
        if (entry.contains("annotations")) {
            if (!entry["annotations"].is_array()) fail_record(index, "annotations", "not an array");
            for (const auto& ann_json : entry["annotations"]) {
                GroundTruthAnnotation ann = parse_annotation(ann_json, index, sample.sample_id);
                if (ann.line_end > total_lines) {
                    throw CorpusError("sample '" + sample.sample_id + "': annotation span " +
                                      std::to_string(ann.line_start) + ".." +
                                      std::to_string(ann.line_end) + " exceeds source length (" +
                                      std::to_string(total_lines) + " lines)");
                }
                sample.annotations.push_back(std::move(ann));
            }
        }
        samples.push_back(std::move(sample));
        ++index;
    }
    return samples;
}

void save_corpus(const std::vector<CodeSample>& samples, const std::filesystem::path& path,
                 const std::string& config_fingerprint) {
    json doc;
    doc["version"] = 1;
    if (!config_fingerprint.empty()) doc["config_fingerprint"] = config_fingerprint;
    doc["samples"] = json::array();
    for (const auto& sample : samples) {
        json s;
        s["sample_id"] = sample.sample_id;
        s["min_python_version"] = sample.min_python_version;
        s["source"] = sample.source;
        s["annotations"] = json::array();
        for (const auto& ann : sample.annotations) {
            json a;
            a["line_start"] = ann.line_start;
            a["line_end"] = ann.line_end;
            a["category"] = std::string(category_id(ann.category));
            a["kind"] = std::string(kind_id(ann.kind));
            a["note"] = ann.note;
            s["annotations"].push_back(std::move(a));
        }
        doc["samples"].push_back(std::move(s));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot write corpus file: " + path.string());
    out << doc.dump(2) << "\n";
}

}  // namespace loopscan
