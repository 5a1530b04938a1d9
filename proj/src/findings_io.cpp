#include "loopscan/findings_io.hpp"

#include <fstream>

#include <json.hpp>

namespace loopscan {

namespace {

using nlohmann::json;

std::string origin_to_string(const FindingOrigin& origin) {
    if (origin.type == FindingOrigin::Type::Rule) return "rule";
    return "model:" + origin.model_name;
}

FindingOrigin origin_from_string(const std::string& text) {
    if (text == "rule") return FindingOrigin::rule();
    if (text.rfind("model:", 0) == 0) return FindingOrigin::model(text.substr(6));
    throw FindingsIoError("unknown finding origin '" + text + "'");
}

}  // namespace

void write_findings(const std::filesystem::path& path, const std::vector<Finding>& findings,
                    const std::string& config_fingerprint) {
    json doc;
    doc["version"] = 1;
    doc["config_fingerprint"] = config_fingerprint;
    doc["findings"] = json::array();
    for (const Finding& f : findings) {
        doc["findings"].push_back({
            {"sample_id", f.sample_id},
            {"line", f.line},
            {"category", std::string(category_id(f.category))},
            {"kind", std::string(kind_id(f.kind))},
            {"message", f.message},
            {"origin", origin_to_string(f.origin)},
            {"confidence", f.confidence},
        });
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FindingsIoError("cannot write findings file: " + path.string());
    out << doc.dump(2) << "\n";
}

FindingsFile read_findings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FindingsIoError("findings file not found: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw FindingsIoError("findings file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer()) {
        throw FindingsIoError("findings file lacks a version field");
    }
    if (doc["version"].get<int>() != 1) {
        throw FindingsIoError("findings schema version mismatch: expected 1, got " +
                              std::to_string(doc["version"].get<int>()));
    }
    FindingsFile out;
    out.config_fingerprint = doc.value("config_fingerprint", "");
    if (!doc.contains("findings") || !doc["findings"].is_array()) {
        throw FindingsIoError("findings file lacks a findings array");
    }
    for (const auto& entry : doc["findings"]) {
        Finding f;
        if (!entry.contains("sample_id") || !entry.contains("line") || !entry.contains("kind")) {
            throw FindingsIoError("finding record is missing required fields");
        }
        f.sample_id = entry["sample_id"].get<std::string>();
        f.line = entry["line"].get<int>();
        auto kind = kind_from_id(entry["kind"].get<std::string>());
        if (!kind) {
            throw FindingsIoError("finding record names unknown kind '" +
                                  entry["kind"].get<std::string>() + "'");
        }
        f.kind = *kind;
        f.category = category_of(*kind);
        if (entry.contains("category")) {
            auto category = category_from_id(entry["category"].get<std::string>());
            if (!category || *category != f.category) {
                throw FindingsIoError("finding record category does not match its kind");
            }
        }
        f.message = entry.value("message", "");
        f.origin = origin_from_string(entry.value("origin", "rule"));
        f.confidence = entry.value("confidence", 1.0);
        out.findings.push_back(std::move(f));
    }
    return out;
}

void write_rejections(const std::filesystem::path& path, const std::vector<Rejection>& rejections,
                      const std::string& config_fingerprint) {
    json doc;
    doc["version"] = 1;
    doc["config_fingerprint"] = config_fingerprint;
    doc["rejections"] = json::array();
    for (const Rejection& r : rejections) {
        doc["rejections"].push_back({
            {"reason", rejection_reason_id(r.reason)},
            {"sample_id", r.sample_id},
            {"raw_fragment", r.raw_fragment},
        });
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FindingsIoError("cannot write rejections file: " + path.string());
    out << doc.dump(2) << "\n";
}

}  // namespace loopscan
