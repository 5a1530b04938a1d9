#include "loopscan/response_parser.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace loopscan {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string fragment_of(const std::string& line) { return line.substr(0, 200); }

}  // namespace

std::string rejection_reason_id(Rejection::Reason reason) {
    switch (reason) {
        case Rejection::Reason::LineOutOfRange: return "line_out_of_range";
        case Rejection::Reason::UnknownPatternKind: return "unknown_pattern_kind";
        case Rejection::Reason::CategoryMismatch: return "category_mismatch";
        case Rejection::Reason::UnparseableRecord: return "unparseable_record";
        case Rejection::Reason::DuplicateFinding: return "duplicate_finding";
        case Rejection::Reason::ExceedsMaxFindings: return "exceeds_max_findings";
    }
    return "unparseable_record";
}

ParsedResponse parse_findings(const std::string& raw, const CodeBlock& block,
                              const PromptSpec& spec, const std::string& model_name) {
    ParsedResponse out;
    int first = block.first_line;
    int last = block.first_line + (block.line_count > 0 ? block.line_count - 1 : 0);
    std::set<std::pair<int, std::string>> seen;

    auto reject = [&out, &block](Rejection::Reason reason, const std::string& line) {
        out.rejections.push_back({reason, fragment_of(line), block.sample_id});
    };

    std::string line;
    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t nl = raw.find('\n', pos);
        line = nl == std::string::npos ? raw.substr(pos) : raw.substr(pos, nl - pos);
        pos = nl == std::string::npos ? raw.size() + 1 : nl + 1;

        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        if (trimmed == kFindingsSentinel) {
            out.sentinel_seen = true;
            continue;
        }
        if (trimmed.front() != '{') continue;  // small models preface answers with prose

        json record;
        try {
            record = json::parse(trimmed);
        } catch (const json::exception&) {
            reject(Rejection::Reason::UnparseableRecord, trimmed);
            continue;
        }
        if (!record.is_object() || !record.contains("line") ||
            !record["line"].is_number_integer() || !record.contains("kind") ||
            !record["kind"].is_string()) {
            reject(Rejection::Reason::UnparseableRecord, trimmed);
            continue;
        }

        std::string kind_text = record["kind"].get<std::string>();
        auto kind = kind_from_id(kind_text);
        if (!kind) {
            reject(Rejection::Reason::UnknownPatternKind, trimmed);
            continue;
        }
        if (std::find(spec.kinds.begin(), spec.kinds.end(), *kind) == spec.kinds.end()) {
            reject(Rejection::Reason::CategoryMismatch, trimmed);
            continue;
        }

        int line_no = record["line"].get<int>();
        if (line_no < first || line_no > last) {
            reject(Rejection::Reason::LineOutOfRange, trimmed);
            continue;
        }
        if (static_cast<int>(out.findings.size()) >= spec.max_findings) {
            reject(Rejection::Reason::ExceedsMaxFindings, trimmed);
            continue;
        }
        if (!seen.insert({line_no, kind_text}).second) {
            reject(Rejection::Reason::DuplicateFinding, trimmed);
            continue;
        }

        Finding finding;
        finding.sample_id = block.sample_id;
        finding.line = line_no;
        finding.kind = *kind;
        finding.category = category_of(*kind);
        finding.message = record.contains("explanation") && record["explanation"].is_string()
                              ? record["explanation"].get<std::string>()
                              : "";
        finding.origin = FindingOrigin::model(model_name);
        finding.confidence = 1.0;
        out.findings.push_back(std::move(finding));
    }
    return out;
}

}  // namespace loopscan
