#pragma once

#include <set>
#include <string>
#include <vector>

#include "loopscan/extractor.hpp"
#include "loopscan/taxonomy.hpp"

namespace loopscan {

struct FindingOrigin {
    enum class Type { Rule, Model };
    Type type = Type::Rule;
    std::string model_name;  // set when type == Model

    static FindingOrigin rule() { return {Type::Rule, ""}; }
    static FindingOrigin model(std::string name) { return {Type::Model, std::move(name)}; }

    bool operator==(const FindingOrigin&) const = default;
};

struct Finding {
    std::string sample_id;
    int line = 1;
    Category category = Category::LoopControlLogic;
    PatternKind kind = PatternKind::InfiniteLoop;
    std::string message;
    FindingOrigin origin;
    double confidence = 1.0;  // rule findings are always 1.0
};

// All lexicons are configurable; defaults cover the taxonomy exemplars.
// Matching is by snake_case component subsequence with plural tolerance,
// so "user_supplied_filenames" matches "user" but "monkey" never matches "key".
struct DetectorConfig {
    std::vector<std::string> secret_lexicon{"password", "passwd", "secret",
                                            "token",    "key",    "ssn",
                                            "credential"};
    std::vector<std::string> destructive_lexicon{"delete", "drop", "remove", "purge"};
    std::vector<std::string> auth_lexicon{"authorize", "check_permission", "is_admin"};
    std::vector<std::string> user_input_lexicon{"user",      "request",  "input",
                                                "client",    "untrusted", "supplied",
                                                "external",  "attempt",  "login"};
    std::vector<std::string> validation_lexicon{"validate", "valid", "allowed", "allowlist",
                                                "whitelist", "sanitize", "vetted"};
    // Missing-exception-handling fires only on samples marked failure-prone,
    // either by an in-source comment mentioning raise/exception or by this flag.
    bool assume_exception_prone = false;
    long long large_range_threshold = 100000;
};

// Run the enabled rules over one parsed sample. Findings come back sorted by
// (line, catalog order) with exact (line, kind) duplicates removed.
std::vector<Finding> run_detectors(const ParsedSource& source,
                                   const std::vector<LoopRegion>& regions,
                                   const std::set<PatternKind>& enabled,
                                   const DetectorConfig& config = {});

struct RuleCriteria {
    PatternKind kind;
    std::string criterion;    // one-line firing criterion, reused in prompts
    std::string anchor;       // which line a finding points at
    std::string limitations;  // known blind spots and heuristic caveats
};

const RuleCriteria& detector_criteria(PatternKind kind);

bool is_heuristic_kind(PatternKind kind);

}  // namespace loopscan
