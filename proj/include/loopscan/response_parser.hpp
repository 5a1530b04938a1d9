#pragma once

#include <string>
#include <vector>

#include "loopscan/detectors.hpp"
#include "loopscan/prompt.hpp"

namespace loopscan {

struct Rejection {
    enum class Reason {
        LineOutOfRange,
        UnknownPatternKind,
        CategoryMismatch,
        UnparseableRecord,
        DuplicateFinding,
        ExceedsMaxFindings,
    };
    Reason reason = Reason::UnparseableRecord;
    std::string raw_fragment;  // capped at 200 characters
    std::string sample_id;
};

std::string rejection_reason_id(Rejection::Reason reason);

struct ParsedResponse {
    std::vector<Finding> findings;      // in input order
    std::vector<Rejection> rejections;  // one per discarded record
    bool sentinel_seen = false;         // absence is a warning, not a rejection
};

// Scan a raw completion for JSON-object lines per the output contract and
// validate each against the block and the prompt spec. Prose lines are
// ignored; every JSON record is accounted for as a finding or a rejection.
ParsedResponse parse_findings(const std::string& raw, const CodeBlock& block,
                              const PromptSpec& spec, const std::string& model_name);

}  // namespace loopscan
