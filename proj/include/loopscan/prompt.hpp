#pragma once

#include <string>
#include <vector>

#include "loopscan/extractor.hpp"
#include "loopscan/taxonomy.hpp"

namespace loopscan {

// One category per prompt; scanning all categories issues one prompt per
// category per code block.
struct PromptSpec {
    Category category = Category::LoopControlLogic;
    std::vector<PatternKind> kinds;  // nonempty, all belonging to category
    std::string python_version = "3.7";
    int output_schema_version = 1;
    int max_findings = 20;
};

struct RenderedPrompt {
    std::string system_text;
    std::string user_text;
    std::string spec_fingerprint;
};

inline constexpr const char* kFindingsSentinel = "END_OF_FINDINGS";

// Full-category convenience spec.
PromptSpec prompt_spec_for_category(Category category);

// Throws std::invalid_argument when kinds is empty or a kind is outside the
// spec's category.
void validate_prompt_spec(const PromptSpec& spec);

// Deterministic five-block system prompt ([S1]..[S5]) with the four safeguard
// directives and a line-delimited JSON output contract.
std::string build_system_prompt(const PromptSpec& spec);

// Line-number preamble, fenced verbatim code, single task instruction.
std::string build_user_prompt(const CodeBlock& block);

// Stable hash of the canonicalized spec (kind order does not matter).
std::string prompt_fingerprint(const PromptSpec& spec);

RenderedPrompt render_prompt(const PromptSpec& spec, const CodeBlock& block);

}  // namespace loopscan
