#include "loopscan/prompt.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "loopscan/detectors.hpp"

namespace loopscan {

namespace {

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::vector<PatternKind> canonical_kinds(const PromptSpec& spec) {
    std::vector<PatternKind> kinds = spec.kinds;
    std::sort(kinds.begin(), kinds.end(), [](PatternKind a, PatternKind b) {
        return kind_id(a) < kind_id(b);
    });
    kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
    return kinds;
}

}  // namespace

PromptSpec prompt_spec_for_category(Category category) {
    PromptSpec spec;
    spec.category = category;
    spec.kinds = kinds_in_category(category);
    return spec;
}

void validate_prompt_spec(const PromptSpec& spec) {
    if (spec.kinds.empty()) throw std::invalid_argument("prompt spec needs at least one kind");
    for (PatternKind kind : spec.kinds) {
        if (category_of(kind) != spec.category) {
            throw std::invalid_argument("kind '" + std::string(kind_id(kind)) +
                                        "' does not belong to category '" +
                                        std::string(category_id(spec.category)) + "'");
        }
    }
    if (spec.max_findings < 1) throw std::invalid_argument("max_findings must be positive");
}

std::string build_system_prompt(const PromptSpec& spec) {
    validate_prompt_spec(spec);
    std::vector<PatternKind> kinds = canonical_kinds(spec);
    std::string text;

    text += "[S1] System identity\n";
    text += "You are a code optimization reviewer for Python " + spec.python_version +
            " and newer. You inspect loop code for one problem family: " +
            std::string(category_title(spec.category)) + ".\n\n";

    text += "[S2] Core responsibilities\n";
    text += "Analyze the loop code the user provides and report only issues of these kinds:\n";
    for (PatternKind kind : kinds) {
        text += "- " + std::string(kind_id(kind)) + " (" + std::string(kind_title(kind)) + ")\n";
    }
    text += "Report nothing outside this list.\n\n";

    text += "[S3] Constraints and guardrails\n";
    text += "- language-specific awareness: reason with Python semantics only; never apply "
            "rules from other languages.\n";
    text += "- code-aware grounding: cite only line numbers that are present in the given "
            "block and never invent constructs that are not in the code.\n";
    text += "- version sensitivity: respect the stated Python version; do not assume syntax "
            "or library behavior from other versions.\n";
    text += "- hallucination prevention: when none of the listed kinds applies, answer with "
            "no findings: output only the terminator line.\n\n";

    text += "[S4] Detection targets\n";
    for (PatternKind kind : kinds) {
        text += "- " + std::string(kind_id(kind)) + ": " + detector_criteria(kind).criterion + "\n";
    }
    text += "\n";

    text += "[S5] Output format\n";
    text += "Emit one JSON object per finding, each alone on its own line, with exactly these "
            "fields: \"line\" (integer, absolute line number from the block), \"kind\" (one of "
            "the identifiers listed above), \"explanation\" (one sentence). Emit at most " +
            std::to_string(spec.max_findings) +
            " findings (schema " + std::to_string(spec.output_schema_version) +
            "). After the last finding emit exactly this terminator line:\n" +
            std::string(kFindingsSentinel) + "\n";
    return text;
}

std::string build_user_prompt(const CodeBlock& block) {
    int last_line = block.first_line + (block.line_count > 0 ? block.line_count - 1 : 0);
    std::string fence = "```";
    // lengthen the fence when the code itself contains backtick runs
    size_t longest_run = 0, run = 0;
    for (char c : block.text) {
        run = c == '`' ? run + 1 : 0;
        longest_run = std::max(longest_run, run);
    }
    if (longest_run >= 3) fence = std::string(longest_run + 1, '`');

    std::string text;
    text += "Code block: lines " + std::to_string(block.first_line) + ".." +
            std::to_string(last_line) + " of sample " + block.sample_id + ". Line " +
            std::to_string(block.first_line) + " is the first line shown.\n";
    text += fence + "python\n";
    text += block.text;
    if (block.text.empty() || block.text.back() != '\n') text += '\n';
    text += fence + "\n";
    text += "Report the findings for this block in the [S5] format.\n";
    return text;
}

std::string prompt_fingerprint(const PromptSpec& spec) {
    std::string canon;
    canon += category_id(spec.category);
    canon += '|';
    for (PatternKind kind : canonical_kinds(spec)) {
        canon += kind_id(kind);
        canon += ',';
    }
    canon += '|';
    canon += spec.python_version;
    canon += '|';
    canon += std::to_string(spec.output_schema_version);
    canon += '|';
    canon += std::to_string(spec.max_findings);
    return to_hex(fnv1a(canon));
}

RenderedPrompt render_prompt(const PromptSpec& spec, const CodeBlock& block) {
    RenderedPrompt out;
    out.system_text = build_system_prompt(spec);
    out.user_text = build_user_prompt(block);
    out.spec_fingerprint = prompt_fingerprint(spec);
    return out;
}

}  // namespace loopscan
