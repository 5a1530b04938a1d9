#include <doctest.h>

#include <algorithm>

#include "loopscan/prompt.hpp"

using namespace loopscan;

namespace {

size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    size_t count = 0, pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

CodeBlock make_block(const std::string& id, int first_line, const std::string& text) {
    CodeBlock block;
    block.sample_id = id;
    block.first_line = first_line;
    block.text = text;
    block.line_count = 1 + static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    return block;
}

}  // namespace

TEST_CASE("system prompt has exactly five labeled blocks") {
    for (Category category : all_categories()) {
        std::string text = build_system_prompt(prompt_spec_for_category(category));
        CHECK(count_occurrences(text, "[S1]") == 1);
        CHECK(count_occurrences(text, "[S2]") == 1);
        CHECK(count_occurrences(text, "[S3]") == 1);
        CHECK(count_occurrences(text, "[S4]") == 1);
        CHECK(count_occurrences(text, "[S5]") == 1);
    }
}

TEST_CASE("category isolation: no foreign kind identifiers appear") {
    for (Category category : all_categories()) {
        std::string text = build_system_prompt(prompt_spec_for_category(category));
        for (const auto& entry : catalog()) {
            std::string id(entry.id);
            if (entry.category == category) {
                CHECK(text.find(id) != std::string::npos);
            } else {
                CHECK(text.find(id) == std::string::npos);
            }
        }
    }
}

TEST_CASE("control prompt mentions infinite and no security identifier") {
    std::string text = build_system_prompt(prompt_spec_for_category(Category::LoopControlLogic));
    CHECK(text.find("infinite") != std::string::npos);
    CHECK(text.find("hardcoded_secret") == std::string::npos);
}

TEST_CASE("the four safeguard phrases appear exactly once each") {
    for (Category category : all_categories()) {
        std::string text = build_system_prompt(prompt_spec_for_category(category));
        CHECK(count_occurrences(text, "language-specific awareness") == 1);
        CHECK(count_occurrences(text, "code-aware grounding") == 1);
        CHECK(count_occurrences(text, "version sensitivity") == 1);
        CHECK(count_occurrences(text, "hallucination prevention") == 1);
    }
}

TEST_CASE("rendering is deterministic and fingerprints canonicalize kind order") {
    PromptSpec spec = prompt_spec_for_category(Category::SecurityInLoop);
    std::string first = build_system_prompt(spec);
    std::string second = build_system_prompt(spec);
    CHECK(first == second);
    CHECK(prompt_fingerprint(spec) == prompt_fingerprint(spec));

    PromptSpec reordered = spec;
    std::reverse(reordered.kinds.begin(), reordered.kinds.end());
    CHECK(prompt_fingerprint(reordered) == prompt_fingerprint(spec));

    PromptSpec different = spec;
    different.max_findings = 7;
    CHECK(prompt_fingerprint(different) != prompt_fingerprint(spec));
}

TEST_CASE("invalid specs are rejected") {
    PromptSpec empty;
    empty.kinds.clear();
    CHECK_THROWS_AS(validate_prompt_spec(empty), std::invalid_argument);

    PromptSpec mixed = prompt_spec_for_category(Category::LoopControlLogic);
    mixed.kinds.push_back(PatternKind::HardcodedSecret);
    CHECK_THROWS_AS(validate_prompt_spec(mixed), std::invalid_argument);
}

TEST_CASE("user prompt declares the line range") {
    CodeBlock block = make_block("sample_a", 3, "for i in range(3):\n    pass\n    pass");
    std::string text = build_user_prompt(block);
    CHECK(text.find("lines 3..5") != std::string::npos);
    CHECK(text.find("sample_a") != std::string::npos);
    CHECK(text.find("for i in range(3):") != std::string::npos);
}

TEST_CASE("fence is lengthened when the code contains backticks") {
    CodeBlock block = make_block("s", 1, "doc = \"```fenced```\"");
    std::string text = build_user_prompt(block);
    CHECK(text.find("````") != std::string::npos);  // outer fence is longer than inner run
}

TEST_CASE("empty-body block still renders the instruction") {
    CodeBlock block = make_block("s", 1, "");
    block.line_count = 0;
    std::string text = build_user_prompt(block);
    CHECK(text.find("[S5]") != std::string::npos);
}

TEST_CASE("S5 names the sentinel and max findings") {
    PromptSpec spec = prompt_spec_for_category(Category::ResourceEfficiency);
    std::string text = build_system_prompt(spec);
    CHECK(text.find(kFindingsSentinel) != std::string::npos);
    CHECK(text.find("20") != std::string::npos);
}
