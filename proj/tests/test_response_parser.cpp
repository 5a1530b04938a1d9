#include <doctest.h>

#include "loopscan/response_parser.hpp"

using namespace loopscan;

namespace {

CodeBlock twelve_line_block() {
    CodeBlock block;
    block.sample_id = "sample_x";
    block.first_line = 5;
    block.line_count = 12;  // covers lines 5..16
    block.text = "pass";
    return block;
}

PromptSpec control_spec() { return prompt_spec_for_category(Category::LoopControlLogic); }

}  // namespace

TEST_CASE("happy path: one valid record, no rejections") {
    std::string raw =
        "{\"line\": 6, \"kind\": \"infinite_loop\", \"explanation\": \"never exits\"}\n"
        "END_OF_FINDINGS\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "phi3.5");
    REQUIRE(out.findings.size() == 1);
    CHECK(out.rejections.empty());
    CHECK(out.sentinel_seen);
    const Finding& f = out.findings[0];
    CHECK(f.sample_id == "sample_x");
    CHECK(f.line == 6);
    CHECK(f.kind == PatternKind::InfiniteLoop);
    CHECK(f.category == Category::LoopControlLogic);
    CHECK(f.message == "never exits");
    CHECK(f.origin.type == FindingOrigin::Type::Model);
    CHECK(f.origin.model_name == "phi3.5");
    CHECK(f.confidence == 1.0);
}

TEST_CASE("line outside the block is a LineOutOfRange rejection") {
    std::string raw = "{\"line\": 999, \"kind\": \"infinite_loop\", \"explanation\": \"x\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.empty());
    REQUIRE(out.rejections.size() == 1);
    CHECK(out.rejections[0].reason == Rejection::Reason::LineOutOfRange);
    CHECK(out.rejections[0].sample_id == "sample_x");
}

TEST_CASE("unknown kind vocabulary is rejected") {
    std::string raw = "{\"line\": 6, \"kind\": \"buffer_overflow\", \"explanation\": \"x\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.empty());
    REQUIRE(out.rejections.size() == 1);
    CHECK(out.rejections[0].reason == Rejection::Reason::UnknownPatternKind);
}

TEST_CASE("valid kind from another category is a CategoryMismatch") {
    std::string raw = "{\"line\": 6, \"kind\": \"hardcoded_secret\", \"explanation\": \"x\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.empty());
    REQUIRE(out.rejections.size() == 1);
    CHECK(out.rejections[0].reason == Rejection::Reason::CategoryMismatch);
}

TEST_CASE("prose around records is ignored silently") {
    std::string raw =
        "Sure! Here is my analysis of the code:\n"
        "{\"line\": 7, \"kind\": \"off_by_one\", \"explanation\": \"boundary\"}\n"
        "I hope this helps.\n"
        "END_OF_FINDINGS\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.size() == 1);
    CHECK(out.rejections.empty());
}

TEST_CASE("broken JSON lines are UnparseableRecord rejections") {
    std::string raw =
        "{\"line\": 6, \"kind\": \"infinite_loop\"\n"
        "{\"line\": \"six\", \"kind\": \"infinite_loop\"}\n"
        "{\"kind\": \"infinite_loop\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.empty());
    CHECK(out.rejections.size() == 3);
    for (const auto& r : out.rejections) {
        CHECK(r.reason == Rejection::Reason::UnparseableRecord);
    }
}

TEST_CASE("exact duplicates collapse with one rejection each") {
    std::string raw =
        "{\"line\": 6, \"kind\": \"infinite_loop\", \"explanation\": \"a\"}\n"
        "{\"line\": 6, \"kind\": \"infinite_loop\", \"explanation\": \"b\"}\n"
        "{\"line\": 6, \"kind\": \"infinite_loop\", \"explanation\": \"c\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.size() == 1);
    CHECK(out.rejections.size() == 2);
    for (const auto& r : out.rejections) CHECK(r.reason == Rejection::Reason::DuplicateFinding);
}

TEST_CASE("records past max_findings are rejected") {
    PromptSpec spec = control_spec();
    spec.max_findings = 2;
    std::string raw =
        "{\"line\": 5, \"kind\": \"infinite_loop\", \"explanation\": \"a\"}\n"
        "{\"line\": 6, \"kind\": \"infinite_loop\", \"explanation\": \"b\"}\n"
        "{\"line\": 7, \"kind\": \"infinite_loop\", \"explanation\": \"c\"}\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), spec, "m");
    CHECK(out.findings.size() == 2);
    REQUIRE(out.rejections.size() == 1);
    CHECK(out.rejections[0].reason == Rejection::Reason::ExceedsMaxFindings);
}

TEST_CASE("sentinel with zero records is a legitimate negative answer") {
    ParsedResponse out = parse_findings("END_OF_FINDINGS\n", twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.empty());
    CHECK(out.rejections.empty());
    CHECK(out.sentinel_seen);

    ParsedResponse no_sentinel = parse_findings("nothing to report\n", twelve_line_block(),
                                                control_spec(), "m");
    CHECK(no_sentinel.findings.empty());
    CHECK(no_sentinel.rejections.empty());
    CHECK(!no_sentinel.sentinel_seen);
}

TEST_CASE("every JSON record is accounted for as finding or rejection") {
    std::string raw =
        "preamble text\n"
        "{\"line\": 5, \"kind\": \"infinite_loop\", \"explanation\": \"ok\"}\n"
        "{\"line\": 900, \"kind\": \"infinite_loop\", \"explanation\": \"oob\"}\n"
        "{\"line\": 5, \"kind\": \"nonsense_kind\", \"explanation\": \"?\"}\n"
        "{\"bad json\n"
        "closing chatter\n";
    ParsedResponse out = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(out.findings.size() + out.rejections.size() == 4);
}

TEST_CASE("raw fragments are capped at 200 characters") {
    std::string big = "{\"line\": 5, \"kind\": \"" + std::string(400, 'z') + "\"}";
    ParsedResponse out = parse_findings(big + "\n", twelve_line_block(), control_spec(), "m");
    REQUIRE(out.rejections.size() == 1);
    CHECK(out.rejections[0].raw_fragment.size() == 200);
}

TEST_CASE("parsing is pure: same input twice gives identical output") {
    std::string raw =
        "{\"line\": 6, \"kind\": \"off_by_one\", \"explanation\": \"x\"}\n"
        "{\"line\": 999, \"kind\": \"off_by_one\", \"explanation\": \"y\"}\n";
    ParsedResponse a = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    ParsedResponse b = parse_findings(raw, twelve_line_block(), control_spec(), "m");
    CHECK(a.findings.size() == b.findings.size());
    CHECK(a.rejections.size() == b.rejections.size());
}
