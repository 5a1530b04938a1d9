#include <doctest.h>

#include <numeric>
#include <sstream>

#include "loopscan/extractor.hpp"

using namespace loopscan;

namespace {

CodeSample make_sample(const std::string& id, const std::string& source) {
    CodeSample sample;
    sample.sample_id = id;
    sample.source = source;
    return sample;
}

std::shared_ptr<const ParsedSource> must_parse(const CodeSample& sample) {
    ParseResult result = parse_source(sample);
    REQUIRE(result.ok());
    return result.source;
}

}  // namespace

TEST_CASE("minimal loop yields one region") {
    CodeSample sample = make_sample("s", "for i in range(3):\n    pass\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].loop_kind == LoopKind::ForLoop);
    CHECK(regions[0].header_line == 1);
    CHECK(regions[0].body_start == 2);
    CHECK(regions[0].body_end == 2);
    CHECK(regions[0].nesting_depth == 0);
    CHECK(!regions[0].has_else_clause);
}

TEST_CASE("syntax error is reported with position") {
    CodeSample sample = make_sample("bad", "while True print('x')\n");
    ParseResult result = parse_source(sample);
    REQUIRE(!result.ok());
    CHECK(result.error->line == 1);
    CHECK(!result.error->message.empty());
}

TEST_CASE("size limit is enforced") {
    CodeSample sample = make_sample("big", std::string(64, 'x'));
    ParseResult result = parse_source(sample, 16);
    REQUIRE(!result.ok());
    CHECK(result.error->message.find("size limit") != std::string::npos);
}

TEST_CASE("for-else sets has_else_clause") {
    CodeSample sample = make_sample("s",
                                    "for i in range(5):\n"
                                    "    if i == 3:\n"
                                    "        break\n"
                                    "else:\n"
                                    "    print('done')\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].has_else_clause);
    CHECK(regions[0].body_end == 5);  // else suite included
}

TEST_CASE("nested duplicate-scan shape gives depths 0 and 1") {
    CodeSample sample = make_sample("s",
                                    "nums = list(range(1000)) + [999]\n"
                                    "duplicates = []\n"
                                    "for i in range(len(nums)):\n"
                                    "    for j in range(i+1, len(nums)):\n"
                                    "        if nums[i] == nums[j]:\n"
                                    "            duplicates.append(nums[i])\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].nesting_depth == 0);
    CHECK(regions[1].nesting_depth == 1);
    CHECK(regions[0].header_line == 3);
    CHECK(regions[1].header_line == 4);
    // the inner region is strictly contained in the outer one
    CHECK(regions[0].header_line < regions[1].header_line);
    CHECK(regions[1].body_end <= regions[0].body_end);
}

TEST_CASE("no loops means no regions") {
    CodeSample sample = make_sample("s", "x = 1\ny = x + 2\nprint(y)\n");
    auto parsed = must_parse(sample);
    CHECK(extract_loops(*parsed).empty());
}

TEST_CASE("three sequential loops in ascending order, all depth zero") {
    CodeSample sample = make_sample("s",
                                    "for a in range(1):\n"
                                    "    pass\n"
                                    "for b in range(2):\n"
                                    "    pass\n"
                                    "while c:\n"
                                    "    break\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 3);
    for (size_t i = 0; i < regions.size(); ++i) {
        CHECK(regions[i].nesting_depth == 0);
        if (i > 0) CHECK(regions[i - 1].header_line < regions[i].header_line);
    }
    CHECK(regions[2].loop_kind == LoopKind::WhileLoop);
}

TEST_CASE("comprehensions are attributes, not regions") {
    CodeSample sample = make_sample("s",
                                    "squares = [x*x for x in range(10)]\n"
                                    "gen = (y for y in squares)\n"
                                    "for q in gen:\n"
                                    "    print(q)\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    CHECK(regions.size() == 1);  // only the real for loop
    REQUIRE(parsed->comprehensions.size() == 2);
    CHECK(parsed->comprehensions[0].kind == ComprehensionKind::List);
    CHECK(parsed->comprehensions[1].kind == ComprehensionKind::Generator);
}

TEST_CASE("extraction is deterministic") {
    CodeSample sample = make_sample("s",
                                    "for i in range(4):\n"
                                    "    for j in range(i):\n"
                                    "        print(i, j)\n");
    auto first = extract_loops(*must_parse(sample));
    auto second = extract_loops(*must_parse(sample));
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].header_line == second[i].header_line);
        CHECK(first[i].body_end == second[i].body_end);
        CHECK(first[i].nesting_depth == second[i].nesting_depth);
    }
}

TEST_CASE("slice with no context is region-exact") {
    CodeSample sample = make_sample("s",
                                    "a = 1\n"
                                    "b = 2\n"
                                    "for i in range(3):\n"
                                    "    print(i)\n"
                                    "    print(i + 1)\n"
                                    "tail = 3\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 1);
    CodeBlock block = slice_code_block(sample, regions[0], 0);
    CHECK(block.first_line == 3);
    CHECK(block.line_count == 3);
    CHECK(block.text == "for i in range(3):\n    print(i)\n    print(i + 1)");
}

TEST_CASE("slice clamps at file start") {
    CodeSample sample = make_sample("s",
                                    "for i in range(2):\n"
                                    "    pass\n"
                                    "x = 1\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    CodeBlock block = slice_code_block(sample, regions[0], 5);
    CHECK(block.first_line == 1);
    CHECK(block.line_count == 3);
}

// Block boundaries verified by independent line arithmetic over a synthetic
// 20-line file with the loop placed at known coordinates.
TEST_CASE("slice oracle: context arithmetic on a 20-line fixture") {
    std::vector<std::string> lines;
    for (int i = 1; i <= 9; ++i) lines.push_back("v" + std::to_string(i) + " = " + std::to_string(i));
    lines.push_back("for i in range(3):");   // line 10
    lines.push_back("    print(i)");         // line 11
    lines.push_back("    print(i * 2)");     // line 12
    for (int i = 13; i <= 20; ++i) lines.push_back("w" + std::to_string(i) + " = " + std::to_string(i));
    std::string source;
    for (const auto& l : lines) source += l + "\n";
    CodeSample sample = make_sample("s", source);

    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 1);
    REQUIRE(regions[0].header_line == 10);
    REQUIRE(regions[0].body_end == 12);

    const int context = 2;
    CodeBlock block = slice_code_block(sample, regions[0], context);

    // oracle: straight line arithmetic on the fixture
    int expected_first = std::max(1, 10 - context);
    int expected_last = std::min(static_cast<int>(lines.size()), 12 + context);
    CHECK(block.first_line == expected_first);
    CHECK(block.line_count == expected_last - expected_first + 1);
    CHECK(block.first_line == 8);
    CHECK(block.first_line + block.line_count - 1 == 14);

    // re-locating the block in the original source reproduces it exactly
    std::string expected_text;
    for (int i = expected_first; i <= expected_last; ++i) {
        if (i > expected_first) expected_text += "\n";
        expected_text += lines[static_cast<size_t>(i) - 1];
    }
    CHECK(block.text == expected_text);
}

TEST_CASE("whole file block covers every line") {
    CodeSample sample = make_sample("s", "a = 1\nb = 2\nc = 3\n");
    CodeBlock block = whole_file_block(sample);
    CHECK(block.first_line == 1);
    CHECK(block.line_count == 3);
    CHECK(block.text == "a = 1\nb = 2\nc = 3");
}

TEST_CASE("region spans cover annotation lines for bodies with else") {
    // every line of the statement, else included, lies in [header, body_end]
    CodeSample sample = make_sample("s",
                                    "while ready:\n"
                                    "    step()\n"
                                    "else:\n"
                                    "    finish()\n");
    auto parsed = must_parse(sample);
    std::vector<LoopRegion> regions = extract_loops(*parsed);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].header_line == 1);
    CHECK(regions[0].body_end == 4);
}
