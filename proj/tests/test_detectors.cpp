#include <doctest.h>

#include <set>

#include "loopscan/corpus.hpp"
#include "loopscan/detectors.hpp"
#include "support/fixtures.hpp"

using namespace loopscan;

namespace {

std::shared_ptr<const ParsedSource> parse_ok(const std::string& id, const std::string& source) {
    CodeSample sample;
    sample.sample_id = id;
    sample.source = source;
    ParseResult result = parse_source(sample);
    REQUIRE(result.ok());
    return result.source;
}

std::vector<Finding> scan(const std::string& source,
                          const std::set<PatternKind>& enabled,
                          const DetectorConfig& config = {}) {
    auto parsed = parse_ok("fixture", source);
    return run_detectors(*parsed, extract_loops(*parsed), enabled, config);
}

std::set<PatternKind> all_enabled() {
    std::set<PatternKind> kinds;
    for (PatternKind k : all_kinds()) kinds.insert(k);
    return kinds;
}

}  // namespace

TEST_CASE("every taxonomy exemplar fires exactly its own kind at its line") {
    for (const auto& exemplar : fixtures::taxonomy_exemplars()) {
        CAPTURE(kind_id(exemplar.kind));
        std::vector<Finding> findings = scan(exemplar.source, all_enabled());
        REQUIRE(findings.size() == 1);
        CHECK(findings[0].kind == exemplar.kind);
        CHECK(findings[0].line == exemplar.expected_line);
        CHECK(findings[0].category == category_of(exemplar.kind));
        CHECK(findings[0].origin.type == FindingOrigin::Type::Rule);
        CHECK(findings[0].confidence == 1.0);
        CHECK(!findings[0].message.empty());
    }
}

TEST_CASE("the corrected boundary loop produces no findings") {
    CHECK(scan(fixtures::corrected_boundary_loop(), all_enabled()).empty());
}

TEST_CASE("disabled kinds never fire") {
    for (const auto& exemplar : fixtures::taxonomy_exemplars()) {
        std::set<PatternKind> without = all_enabled();
        without.erase(exemplar.kind);
        std::vector<Finding> findings = scan(exemplar.source, without);
        for (const Finding& f : findings) CHECK(f.kind != exemplar.kind);
    }
}

TEST_CASE("monotonicity: a larger enabled set yields a superset of findings") {
    for (const auto& exemplar : fixtures::taxonomy_exemplars()) {
        std::vector<Finding> only = scan(exemplar.source, {exemplar.kind});
        std::vector<Finding> everything = scan(exemplar.source, all_enabled());
        for (const Finding& f : only) {
            bool present = false;
            for (const Finding& g : everything) {
                if (g.kind == f.kind && g.line == f.line) present = true;
            }
            CHECK(present);
        }
    }
}

TEST_CASE("determinism: identical input gives identical findings") {
    for (const auto& exemplar : fixtures::taxonomy_exemplars()) {
        std::vector<Finding> a = scan(exemplar.source, all_enabled());
        std::vector<Finding> b = scan(exemplar.source, all_enabled());
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].kind == b[i].kind);
            CHECK(a[i].line == b[i].line);
            CHECK(a[i].message == b[i].message);
        }
    }
}

TEST_CASE("findings come back sorted by line") {
    std::string source =
        "secrets = []\n"
        "for user in users:\n"
        "    token = \"LITERAL-CRED-1\"\n"
        "    result = eval(user)\n"
        "    print(result)\n";
    std::vector<Finding> findings = scan(source, all_enabled());
    REQUIRE(findings.size() >= 2);
    for (size_t i = 1; i < findings.size(); ++i) CHECK(findings[i - 1].line <= findings[i].line);
}

TEST_CASE("infinite loop: while True without exit fires, with break does not") {
    CHECK(scan("while True:\n    spin()\n", {PatternKind::InfiniteLoop}).size() == 1);
    CHECK(scan("while True:\n    if done():\n        break\n", {PatternKind::InfiniteLoop}).empty());
    CHECK(scan("def poll():\n    while True:\n        return 1\n", {PatternKind::InfiniteLoop}).empty());
}

TEST_CASE("infinite loop: condition updated through augmented assignment is fine") {
    CHECK(scan("i = 0\nwhile i < 5:\n    i += 1\n", {PatternKind::InfiniteLoop}).empty());
    CHECK(scan("i = 0\nwhile i < 5:\n    i = advance(i)\n", {PatternKind::InfiniteLoop}).empty());
    // stateful conditions are skipped rather than guessed at
    CHECK(scan("while queue.pending():\n    drain_one()\n", {PatternKind::InfiniteLoop}).empty());
}

TEST_CASE("off-by-one variable bound variant") {
    std::string source =
        "limit = 10\n"
        "if value <= limit:\n"
        "    record(value)\n"
        "for i in range(1, limit):\n"
        "    emit(i)\n";
    std::vector<Finding> findings = scan(source, {PatternKind::OffByOne});
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].line == 4);
    CHECK(findings[0].message.find("heuristic") != std::string::npos);
}

TEST_CASE("control flow misuse: data-dependent break does not fire") {
    std::string source =
        "for item in entries:\n"
        "    if item == wanted:\n"
        "        break\n"
        "else:\n"
        "    print('missing')\n";
    CHECK(scan(source, {PatternKind::ControlFlowMisuse}).empty());
}

TEST_CASE("dead code: always-false comparison anchors at the impossible body") {
    std::string source =
        "for i in range(5):\n"
        "    if i > 40:\n"
        "        handle()\n";
    std::vector<Finding> findings = scan(source, {PatternKind::DeadUnreachableCode});
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].line == 3);
}

TEST_CASE("sensitive data logging needs both a logging call and a secret") {
    CHECK(scan("for u in users:\n    print(u)\n", {PatternKind::SensitiveDataLogging}).empty());
    CHECK(scan("for u in users:\n    password = load(u)\n", {PatternKind::SensitiveDataLogging}).empty());
    std::vector<Finding> findings = scan(
        "import logging\n"
        "for u in users:\n"
        "    logging.info(\"auth %s\", api_key)\n",
        {PatternKind::SensitiveDataLogging});
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].line == 3);
}

TEST_CASE("lexicon matching is component-wise, not substring") {
    // 'monkey' must not match 'key'
    CHECK(scan("for u in users:\n    print(monkey)\n", {PatternKind::SensitiveDataLogging}).empty());
    CHECK(scan("for u in users:\n    print(api_key)\n", {PatternKind::SensitiveDataLogging}).size() == 1);
}

TEST_CASE("missing authorization is silenced by an authorization call") {
    std::string guarded =
        "for request in incoming_requests:\n"
        "    if check_permission(request):\n"
        "        purge_records(request)\n";
    CHECK(scan(guarded, {PatternKind::MissingAuthorization}).empty());
}

TEST_CASE("eval of a literal is not injection") {
    CHECK(scan("for x in items:\n    eval(\"1 + 1\")\n", {PatternKind::InsecureEvalInjection}).empty());
    CHECK(scan("for x in items:\n    run = ast.literal_eval(x)\n", {PatternKind::InsecureEvalInjection}).empty());
}

TEST_CASE("unvalidated bound is silenced by a min clamp in the header") {
    CHECK(scan("for i in range(min(int(input(\"n? \")), 100)):\n    work(i)\n",
               {PatternKind::UnvalidatedLoopBound})
              .empty());
}

TEST_CASE("resource exhaustion needs externally controlled iteration") {
    std::string internal_list =
        "for name in internal_names:\n"
        "    with open(name, \"w\") as fh:\n"
        "        fh.write(\"x\")\n";
    CHECK(scan(internal_list, {PatternKind::ResourceExhaustion}).empty());
    std::string read_mode =
        "for name in user_supplied_names:\n"
        "    with open(name) as fh:\n"
        "        fh.read()\n";
    CHECK(scan(read_mode, {PatternKind::ResourceExhaustion}).empty());
    std::string while_true =
        "while True:\n"
        "    with open(next_name(), \"a\") as fh:\n"
        "        fh.write(\"x\")\n";
    CHECK(scan(while_true, {PatternKind::ResourceExhaustion}).size() == 1);
}

TEST_CASE("missing exception handling honors the prone flag") {
    std::string source =
        "for job in jobs:\n"
        "    send_job(job)\n";
    CHECK(scan(source, {PatternKind::MissingExceptionHandling}).empty());  // not flagged
    DetectorConfig prone;
    prone.assume_exception_prone = true;
    CHECK(scan(source, {PatternKind::MissingExceptionHandling}, prone).size() == 1);
    // builtins do not count as failure-prone user calls
    CHECK(scan("for j in jobs:\n    print(j)\n", {PatternKind::MissingExceptionHandling}, prone).empty());
    // a try around the loop satisfies the rule
    std::string wrapped =
        "try:\n"
        "    for job in jobs:\n"
        "        send_job(job)\n"
        "except OSError:\n"
        "    pass\n";
    CHECK(scan(wrapped, {PatternKind::MissingExceptionHandling}, prone).empty());
}

TEST_CASE("invariant recompute ignores loop-dependent and impure expressions") {
    CHECK(scan("for i in range(5):\n    x = i * 2\n", {PatternKind::InvariantRecompute}).empty());
    CHECK(scan("for i in range(5):\n    x = fetch()\n", {PatternKind::InvariantRecompute}).empty());
    std::vector<Finding> findings = scan(
        "base = 10\n"
        "for i in range(5):\n"
        "    x = base * 3 + len(table)\n",
        {PatternKind::InvariantRecompute});
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].line == 3);
}

TEST_CASE("string concat requires a string-literal initializer") {
    CHECK(scan("total = 0\nfor i in range(5):\n    total += i\n",
               {PatternKind::StringConcatInLoop})
              .empty());
}

TEST_CASE("membership check against a set initializer is fine") {
    std::string source =
        "codes = set(range(100))\n"
        "for c in probes:\n"
        "    if c in codes:\n"
        "        hit(c)\n";
    CHECK(scan(source, {PatternKind::InefficientMembershipCheck}).empty());
}

TEST_CASE("unused accumulation is silenced by a read after the loop") {
    std::string read_after =
        "acc = []\n"
        "for i in range(200000):\n"
        "    acc.append(i * i)\n"
        "print(sum(acc))\n";
    CHECK(scan(read_after, {PatternKind::UnusedAccumulation}).empty());
}

TEST_CASE("range-len loops that write through the index are legitimate") {
    std::string writes =
        "data = list(range(10))\n"
        "for i in range(len(data)):\n"
        "    data[i] = data[i] + 1\n";
    CHECK(scan(writes, {PatternKind::RangeLenAntipattern}).empty());
}

TEST_CASE("criteria exist for all kinds and anchor text is non-empty") {
    for (PatternKind kind : all_kinds()) {
        const RuleCriteria& c = detector_criteria(kind);
        CHECK(c.kind == kind);
        CHECK(!c.criterion.empty());
        CHECK(!c.anchor.empty());
        CHECK(!c.limitations.empty());
    }
    CHECK(detector_criteria(PatternKind::InfiniteLoop).criterion.find("no mutation of condition variables") !=
          std::string::npos);
    CHECK(detector_criteria(PatternKind::OffByOne).limitations.find("intent") != std::string::npos);
    CHECK(detector_criteria(PatternKind::RangeLenAntipattern).criterion.find("range(len(") !=
          std::string::npos);
}

TEST_CASE("seed corpus soundness: every vulnerable sample fires exactly its annotation") {
    for (std::uint64_t seed : {1ull, 5ull}) {
        auto samples = generate_seed_corpus(
            {Category::LoopControlLogic, Category::SecurityInLoop, Category::ResourceEfficiency},
            seed);
        for (const CodeSample& sample : samples) {
            CAPTURE(seed);
            CAPTURE(sample.sample_id);
            auto parsed = parse_ok(sample.sample_id, sample.source);
            std::vector<Finding> findings =
                run_detectors(*parsed, extract_loops(*parsed), all_enabled(), {});
            if (sample.annotations.empty()) {
                CHECK(findings.empty());
            } else {
                REQUIRE(findings.size() == 1);
                CHECK(findings[0].kind == sample.annotations[0].kind);
                CHECK(findings[0].line == sample.annotations[0].line_start);
            }
        }
    }
}
