#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <unistd.h>

#include "loopscan/commands.hpp"
#include "loopscan/corpus.hpp"
#include "loopscan/extractor.hpp"
#include "loopscan/findings_io.hpp"

using namespace loopscan;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("loopscan_cmd_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

RunConfig base_config(const TempDir& dir) {
    RunConfig config;
    config.output_dir = dir.path;
    config.corpus_path = dir.path / "corpus.json";
    return config;
}

RunConfig seeded_config(const TempDir& dir, std::uint64_t seed = 1) {
    RunConfig config = base_config(dir);
    config.seed = seed;
    std::ostringstream sink;
    REQUIRE(cmd_gen_corpus(config, sink) == kExitClean);
    return config;
}

// scripted oracle that answers each prompt with the sample's own annotations,
// restricted to the kinds the system prompt asked about
std::shared_ptr<ScriptedChatBackend> oracle_backend(const std::vector<CodeSample>& samples) {
    return std::make_shared<ScriptedChatBackend>(
        [samples](const std::string& system_text, const std::string& user_text) {
            static const std::regex kPreamble(R"(lines (\d+)\.\.(\d+) of sample ([A-Za-z0-9_\-]+))");
            std::smatch m;
            std::string reply;
            if (std::regex_search(user_text, m, kPreamble)) {
                int first = std::stoi(m[1].str());
                int last = std::stoi(m[2].str());
                std::string sample_id = m[3].str();
                for (const CodeSample& sample : samples) {
                    if (sample.sample_id != sample_id) continue;
                    for (const auto& ann : sample.annotations) {
                        if (ann.line_start < first || ann.line_start > last) continue;
                        std::string id(kind_id(ann.kind));
                        if (system_text.find(id) == std::string::npos) continue;
                        reply += "{\"line\": " + std::to_string(ann.line_start) +
                                 ", \"kind\": \"" + id + "\", \"explanation\": \"oracle\"}\n";
                    }
                }
            }
            reply += "END_OF_FINDINGS\n";
            return reply;
        });
}

}  // namespace

TEST_CASE("scan over the seed corpus flags exactly the vulnerable samples") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    std::ostringstream log;
    int exit_code = cmd_scan(config, log);
    CHECK(exit_code == kExitFindings);

    FindingsFile findings = read_findings(dir.path / "findings.json");
    CHECK(findings.findings.size() == 25);
    CHECK(!findings.config_fingerprint.empty());
    for (const Finding& f : findings.findings) {
        CHECK(f.sample_id.find("_vuln") != std::string::npos);
        CHECK(f.origin.type == FindingOrigin::Type::Rule);
    }
}

TEST_CASE("scan of an empty corpus writes an empty findings file and exits clean") {
    TempDir dir;
    RunConfig config = base_config(dir);
    save_corpus({}, config.corpus_path);
    std::ostringstream log;
    CHECK(cmd_scan(config, log) == kExitClean);
    FindingsFile findings = read_findings(dir.path / "findings.json");
    CHECK(findings.findings.empty());
}

TEST_CASE("scan continues past an invalid sample and exits with an error") {
    TempDir dir;
    RunConfig config = base_config(dir);
    CodeSample good;
    good.sample_id = "good";
    good.source = "i = 0\nwhile i < 5:\n    print(i)\n";
    CodeSample bad;
    bad.sample_id = "broken";
    bad.source = "while True print('x')\n";
    save_corpus({good, bad}, config.corpus_path);

    std::ostringstream log;
    CHECK(cmd_scan(config, log) == kExitError);
    CHECK(log.str().find("broken") != std::string::npos);
    FindingsFile findings = read_findings(dir.path / "findings.json");
    CHECK(findings.findings.size() == 1);  // the good sample was still scanned
}

TEST_CASE("rule scan then eval gives 1.00 everywhere on the seed corpus") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_scan(config, log) == kExitFindings);
    REQUIRE(cmd_eval(config, dir.path / "findings.json", log) == kExitClean);

    EvalReport report = read_report_json(dir.path / "report.json");
    REQUIRE(report.categories.size() == 3);
    for (const CategoryReport& cat : report.categories) {
        // one row per vulnerable sample; clean samples have nothing to evaluate
        CHECK(cat.rows.size() == kinds_in_category(cat.category).size());
        for (const SampleRow& row : cat.rows) {
            CAPTURE(row.sample_id);
            CHECK(row.metrics.precision == doctest::Approx(1.0));
            CHECK(row.metrics.recall == doctest::Approx(1.0));
            CHECK(row.metrics.f1 == doctest::Approx(1.0));
        }
        CHECK(cat.average.precision == doctest::Approx(1.0));
        CHECK(cat.average.recall == doctest::Approx(1.0));
        CHECK(cat.average.f1 == doctest::Approx(1.0));
    }
}

TEST_CASE("llm-scan with the oracle mock reproduces the ground truth") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    auto samples = load_corpus(config.corpus_path);
    std::ostringstream log;
    REQUIRE(cmd_llm_scan(config, log, oracle_backend(samples)) == kExitFindings);

    FindingsFile findings = read_findings(dir.path / "findings.json");
    CHECK(findings.findings.size() == 25);
    for (const Finding& f : findings.findings) {
        CHECK(f.origin.type == FindingOrigin::Type::Model);
    }

    REQUIRE(cmd_eval(config, dir.path / "findings.json", log) == kExitClean);
    EvalReport report = read_report_json(dir.path / "report.json");
    for (const CategoryReport& cat : report.categories) {
        for (const SampleRow& row : cat.rows) {
            CHECK(row.metrics.f1 == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("hallucinating mock yields one rejection per block and clean FP counts") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    config.categories = {Category::LoopControlLogic};
    auto samples = load_corpus(config.corpus_path);

    // one in-range and one out-of-range record per block
    auto mock = std::make_shared<ScriptedChatBackend>(
        [](const std::string& system_text, const std::string& user_text) {
            static const std::regex kPreamble(R"(lines (\d+)\.\.(\d+) of sample)");
            std::smatch m;
            std::regex_search(user_text, m, kPreamble);
            int first = std::stoi(m[1].str());
            int last = std::stoi(m[2].str());
            std::string kind = "infinite_loop";
            if (system_text.find(kind) == std::string::npos) kind = "hardcoded_secret";
            std::string reply;
            reply += "{\"line\": " + std::to_string(first) + ", \"kind\": \"" + kind +
                     "\", \"explanation\": \"in range\"}\n";
            reply += "{\"line\": " + std::to_string(last + 1000) + ", \"kind\": \"" + kind +
                     "\", \"explanation\": \"out of range\"}\n";
            reply += "END_OF_FINDINGS\n";
            return reply;
        });

    std::ostringstream log;
    REQUIRE(cmd_llm_scan(config, log, mock) == kExitFindings);

    // expected: exactly one rejection per prompted block
    size_t expected_blocks = 0;
    for (const CodeSample& sample : samples) {
        ParseResult parsed = parse_source(sample);
        REQUIRE(parsed.ok());
        expected_blocks += extract_loops(*parsed.source).size();
    }
    std::string rejections_text = read_file(dir.path / "rejections.json");
    size_t count = 0, pos = 0;
    while ((pos = rejections_text.find("line_out_of_range", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == expected_blocks);

    // FP counts in eval are unaffected by the rejected records
    std::ostringstream log2;
    RunConfig clean_config = config;
    clean_config.output_dir = dir.path / "clean_mock";
    auto well_behaved = std::make_shared<ScriptedChatBackend>(
        [](const std::string& system_text, const std::string& user_text) {
            static const std::regex kPreamble(R"(lines (\d+)\.\.(\d+) of sample)");
            std::smatch m;
            std::regex_search(user_text, m, kPreamble);
            std::string kind = "infinite_loop";
            if (system_text.find(kind) == std::string::npos) kind = "hardcoded_secret";
            return "{\"line\": " + m[1].str() + ", \"kind\": \"" + kind +
                   "\", \"explanation\": \"in range\"}\nEND_OF_FINDINGS\n";
        });
    REQUIRE(cmd_llm_scan(clean_config, log2, well_behaved) == kExitFindings);
    REQUIRE(cmd_eval(config, dir.path / "findings.json", log2) == kExitClean);
    EvalReport with_hallucinations = read_report_json(dir.path / "report.json");
    REQUIRE(cmd_eval(clean_config, clean_config.output_dir / "findings.json", log2) == kExitClean);
    EvalReport without = read_report_json(clean_config.output_dir / "report.json");
    REQUIRE(with_hallucinations.categories.size() == without.categories.size());
    for (size_t c = 0; c < without.categories.size(); ++c) {
        const auto& lhs = with_hallucinations.categories[c];
        const auto& rhs = without.categories[c];
        REQUIRE(lhs.rows.size() == rhs.rows.size());
        for (size_t r = 0; r < rhs.rows.size(); ++r) {
            CHECK(lhs.rows[r].counts.fp == rhs.rows[r].counts.fp);
        }
    }
}

TEST_CASE("replay of a recorded run is byte-identical, twice") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    auto samples = load_corpus(config.corpus_path);
    config.record_path = dir.path / "run_log.jsonl";

    std::ostringstream log;
    REQUIRE(cmd_llm_scan(config, log, oracle_backend(samples)) == kExitFindings);
    std::string original_findings = read_file(dir.path / "findings.json");
    REQUIRE(cmd_eval(config, dir.path / "findings.json", log) == kExitClean);
    std::string original_report = read_file(dir.path / "report.json");

    RunConfig replay_config = config;
    replay_config.record_path.reset();
    replay_config.replay_path = dir.path / "run_log.jsonl";
    replay_config.output_dir = dir.path / "replay1";
    REQUIRE(cmd_llm_scan(replay_config, log) == kExitFindings);

    replay_config.output_dir = dir.path / "replay2";
    REQUIRE(cmd_llm_scan(replay_config, log) == kExitFindings);

    std::string replay1 = read_file(dir.path / "replay1" / "findings.json");
    std::string replay2 = read_file(dir.path / "replay2" / "findings.json");
    CHECK(replay1 == replay2);

    RunConfig eval1 = replay_config;
    eval1.output_dir = dir.path / "replay1";
    REQUIRE(cmd_eval(eval1, dir.path / "replay1" / "findings.json", log) == kExitClean);
    RunConfig eval2 = replay_config;
    eval2.output_dir = dir.path / "replay2";
    REQUIRE(cmd_eval(eval2, dir.path / "replay2" / "findings.json", log) == kExitClean);
    CHECK(read_file(dir.path / "replay1" / "report.json") ==
          read_file(dir.path / "replay2" / "report.json"));
}

TEST_CASE("eval rejects findings for unknown samples and bad versions") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    std::ostringstream log;

    Finding ghost;
    ghost.sample_id = "not_in_corpus";
    ghost.line = 1;
    ghost.kind = PatternKind::InfiniteLoop;
    ghost.category = Category::LoopControlLogic;
    write_findings(dir.path / "ghost.json", {ghost}, "f");
    CHECK(cmd_eval(config, dir.path / "ghost.json", log) == kExitError);

    std::ofstream bad(dir.path / "badversion.json");
    bad << R"({"version": 99, "findings": []})";
    bad.close();
    CHECK(cmd_eval(config, dir.path / "badversion.json", log) == kExitError);
}

TEST_CASE("config file parsing, overrides, and unknown keys") {
    TempDir dir;
    std::ofstream cfg(dir.path / "run.conf");
    cfg << "# run settings\n"
           "corpus = corpus.json\n"
           "categories = security_in_loop\n"
           "line_tolerance = 2\n"
           "endpoint_url = http://127.0.0.1:9999\n"
           "model = tiny-model\n"
           "seed = 9\n";
    cfg.close();

    RunConfig config = parse_config_file(dir.path / "run.conf");
    CHECK(config.corpus_path == "corpus.json");
    CHECK(config.categories == std::set<Category>{Category::SecurityInLoop});
    CHECK(config.policy.line_tolerance == 2);
    REQUIRE(config.endpoint.has_value());
    CHECK(config.endpoint->model_name == "tiny-model");
    CHECK(config.seed == 9);

    // flags win: apply a later override the way the CLI does
    apply_config_entry(config, "model", "bigger-model");
    CHECK(config.endpoint->model_name == "bigger-model");

    std::ofstream bad_file(dir.path / "bad.conf");
    bad_file << "no_such_key = 1\n";
    bad_file.close();
    CHECK_THROWS_AS(parse_config_file(dir.path / "bad.conf"), std::invalid_argument);
}

TEST_CASE("identical configs fingerprint identically, different ones differently") {
    TempDir dir;
    RunConfig a = base_config(dir);
    RunConfig b = base_config(dir);
    CHECK(config_fingerprint(a) == config_fingerprint(b));
    b.policy.line_tolerance = 3;
    CHECK(config_fingerprint(a) != config_fingerprint(b));
}

TEST_CASE("gen-corpus output is loadable and deterministic across runs") {
    TempDir dir;
    RunConfig config = base_config(dir);
    config.seed = 4;
    std::ostringstream log;
    REQUIRE(cmd_gen_corpus(config, log) == kExitClean);
    std::string first = read_file(dir.path / "corpus.json");
    REQUIRE(cmd_gen_corpus(config, log) == kExitClean);
    CHECK(first == read_file(dir.path / "corpus.json"));
    CHECK(load_corpus(dir.path / "corpus.json").size() == 50);
}

TEST_CASE("parallel scan matches single-threaded results") {
    TempDir dir;
    RunConfig config = seeded_config(dir, 11);
    std::ostringstream log;

    config.workers = 1;
    config.output_dir = dir.path / "one";
    REQUIRE(cmd_scan(config, log) == kExitFindings);
    config.workers = 8;
    config.output_dir = dir.path / "eight";
    REQUIRE(cmd_scan(config, log) == kExitFindings);

    // identical findings regardless of pool size (fingerprint differs by config)
    FindingsFile one = read_findings(dir.path / "one" / "findings.json");
    FindingsFile eight = read_findings(dir.path / "eight" / "findings.json");
    REQUIRE(one.findings.size() == eight.findings.size());
    for (size_t i = 0; i < one.findings.size(); ++i) {
        CHECK(one.findings[i].sample_id == eight.findings[i].sample_id);
        CHECK(one.findings[i].line == eight.findings[i].line);
        CHECK(one.findings[i].kind == eight.findings[i].kind);
    }
}

TEST_CASE("dump-prompts writes one audit file per block and category") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    config.categories = {Category::SecurityInLoop};
    config.dump_prompts = true;
    auto samples = load_corpus(config.corpus_path);
    std::ostringstream log;
    REQUIRE(cmd_llm_scan(config, log, oracle_backend(samples)) == kExitFindings);

    size_t expected_blocks = 0;
    for (const CodeSample& sample : samples) {
        ParseResult parsed = parse_source(sample);
        REQUIRE(parsed.ok());
        expected_blocks += extract_loops(*parsed.source).size();
    }
    size_t dumped = 0;
    for (const auto& entry : fs::directory_iterator(dir.path / "prompts")) {
        ++dumped;
        std::string text = read_file(entry.path());
        CHECK(text.find("[S1]") != std::string::npos);
        CHECK(text.find("## user") != std::string::npos);
    }
    CHECK(dumped == expected_blocks);

    // dump-only mode needs no backend at all
    RunConfig dump_only = config;
    dump_only.output_dir = dir.path / "audit";
    std::ostringstream log2;
    CHECK(cmd_llm_scan(dump_only, log2) == kExitClean);
    CHECK(fs::exists(dump_only.output_dir / "prompts"));
}

TEST_CASE("report command renders markdown from an existing report") {
    TempDir dir;
    RunConfig config = seeded_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_scan(config, log) == kExitFindings);
    REQUIRE(cmd_eval(config, dir.path / "findings.json", log) == kExitClean);

    RunConfig render = base_config(dir);
    render.output_dir = dir.path / "rendered";
    REQUIRE(cmd_report(render, dir.path / "report.json", log) == kExitClean);
    std::string md = read_file(dir.path / "rendered" / "report.md");
    CHECK(md.find("| Sample | TP | FP | FN |") != std::string::npos);
}
