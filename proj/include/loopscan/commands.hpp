#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "loopscan/detectors.hpp"
#include "loopscan/evaluation.hpp"
#include "loopscan/llm_client.hpp"

namespace loopscan {

// Exit codes follow linter convention: 0 clean, 1 operational error, 2 findings.
inline constexpr int kExitClean = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFindings = 2;

struct RunConfig {
    std::filesystem::path corpus_path;
    std::set<Category> categories;  // empty selects all three
    MatchPolicy policy;
    int context_lines = kDefaultContextLines;
    bool whole_file = false;  // analyze whole files instead of per-loop blocks
    std::filesystem::path output_dir = ".";
    std::optional<ModelEndpoint> endpoint;
    std::optional<std::filesystem::path> record_path;
    std::optional<std::filesystem::path> replay_path;
    std::uint64_t seed = 1;
    DetectorConfig detectors;
    std::string report_format = "json";  // json | md (md implies both)
    int workers = 0;                     // rule-scan pool size; 0 = hardware default
    bool dump_prompts = false;           // write rendered prompts for audit
};

std::set<Category> effective_categories(const RunConfig& config);
std::set<PatternKind> enabled_kinds(const RunConfig& config);

// Stable hash over everything that shapes the outputs; embedded in every
// output file.
std::string config_fingerprint(const RunConfig& config);

// Key-value config file ("key = value", '#' comments). Unknown keys fail.
RunConfig parse_config_file(const std::filesystem::path& path);
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

// scan: rule engine over the corpus -> findings.json
int cmd_scan(const RunConfig& config, std::ostream& log);

// llm-scan: prompts + completions -> findings.json, rejections.json, run log.
// Tests may inject a backend; otherwise replay_path or endpoint decides.
int cmd_llm_scan(const RunConfig& config, std::ostream& log,
                 std::shared_ptr<ChatBackend> backend_override = nullptr);

// eval: findings vs ground truth -> report.json + report.md
int cmd_eval(const RunConfig& config, const std::filesystem::path& findings_path,
             std::ostream& log);

// gen-corpus: seeded samples -> corpus.json
int cmd_gen_corpus(const RunConfig& config, std::ostream& log);

// report: re-render an existing report.json as Markdown
int cmd_report(const RunConfig& config, const std::filesystem::path& report_json_path,
               std::ostream& log);

EvalReport read_report_json(const std::filesystem::path& path);

}  // namespace loopscan
