// loopscan: loop vulnerability scanner for Python sources.
//
// Subcommands: scan, llm-scan, eval, gen-corpus, report.
// Precedence of settings: defaults < config file < LOOPSCAN_* env < flags.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "loopscan/commands.hpp"

namespace {

using loopscan::RunConfig;

struct FlagValues {
    std::optional<std::string> corpus;
    std::optional<std::string> categories;
    std::optional<std::string> endpoint_url;
    std::optional<std::string> model;
    std::optional<double> temperature;
    std::optional<int> max_tokens;
    std::optional<int> timeout_ms;
    std::optional<int> retries;
    std::optional<int> context_lines;
    std::optional<int> line_tolerance;
    std::optional<std::string> granularity;
    std::optional<std::string> record;
    std::optional<std::string> replay;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> workers;
    bool whole_file = false;
    bool assume_exception_prone = false;
    bool dump_prompts = false;
};

void add_common_flags(CLI::App* cmd, FlagValues& flags) {
    cmd->add_option("--corpus", flags.corpus, "corpus JSON file");
    cmd->add_option("--categories", flags.categories,
                    "comma list: loop_control_logic,security_in_loop,resource_efficiency");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--seed", flags.seed, "seed for generated corpora");
}

void apply_flags(RunConfig& config, const FlagValues& flags) {
    using loopscan::apply_config_entry;
    if (flags.corpus) apply_config_entry(config, "corpus", *flags.corpus);
    if (flags.categories) apply_config_entry(config, "categories", *flags.categories);
    if (flags.endpoint_url) apply_config_entry(config, "endpoint_url", *flags.endpoint_url);
    if (flags.model) apply_config_entry(config, "model", *flags.model);
    if (flags.temperature) apply_config_entry(config, "temperature", std::to_string(*flags.temperature));
    if (flags.max_tokens) apply_config_entry(config, "max_tokens", std::to_string(*flags.max_tokens));
    if (flags.timeout_ms) apply_config_entry(config, "timeout_ms", std::to_string(*flags.timeout_ms));
    if (flags.retries) apply_config_entry(config, "retries", std::to_string(*flags.retries));
    if (flags.context_lines) {
        apply_config_entry(config, "context_lines", std::to_string(*flags.context_lines));
    }
    if (flags.line_tolerance) {
        apply_config_entry(config, "line_tolerance", std::to_string(*flags.line_tolerance));
    }
    if (flags.granularity) apply_config_entry(config, "granularity", *flags.granularity);
    if (flags.record) apply_config_entry(config, "record", *flags.record);
    if (flags.replay) apply_config_entry(config, "replay", *flags.replay);
    if (flags.seed) apply_config_entry(config, "seed", std::to_string(*flags.seed));
    if (flags.out) apply_config_entry(config, "out", *flags.out);
    if (flags.format) apply_config_entry(config, "format", *flags.format);
    if (flags.workers) apply_config_entry(config, "workers", std::to_string(*flags.workers));
    if (flags.whole_file) apply_config_entry(config, "whole_file", "true");
    if (flags.dump_prompts) apply_config_entry(config, "dump_prompts", "true");
    if (flags.assume_exception_prone) {
        apply_config_entry(config, "assume_exception_prone", "true");
    }
}

void apply_env(RunConfig& config) {
    if (const char* url = std::getenv("LOOPSCAN_ENDPOINT_URL")) {
        loopscan::apply_config_entry(config, "endpoint_url", url);
    }
    if (const char* model = std::getenv("LOOPSCAN_MODEL")) {
        loopscan::apply_config_entry(config, "model", model);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loopscan: rule-based and LLM-assisted loop vulnerability scanning for Python"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "key=value config file; flags win over it");

    FlagValues flags;
    std::string findings_path;
    std::string report_json_path;

    CLI::App* scan = app.add_subcommand("scan", "run the deterministic rule engine over a corpus");
    add_common_flags(scan, flags);
    scan->add_option("--workers", flags.workers, "scan pool size (default: hardware threads)");
    scan->add_flag("--assume-exception-prone", flags.assume_exception_prone,
                   "treat every sample as exception-prone for the missing-exception rule");

    CLI::App* llm_scan = app.add_subcommand("llm-scan", "scan via a local chat-completions model");
    add_common_flags(llm_scan, flags);
    llm_scan->add_option("--endpoint-url", flags.endpoint_url, "chat-completions base URL");
    llm_scan->add_option("--model", flags.model, "model name sent to the endpoint");
    llm_scan->add_option("--temperature", flags.temperature, "sampling temperature (default 0)");
    llm_scan->add_option("--max-tokens", flags.max_tokens, "completion token cap");
    llm_scan->add_option("--timeout-ms", flags.timeout_ms, "request timeout in ms");
    llm_scan->add_option("--retries", flags.retries, "retries on transient failures");
    llm_scan->add_option("--context-lines", flags.context_lines,
                         "context lines around each loop block");
    llm_scan->add_option("--record", flags.record, "run log destination (JSONL)");
    llm_scan->add_option("--replay", flags.replay, "replay a recorded run log");
    llm_scan->add_flag("--whole-file", flags.whole_file,
                       "prompt with whole files instead of per-loop blocks");
    llm_scan->add_flag("--dump-prompts", flags.dump_prompts,
                       "write each rendered prompt to <out>/prompts/ for audit");

    CLI::App* eval = app.add_subcommand("eval", "score findings against corpus ground truth");
    add_common_flags(eval, flags);
    eval->add_option("--findings", findings_path, "findings JSON file")->required();
    eval->add_option("--line-tolerance", flags.line_tolerance, "matching line tolerance");
    eval->add_option("--granularity", flags.granularity, "pattern_kind or category");
    eval->add_option("--format", flags.format, "report format: json or md (both are written)");

    CLI::App* gen = app.add_subcommand("gen-corpus", "generate the seeded annotated corpus");
    add_common_flags(gen, flags);

    CLI::App* report = app.add_subcommand("report", "render a report JSON as Markdown");
    report->add_option("--report-json", report_json_path, "existing report.json")->required();
    report->add_option("--out", flags.out, "output directory");

    CLI11_PARSE(app, argc, argv);

    RunConfig config;
    try {
        if (!config_file.empty()) config = loopscan::parse_config_file(config_file);
        apply_env(config);
        apply_flags(config, flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return loopscan::kExitError;
    }

    try {
        if (scan->parsed()) return loopscan::cmd_scan(config, std::cerr);
        if (llm_scan->parsed()) return loopscan::cmd_llm_scan(config, std::cerr);
        if (eval->parsed()) return loopscan::cmd_eval(config, findings_path, std::cerr);
        if (gen->parsed()) return loopscan::cmd_gen_corpus(config, std::cerr);
        if (report->parsed()) return loopscan::cmd_report(config, report_json_path, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return loopscan::kExitError;
    }
    return loopscan::kExitError;
}
