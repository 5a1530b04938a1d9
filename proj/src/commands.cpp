#include "loopscan/commands.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "loopscan/corpus.hpp"
#include "loopscan/extractor.hpp"
#include "loopscan/findings_io.hpp"
#include "loopscan/prompt.hpp"
#include "loopscan/response_parser.hpp"

namespace loopscan {

namespace {

using nlohmann::json;

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

int kind_order(PatternKind kind) {
    int i = 0;
    for (const auto& entry : catalog()) {
        if (entry.kind == kind) return i;
        ++i;
    }
    return i;
}

void sort_findings(std::vector<Finding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.sample_id != b.sample_id) return a.sample_id < b.sample_id;
        if (a.line != b.line) return a.line < b.line;
        return kind_order(a.kind) < kind_order(b.kind);
    });
}

// per-sample (line, kind) dedup, keeping the first occurrence
void dedupe_findings(std::vector<Finding>& findings) {
    std::set<std::tuple<std::string, int, PatternKind>> seen;
    std::vector<Finding> kept;
    kept.reserve(findings.size());
    for (auto& f : findings) {
        if (seen.insert({f.sample_id, f.line, f.kind}).second) kept.push_back(std::move(f));
    }
    findings = std::move(kept);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

ModelEndpoint& ensure_endpoint(RunConfig& config) {
    if (!config.endpoint) config.endpoint = ModelEndpoint{};
    return *config.endpoint;
}

}  // namespace

std::set<Category> effective_categories(const RunConfig& config) {
    if (!config.categories.empty()) return config.categories;
    return {Category::LoopControlLogic, Category::SecurityInLoop, Category::ResourceEfficiency};
}

std::set<PatternKind> enabled_kinds(const RunConfig& config) {
    std::set<PatternKind> kinds;
    for (Category category : effective_categories(config)) {
        for (PatternKind kind : kinds_in_category(category)) kinds.insert(kind);
    }
    return kinds;
}

std::string config_fingerprint(const RunConfig& config) {
    std::ostringstream canon;
    canon << "corpus=" << config.corpus_path.string() << ';';
    canon << "categories=";
    for (Category c : effective_categories(config)) canon << category_id(c) << ',';
    canon << ";tol=" << config.policy.line_tolerance;
    canon << ";gran="
          << (config.policy.granularity == MatchPolicy::Granularity::PatternKind ? "kind" : "category");
    canon << ";ctx=" << config.context_lines;
    canon << ";whole=" << config.whole_file;
    canon << ";seed=" << config.seed;
    if (config.endpoint) {
        canon << ";endpoint=" << config.endpoint->base_url << '|' << config.endpoint->model_name
              << '|' << config.endpoint->temperature << '|' << config.endpoint->max_tokens;
    }
    if (config.replay_path) canon << ";replay=" << config.replay_path->string();
    canon << ";prone=" << config.detectors.assume_exception_prone;
    for (const auto& lex :
         {config.detectors.secret_lexicon, config.detectors.destructive_lexicon,
          config.detectors.auth_lexicon, config.detectors.user_input_lexicon,
          config.detectors.validation_lexicon}) {
        canon << ";lex=";
        for (const auto& word : lex) canon << word << ',';
    }
    return to_hex(fnv1a(canon.str()));
}

void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "corpus") {
        config.corpus_path = value;
    } else if (key == "categories") {
        config.categories.clear();
        for (const std::string& id : split_list(value)) {
            auto category = category_from_id(id);
            if (!category) throw std::invalid_argument("unknown category '" + id + "'");
            config.categories.insert(*category);
        }
    } else if (key == "endpoint_url") {
        ensure_endpoint(config).base_url = value;
    } else if (key == "model") {
        ensure_endpoint(config).model_name = value;
    } else if (key == "temperature") {
        ensure_endpoint(config).temperature = std::stod(value);
    } else if (key == "max_tokens") {
        ensure_endpoint(config).max_tokens = std::stoi(value);
    } else if (key == "timeout_ms") {
        ensure_endpoint(config).timeout_ms = std::stoi(value);
    } else if (key == "retries") {
        ensure_endpoint(config).retries = std::stoi(value);
    } else if (key == "context_lines") {
        config.context_lines = std::stoi(value);
    } else if (key == "line_tolerance") {
        config.policy.line_tolerance = std::stoi(value);
    } else if (key == "granularity") {
        if (value == "pattern_kind") {
            config.policy.granularity = MatchPolicy::Granularity::PatternKind;
        } else if (value == "category") {
            config.policy.granularity = MatchPolicy::Granularity::Category;
        } else {
            throw std::invalid_argument("granularity must be pattern_kind or category");
        }
    } else if (key == "record") {
        config.record_path = value;
    } else if (key == "replay") {
        config.replay_path = value;
    } else if (key == "seed") {
        config.seed = std::stoull(value);
    } else if (key == "out") {
        config.output_dir = value;
    } else if (key == "format") {
        config.report_format = value;
    } else if (key == "whole_file") {
        config.whole_file = value == "true" || value == "1";
    } else if (key == "workers") {
        config.workers = std::stoi(value);
    } else if (key == "dump_prompts") {
        config.dump_prompts = value == "true" || value == "1";
    } else if (key == "assume_exception_prone") {
        config.detectors.assume_exception_prone = value == "true" || value == "1";
    } else if (key == "secret_lexicon") {
        config.detectors.secret_lexicon = split_list(value);
    } else if (key == "destructive_lexicon") {
        config.detectors.destructive_lexicon = split_list(value);
    } else if (key == "auth_lexicon") {
        config.detectors.auth_lexicon = split_list(value);
    } else if (key == "user_input_lexicon") {
        config.detectors.user_input_lexicon = split_list(value);
    } else if (key == "validation_lexicon") {
        config.detectors.validation_lexicon = split_list(value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path.string());
    RunConfig config;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            " is not 'key = value'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            size_t e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + " has no key");
        }
        apply_config_entry(config, key, value);
    }
    return config;
}

// ---------------------------------------------------------------------------

int cmd_scan(const RunConfig& config, std::ostream& log) {
    std::vector<CodeSample> samples;
    try {
        samples = load_corpus(config.corpus_path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::set<PatternKind> kinds = enabled_kinds(config);

    // samples are independent; scan with a bounded pool, merge in sample order
    std::vector<std::vector<Finding>> per_sample(samples.size());
    std::vector<std::string> per_sample_error(samples.size());
    std::atomic<size_t> cursor{0};
    auto work = [&]() {
        for (size_t i = cursor.fetch_add(1); i < samples.size(); i = cursor.fetch_add(1)) {
            const CodeSample& sample = samples[i];
            ParseResult parsed = parse_source(sample);
            if (!parsed.ok()) {
                std::ostringstream os;
                os << "sample '" << sample.sample_id << "' line " << parsed.error->line << " col "
                   << parsed.error->column << ": " << parsed.error->message;
                per_sample_error[i] = os.str();
                continue;
            }
            per_sample[i] = run_detectors(*parsed.source, extract_loops(*parsed.source), kinds,
                                          config.detectors);
        }
    };
    size_t pool = config.workers > 0
                      ? static_cast<size_t>(config.workers)
                      : std::max<size_t>(1, std::thread::hardware_concurrency());
    pool = std::min(pool, std::max<size_t>(1, samples.size()));
    std::vector<std::thread> threads;
    for (size_t t = 1; t < pool; ++t) threads.emplace_back(work);
    work();
    for (std::thread& t : threads) t.join();

    std::vector<Finding> findings;
    int failed_samples = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!per_sample_error[i].empty()) {
            ++failed_samples;
            log << "error: " << per_sample_error[i] << "\n";
            continue;
        }
        findings.insert(findings.end(), per_sample[i].begin(), per_sample[i].end());
    }
    sort_findings(findings);
    dedupe_findings(findings);

    std::filesystem::create_directories(config.output_dir);
    std::filesystem::path out_path = config.output_dir / "findings.json";
    write_findings(out_path, findings, config_fingerprint(config));
    log << "scanned " << samples.size() << " samples (" << failed_samples << " failed), "
        << findings.size() << " findings -> " << out_path.string() << "\n";
    if (failed_samples > 0) return kExitError;
    return findings.empty() ? kExitClean : kExitFindings;
}

int cmd_llm_scan(const RunConfig& config, std::ostream& log,
                 std::shared_ptr<ChatBackend> backend_override) {
    std::vector<CodeSample> samples;
    try {
        samples = load_corpus(config.corpus_path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }

    ModelEndpoint endpoint = config.endpoint.value_or(ModelEndpoint{});
    std::shared_ptr<ChatBackend> backend = backend_override;
    if (!backend && config.replay_path) {
        try {
            auto recorded = load_run(*config.replay_path);
            if (!recorded.empty()) endpoint.model_name = recorded.front().model_name;
            backend = std::make_shared<ReplayChatBackend>(*config.replay_path);
        } catch (const std::exception& e) {
            log << "error: " << e.what() << "\n";
            return kExitError;
        }
    }
    if (!backend && config.endpoint) backend = std::make_shared<HttpChatBackend>(endpoint);
    bool dump_only = !backend && config.dump_prompts;
    if (!backend && !dump_only) {
        log << "error: llm-scan needs an endpoint, a replay log, or an injected backend\n";
        return kExitError;
    }
    ChatClient client(endpoint, backend);

    std::filesystem::path prompt_dir = config.output_dir / "prompts";
    if (config.dump_prompts) std::filesystem::create_directories(prompt_dir);
    auto dump_prompt = [&](const CodeBlock& block, size_t block_index, Category category,
                           const RenderedPrompt& prompt) {
        if (!config.dump_prompts) return;
        std::filesystem::path file =
            prompt_dir / (block.sample_id + "_b" + std::to_string(block_index) + "_" +
                          std::string(category_id(category)) + ".txt");
        std::ofstream out(file, std::ios::binary);
        out << "# spec_fingerprint: " << prompt.spec_fingerprint << "\n"
            << "## system\n"
            << prompt.system_text << "\n## user\n"
            << prompt.user_text;
    };

    std::vector<Finding> findings;
    std::vector<Rejection> rejections;
    std::vector<ChatExchange> exchanges;
    int failures = 0;
    int blocks_total = 0;

    for (const CodeSample& sample : samples) {
        ParseResult parsed = parse_source(sample);
        if (!parsed.ok()) {
            ++failures;
            log << "error: sample '" << sample.sample_id << "': " << parsed.error->message << "\n";
            continue;
        }
        std::vector<CodeBlock> blocks;
        if (config.whole_file) {
            blocks.push_back(whole_file_block(sample));
        } else {
            for (const LoopRegion& region : extract_loops(*parsed.source)) {
                blocks.push_back(slice_code_block(sample, region, config.context_lines));
            }
        }
        for (Category category : effective_categories(config)) {
            PromptSpec spec = prompt_spec_for_category(category);
            spec.python_version = sample.min_python_version;
            for (size_t block_index = 0; block_index < blocks.size(); ++block_index) {
                const CodeBlock& block = blocks[block_index];
                ++blocks_total;
                RenderedPrompt prompt = render_prompt(spec, block);
                dump_prompt(block, block_index, category, prompt);
                if (dump_only) continue;
                ChatExchange exchange;
                try {
                    exchange = client.complete(prompt.system_text, prompt.user_text);
                } catch (const std::exception& e) {
                    ++failures;
                    log << "error: sample '" << sample.sample_id << "' block at line "
                        << block.first_line << ": " << e.what() << "\n";
                    continue;
                }
                exchanges.push_back(exchange);
                ParsedResponse parsed_response =
                    parse_findings(exchange.raw_response, block, spec, endpoint.model_name);
                if (!parsed_response.sentinel_seen) {
                    log << "warning: sample '" << sample.sample_id
                        << "': completion lacked the terminator line\n";
                }
                findings.insert(findings.end(), parsed_response.findings.begin(),
                                parsed_response.findings.end());
                rejections.insert(rejections.end(), parsed_response.rejections.begin(),
                                  parsed_response.rejections.end());
            }
        }
    }

    if (dump_only) {
        log << "llm-scan: dumped prompts for " << blocks_total << " blocks -> "
            << prompt_dir.string() << "\n";
        return kExitClean;
    }
    sort_findings(findings);
    dedupe_findings(findings);

    std::filesystem::create_directories(config.output_dir);
    std::string fingerprint = config_fingerprint(config);
    std::filesystem::path findings_path = config.output_dir / "findings.json";
    write_findings(findings_path, findings, fingerprint);
    write_rejections(config.output_dir / "rejections.json", rejections, fingerprint);

    // raw exchanges go to the run log; skipped when it would clobber the replay source
    std::filesystem::path log_path = config.record_path.value_or(config.output_dir / "run_log.jsonl");
    bool recording = !(config.replay_path && (!config.record_path || *config.record_path == *config.replay_path));
    if (recording) record_run(exchanges, log_path);

    log << "llm-scan: " << blocks_total << " prompts over " << samples.size() << " samples, "
        << findings.size() << " findings, " << rejections.size() << " rejections, " << failures
        << " failures -> " << findings_path.string() << "\n";
    if (failures > 0) return kExitError;
    return findings.empty() ? kExitClean : kExitFindings;
}

int cmd_eval(const RunConfig& config, const std::filesystem::path& findings_path,
             std::ostream& log) {
    std::vector<CodeSample> samples;
    FindingsFile findings_file;
    try {
        samples = load_corpus(config.corpus_path);
        findings_file = read_findings(findings_path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::map<std::string, const CodeSample*> by_id;
    for (const CodeSample& sample : samples) by_id[sample.sample_id] = &sample;
    for (const Finding& f : findings_file.findings) {
        if (!by_id.count(f.sample_id)) {
            log << "error: findings reference unknown sample_id '" << f.sample_id << "'\n";
            return kExitError;
        }
    }

    std::vector<Finding> merged = findings_file.findings;
    sort_findings(merged);
    dedupe_findings(merged);

    std::vector<ReportEntry> entries;
    for (Category category : effective_categories(config)) {
        for (const CodeSample& sample : samples) {
            std::vector<Finding> sample_findings;
            for (const Finding& f : merged) {
                if (f.sample_id == sample.sample_id && f.category == category) {
                    sample_findings.push_back(f);
                }
            }
            std::vector<GroundTruthAnnotation> truth;
            for (const GroundTruthAnnotation& ann : sample.annotations) {
                if (ann.category == category) truth.push_back(ann);
            }
            if (sample_findings.empty() && truth.empty()) continue;  // nothing evaluated here
            MatchResult match = match_findings(sample_findings, truth, config.policy);
            entries.push_back({sample.sample_id, category, match.counts});
        }
    }

    EvalReport report = build_report(entries, config.policy, config_fingerprint(config));
    std::filesystem::create_directories(config.output_dir);
    std::filesystem::path json_path = config.output_dir / "report.json";
    std::filesystem::path md_path = config.output_dir / "report.md";
    {
        std::ofstream out(json_path, std::ios::binary);
        out << report_to_json(report);
    }
    {
        std::ofstream out(md_path, std::ios::binary);
        out << report_to_markdown(report);
    }
    log << "eval: " << entries.size() << " sample rows -> " << json_path.string() << ", "
        << md_path.string() << "\n";
    return kExitClean;
}

int cmd_gen_corpus(const RunConfig& config, std::ostream& log) {
    std::vector<CodeSample> samples;
    try {
        samples = generate_seed_corpus(effective_categories(config), config.seed);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::filesystem::create_directories(config.output_dir);
    std::filesystem::path out_path = config.output_dir / "corpus.json";
    save_corpus(samples, out_path, config_fingerprint(config));
    log << "gen-corpus: " << samples.size() << " samples (seed " << config.seed << ") -> "
        << out_path.string() << "\n";
    return kExitClean;
}

EvalReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("report file not found: " + path.string());
    json doc;
    in >> doc;
    if (!doc.is_object() || doc.value("version", 0) != 1) {
        throw std::invalid_argument("report schema version mismatch");
    }
    EvalReport report;
    report.config_fingerprint = doc.value("config_fingerprint", "");
    if (doc.contains("policy")) {
        report.policy.line_tolerance = doc["policy"].value("line_tolerance", 1);
        report.policy.granularity = doc["policy"].value("granularity", "pattern_kind") == "category"
                                        ? MatchPolicy::Granularity::Category
                                        : MatchPolicy::Granularity::PatternKind;
    }
    for (const auto& c : doc.value("categories", json::array())) {
        CategoryReport cat;
        auto category = category_from_id(c.value("category", ""));
        if (!category) throw std::invalid_argument("report names an unknown category");
        cat.category = *category;
        for (const auto& r : c.value("rows", json::array())) {
            SampleRow row;
            row.sample_id = r.value("sample_id", "");
            row.counts = {r.value("tp", 0), r.value("fp", 0), r.value("fn", 0)};
            row.metrics = {r.value("precision", 0.0), r.value("recall", 0.0), r.value("f1", 0.0)};
            cat.rows.push_back(std::move(row));
        }
        if (c.contains("average")) {
            cat.average = {c["average"].value("precision", 0.0), c["average"].value("recall", 0.0),
                           c["average"].value("f1", 0.0)};
        }
        report.categories.push_back(std::move(cat));
    }
    return report;
}

int cmd_report(const RunConfig& config, const std::filesystem::path& report_json_path,
               std::ostream& log) {
    EvalReport report;
    try {
        report = read_report_json(report_json_path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitError;
    }
    std::filesystem::create_directories(config.output_dir);
    std::filesystem::path md_path = config.output_dir / "report.md";
    std::ofstream out(md_path, std::ios::binary);
    out << report_to_markdown(report);
    log << "report: " << md_path.string() << "\n";
    return kExitClean;
}

}  // namespace loopscan
