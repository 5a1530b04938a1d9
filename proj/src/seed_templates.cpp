// Seeded sample templates, one vulnerable/clean pair per pattern kind.
// Perturbation swaps identifiers and constants only; the faulty structure and
// the annotation line of each template are fixed.

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopscan/corpus.hpp"

namespace loopscan {

namespace {

using Lines = std::vector<std::string>;

struct TemplateOutput {
    Lines vuln_lines;
    int ann_line = 1;
    std::string note;
    Lines clean_lines;
};

// mt19937_64 has a fully specified algorithm, so corpora are byte-identical
// across platforms. Distributions are avoided for the same reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

    std::string pick(const std::vector<std::string>& pool) { return pool[index(pool.size())]; }

    int between(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

private:
    std::mt19937_64 eng_;
};

std::string join(const Lines& lines) {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

TemplateOutput build_infinite_loop(Rng& rng) {
    TemplateOutput t;
    std::string counter = rng.pick({"cursor", "tick", "round_no", "step_count"});
    int bound = rng.between(3, 9);
    std::string msg = rng.pick({"waiting for threshold", "still polling", "spinning"});
    t.vuln_lines = {
        counter + " = 0",
        "while " + counter + " < " + std::to_string(bound) + ":",
        "    print(\"" + msg + "\")",
    };
    t.ann_line = 2;
    t.note = "loop condition variable is never updated and the body cannot exit";
    t.clean_lines = {
        counter + " = 0",
        "while " + counter + " < " + std::to_string(bound) + ":",
        "    print(\"" + msg + "\")",
        "    " + counter + " += 1",
    };
    return t;
}

TemplateOutput build_off_by_one(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"number", "value", "item_no"});
    int last = rng.between(4, 8);
    std::string intent = "# Intention: print numbers 1 to " + std::to_string(last);
    t.vuln_lines = {
        intent,
        "for " + var + " in range(1, " + std::to_string(last) + "):",
        "    print(" + var + ")",
    };
    t.ann_line = 2;
    t.note = "range stops one short of the stated endpoint";
    t.clean_lines = {
        intent,
        "for " + var + " in range(1, " + std::to_string(last + 1) + "):",
        "    print(" + var + ")",
    };
    return t;
}

TemplateOutput build_control_flow_misuse(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"value", "slot", "round_no"});
    int bound = rng.between(4, 9);
    int stop = rng.between(1, bound - 1);
    std::string msg = rng.pick({"completed without break", "exhausted all values"});
    t.vuln_lines = {
        "for " + var + " in range(" + std::to_string(bound) + "):",
        "    if " + var + " == " + std::to_string(stop) + ":",
        "        break",
        "else:",
        "    print(\"" + msg + "\")",
    };
    t.ann_line = 4;
    t.note = "the else clause can never run because the break always fires";
    t.clean_lines = {
        "entries = [" + std::to_string(rng.between(2, 5)) + ", " + std::to_string(rng.between(6, 9)) +
            ", " + std::to_string(rng.between(10, 14)) + "]",
        "wanted = entries[1]",
        "for " + var + " in entries:",
        "    if " + var + " == wanted:",
        "        break",
        "else:",
        "    print(\"" + msg + "\")",
    };
    return t;
}

TemplateOutput build_loop_var_reassignment(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"slot", "round_no", "position"});
    int bound = rng.between(3, 9);
    t.vuln_lines = {
        "for " + var + " in range(" + std::to_string(bound) + "):",
        "    print(" + var + ")",
        "    " + var + " = 0",
    };
    t.ann_line = 3;
    t.note = "the loop control variable is reset inside the body";
    t.clean_lines = {
        "for " + var + " in range(" + std::to_string(bound) + "):",
        "    print(" + var + ")",
    };
    return t;
}

TemplateOutput build_dead_unreachable_code(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"value", "slot", "sample_no"});
    int bound = rng.between(3, 7);
    int high = bound + rng.between(2, 9);
    int split = rng.between(1, bound - 1);
    t.vuln_lines = {
        "for " + var + " in range(" + std::to_string(bound) + "):",
        "    if " + var + " < " + std::to_string(high) + ":",
        "        print(\"expected path\")",
        "    else:",
        "        print(\"cannot happen\")",
    };
    t.ann_line = 5;
    t.note = "the else branch is unreachable for every value in the range";
    t.clean_lines = {
        "for " + var + " in range(" + std::to_string(bound) + "):",
        "    if " + var + " < " + std::to_string(split) + ":",
        "        print(\"low path\")",
        "    else:",
        "        print(\"high path\")",
    };
    return t;
}

TemplateOutput build_sensitive_data_logging(Rng& rng) {
    TemplateOutput t;
    std::string secret = rng.pick({"password", "api_token", "secret_key"});
    std::string var = rng.pick({"account", "member", "profile"});
    std::string collection = var + "s";
    t.vuln_lines = {
        "for " + var + " in " + collection + ":",
        "    " + secret + " = fetch_" + secret + "(" + var + ")",
        "    print(f\"[trace] authenticating {" + var + "} with {" + secret + "}\")",
    };
    t.ann_line = 3;
    t.note = "a credential is written to the log on every iteration";
    t.clean_lines = {
        "for " + var + " in " + collection + ":",
        "    " + secret + " = fetch_" + secret + "(" + var + ")",
        "    print(f\"[trace] authenticating {" + var + "}\")",
    };
    return t;
}

TemplateOutput build_timing_side_channel(Rng& rng) {
    TemplateOutput t;
    std::string probe = rng.pick({"admin", "root", "operator"});
    std::string delay = rng.pick({"0.25", "0.5", "0.75"});
    t.vuln_lines = {
        "import time",
        "",
        "for attempt in login_attempts:",
        "    if attempt[\"username\"] == \"" + probe + "\":",
        "        time.sleep(" + delay + ")",
        "    verify_login(attempt)",
    };
    t.ann_line = 5;
    t.note = "a data-dependent delay leaks which usernames exist";
    t.clean_lines = {
        "import time",
        "",
        "for attempt in login_attempts:",
        "    verify_login(attempt)",
        "    time.sleep(" + delay + ")",
    };
    return t;
}

TemplateOutput build_missing_authorization(Rng& rng) {
    TemplateOutput t;
    std::string destructive = rng.pick({"purge_records", "delete_entries", "remove_rows"});
    std::string action = rng.pick({"wipe_all", "erase_everything", "reset_store"});
    std::string guard = rng.pick({"check_permission", "is_admin"});
    t.vuln_lines = {
        "for request in incoming_requests:",
        "    if request[\"action\"] == \"" + action + "\":",
        "        " + destructive + "(request)",
    };
    t.ann_line = 3;
    t.note = "a destructive request is executed without any permission check";
    t.clean_lines = {
        "for request in incoming_requests:",
        "    if request[\"action\"] == \"" + action + "\" and " + guard + "(request):",
        "        " + destructive + "(request)",
    };
    return t;
}

TemplateOutput build_insecure_eval_injection(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"snippet", "fragment", "line_text"});
    std::string collection = rng.pick({"submitted_snippets", "posted_fragments"});
    std::string result = rng.pick({"outcome", "evaluated"});
    t.vuln_lines = {
        "for " + var + " in " + collection + ":",
        "    " + result + " = eval(" + var + ")",
        "    print(" + result + ")",
    };
    t.ann_line = 2;
    t.note = "untrusted text is handed to eval";
    t.clean_lines = {
        "import ast",
        "",
        "for " + var + " in " + collection + ":",
        "    " + result + " = ast.literal_eval(" + var + ")",
        "    print(" + result + ")",
    };
    return t;
}

TemplateOutput build_unvalidated_loop_bound(Rng& rng) {
    TemplateOutput t;
    std::string prompt = rng.pick({"How many rounds? ", "Iterations to run: "});
    std::string task = rng.pick({"run_task", "execute_round", "perform_step"});
    std::string var = rng.pick({"step", "round_no"});
    int cap = rng.between(1, 10) * 100;
    t.vuln_lines = {
        "for " + var + " in range(int(input(\"" + prompt + "\"))):",
        "    " + task + "(" + var + ")",
    };
    t.ann_line = 1;
    t.note = "the iteration count comes straight from user input with no clamp";
    t.clean_lines = {
        "requested = int(input(\"" + prompt + "\"))",
        "bounded = min(requested, " + std::to_string(cap) + ")",
        "for " + var + " in range(bounded):",
        "    " + task + "(" + var + ")",
    };
    return t;
}

TemplateOutput build_resource_exhaustion(Rng& rng) {
    TemplateOutput t;
    std::string payload = rng.pick({"X", "#", "0"});
    int mult = rng.between(4, 9) * 100000;
    std::string iterable = rng.pick({"user_supplied_filenames", "user_provided_paths"});
    std::string clean_iterable = rng.pick({"approved_filenames", "vetted_paths"});
    t.vuln_lines = {
        "for filename in " + iterable + ":",
        "    with open(filename, \"w\") as handle:",
        "        handle.write(\"" + payload + "\" * " + std::to_string(mult) + ")",
    };
    t.ann_line = 2;
    t.note = "files are mass-created from externally controlled names";
    t.clean_lines = {
        "for filename in " + clean_iterable + ":",
        "    with open(filename, \"w\") as handle:",
        "        handle.write(\"" + payload + "\" * " + std::to_string(mult) + ")",
    };
    return t;
}

TemplateOutput build_unencrypted_sensitive_storage(Rng& rng) {
    TemplateOutput t;
    std::string field = rng.pick({"ssn", "credential", "token"});
    std::string dump = rng.pick({"staging_dump.txt", "export_buffer.txt"});
    std::string sealer = rng.pick({"encrypt_record", "seal_record"});
    t.vuln_lines = {
        "for record in export_batch:",
        "    with open(\"" + dump + "\", \"a\") as sink:",
        "        sink.write(f\"{record['" + field + "']},{record['name']}\\n\")",
    };
    t.ann_line = 3;
    t.note = "sensitive fields are persisted in plaintext";
    t.clean_lines = {
        "for record in export_batch:",
        "    with open(\"" + dump + "\", \"a\") as sink:",
        "        sink.write(" + sealer + "(record))",
    };
    return t;
}

TemplateOutput build_hardcoded_secret(Rng& rng) {
    TemplateOutput t;
    std::string name = rng.pick({"token", "api_key", "password"});
    std::string literal = rng.pick({"FIXED-TOKEN-2214", "STATIC-CRED-8841", "EMBEDDED-PASS-0173"});
    std::string env = rng.pick({"SERVICE_TOKEN", "PIPELINE_TOKEN"});
    t.vuln_lines = {
        "for account in directory_accounts:",
        "    " + name + " = \"" + literal + "\"",
        "    start_session(account, " + name + ")",
    };
    t.ann_line = 2;
    t.note = "a literal credential is embedded in the loop body";
    t.clean_lines = {
        "import os",
        "",
        "for account in directory_accounts:",
        "    " + name + " = os.environ[\"" + env + "\"]",
        "    start_session(account, " + name + ")",
    };
    return t;
}

TemplateOutput build_unsafe_network_file_op(Rng& rng) {
    TemplateOutput t;
    std::string port = rng.pick({"80", "8080", "9000"});
    std::string timeout = rng.pick({"5", "10"});
    std::string iterable = rng.pick({"user_input_hosts", "user_supplied_hosts"});
    t.vuln_lines = {
        "import socket",
        "",
        "for host in " + iterable + ":",
        "    link = socket.socket()",
        "    link.connect((host, " + port + "))",
        "    link.send(b\"PING\\r\\n\")",
        "    link.close()",
    };
    t.ann_line = 5;
    t.note = "connects to externally supplied hosts with no validation or timeout";
    t.clean_lines = {
        "import socket",
        "",
        "for host in " + iterable + ":",
        "    if not is_allowed_host(host):",
        "        continue",
        "    link = socket.socket()",
        "    link.settimeout(" + timeout + ")",
        "    link.connect((host, " + port + "))",
        "    link.send(b\"PING\\r\\n\")",
        "    link.close()",
    };
    return t;
}

TemplateOutput build_missing_exception_handling(Rng& rng) {
    TemplateOutput t;
    std::string var = rng.pick({"job", "work_item"});
    std::string collection = rng.pick({"queued_jobs", "pending_work"});
    std::string dispatch = rng.pick({"dispatch_job", "submit_job"});
    std::string exc = rng.pick({"OSError", "ValueError"});
    std::string handler = rng.pick({"mark_failed", "record_failure"});
    std::string comment = "# " + dispatch + " may raise " + exc + " on worker loss";
    t.vuln_lines = {
        "for " + var + " in " + collection + ":",
        "    " + dispatch + "(" + var + ")  " + comment,
    };
    t.ann_line = 2;
    t.note = "one failing call aborts every remaining iteration";
    t.clean_lines = {
        "for " + var + " in " + collection + ":",
        "    try:",
        "        " + dispatch + "(" + var + ")  " + comment,
        "    except " + exc + ":",
        "        " + handler + "(" + var + ")",
    };
    return t;
}

TemplateOutput build_invariant_recompute(Rng& rng) {
    TemplateOutput t;
    std::string data = rng.pick({"readings", "measurements", "samples_buf"});
    std::string var = rng.pick({"pos", "offset"});
    std::string derived = rng.pick({"scale", "norm"});
    int count = rng.between(5, 20) * 1000;
    t.vuln_lines = {
        data + " = list(range(" + std::to_string(count) + "))",
        "for " + var + " in range(len(" + data + ")):",
        "    " + derived + " = len(" + data + ") ** 0.5",
        "    " + data + "[" + var + "] += " + derived,
    };
    t.ann_line = 3;
    t.note = "a loop-invariant value is recomputed on every iteration";
    t.clean_lines = {
        data + " = list(range(" + std::to_string(count) + "))",
        derived + " = len(" + data + ") ** 0.5",
        "for " + var + " in range(len(" + data + ")):",
        "    " + data + "[" + var + "] += " + derived,
    };
    return t;
}

TemplateOutput build_redundant_object_creation(Rng& rng) {
    TemplateOutput t;
    std::string name = rng.pick({"defaults", "settings", "options_map"});
    std::string k1 = rng.pick({"mode", "tier"});
    std::string v1 = rng.pick({"fast", "batch"});
    std::string k2 = rng.pick({"retries", "workers"});
    int v2 = rng.between(2, 9);
    int count = rng.between(5, 10) * 1000;
    std::string literal =
        "{\"" + k1 + "\": \"" + v1 + "\", \"" + k2 + "\": " + std::to_string(v2) + "}";
    t.vuln_lines = {
        "for _ in range(" + std::to_string(count) + "):",
        "    " + name + " = " + literal,
        "    apply_defaults(" + name + ")",
    };
    t.ann_line = 2;
    t.note = "an identical container is rebuilt on every iteration";
    t.clean_lines = {
        name + " = " + literal,
        "for _ in range(" + std::to_string(count) + "):",
        "    apply_defaults(" + name + ")",
    };
    return t;
}

TemplateOutput build_string_concat_in_loop(Rng& rng) {
    TemplateOutput t;
    std::string acc = rng.pick({"summary", "rendered", "digest_text"});
    std::string var = rng.pick({"value", "piece_no"});
    int count = rng.between(5, 20) * 100;
    t.vuln_lines = {
        acc + " = \"\"",
        "for " + var + " in range(" + std::to_string(count) + "):",
        "    " + acc + " += str(" + var + ")",
    };
    t.ann_line = 3;
    t.note = "quadratic string building through repeated concatenation";
    t.clean_lines = {
        "import io",
        "",
        "chunks = io.StringIO()",
        "for " + var + " in range(" + std::to_string(count) + "):",
        "    chunks.write(str(" + var + "))",
        acc + " = chunks.getvalue()",
    };
    return t;
}

TemplateOutput build_missing_lazy_evaluation(Rng& rng) {
    TemplateOutput t;
    std::string big = rng.pick({"10 ** 6", "500000", "2 * 10 ** 5"});
    std::string table = rng.pick({"table", "grid_values"});
    std::string var = rng.pick({"value", "cell"});
    int batches = rng.between(10, 50);
    t.vuln_lines = {
        "for chunk_id in range(" + std::to_string(batches) + "):",
        "    " + table + " = [" + var + " * " + var + " for " + var + " in range(" + big + ")]",
        "    for " + var + " in " + table + ":",
        "        store_cell(chunk_id, " + var + ")",
    };
    t.ann_line = 2;
    t.note = "a huge list is materialized although it is only iterated";
    t.clean_lines = {
        "for chunk_id in range(" + std::to_string(batches) + "):",
        "    " + table + " = (" + var + " * " + var + " for " + var + " in range(" + big + "))",
        "    for " + var + " in " + table + ":",
        "        store_cell(chunk_id, " + var + ")",
    };
    return t;
}

TemplateOutput build_avoidable_nested_loop(Rng& rng) {
    TemplateOutput t;
    std::string values = rng.pick({"values", "readings", "ticket_ids"});
    int count = rng.between(5, 10) * 100;
    int dup = rng.between(0, count - 1);
    t.vuln_lines = {
        values + " = list(range(" + std::to_string(count) + ")) + [" + std::to_string(dup) + "]",
        "repeats = []",
        "for left in range(len(" + values + ")):",
        "    for right in range(left + 1, len(" + values + ")):",
        "        if " + values + "[left] == " + values + "[right]:",
        "            repeats.append(" + values + "[left])",
        "report_repeats(repeats)",
    };
    t.ann_line = 4;
    t.note = "quadratic duplicate scan where a set is linear";
    t.clean_lines = {
        values + " = list(range(" + std::to_string(count) + ")) + [" + std::to_string(dup) + "]",
        "seen = set()",
        "repeats = []",
        "for value in " + values + ":",
        "    if value in seen:",
        "        repeats.append(value)",
        "    seen.add(value)",
        "report_repeats(repeats)",
    };
    return t;
}

TemplateOutput build_inefficient_membership_check(Rng& rng) {
    TemplateOutput t;
    std::string haystack = rng.pick({"catalog_items", "known_codes"});
    std::string needles = rng.pick({"lookups", "probes"});
    int big = rng.between(5, 10) * 1000;
    int small = rng.between(10, 25) * 100;
    t.vuln_lines = {
        haystack + " = list(range(" + std::to_string(big) + "))",
        needles + " = list(range(" + std::to_string(small) + "))",
        "for needle in " + needles + ":",
        "    if needle in " + haystack + ":",
        "        record_hit(needle)",
    };
    t.ann_line = 4;
    t.note = "linear membership test repeated inside the loop";
    t.clean_lines = {
        haystack + " = set(range(" + std::to_string(big) + "))",
        needles + " = list(range(" + std::to_string(small) + "))",
        "for needle in " + needles + ":",
        "    if needle in " + haystack + ":",
        "        record_hit(needle)",
    };
    return t;
}

TemplateOutput build_missing_builtin_comprehension(Rng& rng) {
    TemplateOutput t;
    std::string src = rng.pick({"readings", "figures"});
    std::string dst = rng.pick({"doubled", "scaled"});
    std::string var = rng.pick({"value", "figure"});
    int count = rng.between(5, 10) * 100;
    int factor = rng.between(2, 5);
    t.vuln_lines = {
        src + " = list(range(" + std::to_string(count) + "))",
        dst + " = []",
        "for " + var + " in " + src + ":",
        "    " + dst + ".append(" + var + " * " + std::to_string(factor) + ")",
        "publish(" + dst + ")",
    };
    t.ann_line = 4;
    t.note = "a bare transform-and-append loop instead of a comprehension";
    t.clean_lines = {
        src + " = list(range(" + std::to_string(count) + "))",
        dst + " = [" + var + " * " + std::to_string(factor) + " for " + var + " in " + src + "]",
        "for item in " + dst + ":",
        "    publish_one(item)",
    };
    return t;
}

TemplateOutput build_redundant_io_in_loop(Rng& rng) {
    TemplateOutput t;
    std::string fname = rng.pick({"measure_log.txt", "trace_rows.txt"});
    int count = rng.between(5, 20) * 100;
    t.vuln_lines = {
        "with open(\"" + fname + "\", \"w\") as sink:",
        "    for index in range(" + std::to_string(count) + "):",
        "        sink.write(f\"row {index}\\n\")",
    };
    t.ann_line = 3;
    t.note = "one disk write per iteration instead of a buffered write";
    t.clean_lines = {
        "rows = []",
        "for index in range(" + std::to_string(count) + "):",
        "    rows.append(f\"row {index}\\n\")",
        "with open(\"" + fname + "\", \"w\") as sink:",
        "    sink.write(\"\".join(rows))",
    };
    return t;
}

TemplateOutput build_unused_accumulation(Rng& rng) {
    TemplateOutput t;
    std::string acc = rng.pick({"samples", "history"});
    std::string var = rng.pick({"tick", "frame"});
    std::string big = rng.pick({"1000000", "400000", "250000"});
    t.vuln_lines = {
        acc + " = []",
        "for " + var + " in range(" + big + "):",
        "    " + acc + ".append(" + var + " * " + var + ")",
    };
    t.ann_line = 3;
    t.note = "results are accumulated in memory and never read";
    t.clean_lines = {
        acc + " = []",
        "for " + var + " in range(" + big + "):",
        "    " + acc + ".append(" + var + " * " + var + ")",
        "grand_total = sum(" + acc + ")",
        "print(grand_total)",
    };
    return t;
}

TemplateOutput build_range_len_antipattern(Rng& rng) {
    TemplateOutput t;
    std::vector<std::string> name_pool = {"Asta", "Bruno", "Carla", "Dorian", "Elma", "Felix"};
    std::string n1 = name_pool[rng.index(name_pool.size())];
    std::string n2 = name_pool[rng.index(name_pool.size())];
    std::string n3 = name_pool[rng.index(name_pool.size())];
    int w1 = rng.between(10, 40), w2 = rng.between(41, 70), w3 = rng.between(71, 99);
    t.vuln_lines = {
        "labels = [\"" + n1 + "\", \"" + n2 + "\", \"" + n3 + "\"]",
        "weights = [" + std::to_string(w1) + ", " + std::to_string(w2) + ", " + std::to_string(w3) + "]",
        "for pos in range(len(labels)):",
        "    print(labels[pos], weights[pos])",
    };
    t.ann_line = 3;
    t.note = "index-based parallel iteration where zip is direct";
    t.clean_lines = {
        "labels = [\"" + n1 + "\", \"" + n2 + "\", \"" + n3 + "\"]",
        "weights = [" + std::to_string(w1) + ", " + std::to_string(w2) + ", " + std::to_string(w3) + "]",
        "for label, weight in zip(labels, weights):",
        "    print(label, weight)",
    };
    return t;
}

TemplateOutput build_template(PatternKind kind, Rng& rng) {
    switch (kind) {
        case PatternKind::InfiniteLoop: return build_infinite_loop(rng);
        case PatternKind::OffByOne: return build_off_by_one(rng);
        case PatternKind::ControlFlowMisuse: return build_control_flow_misuse(rng);
        case PatternKind::LoopVarReassignment: return build_loop_var_reassignment(rng);
        case PatternKind::DeadUnreachableCode: return build_dead_unreachable_code(rng);
        case PatternKind::SensitiveDataLogging: return build_sensitive_data_logging(rng);
        case PatternKind::TimingSideChannel: return build_timing_side_channel(rng);
        case PatternKind::MissingAuthorization: return build_missing_authorization(rng);
        case PatternKind::InsecureEvalInjection: return build_insecure_eval_injection(rng);
        case PatternKind::UnvalidatedLoopBound: return build_unvalidated_loop_bound(rng);
        case PatternKind::ResourceExhaustion: return build_resource_exhaustion(rng);
        case PatternKind::UnencryptedSensitiveStorage: return build_unencrypted_sensitive_storage(rng);
        case PatternKind::HardcodedSecret: return build_hardcoded_secret(rng);
        case PatternKind::UnsafeNetworkFileOp: return build_unsafe_network_file_op(rng);
        case PatternKind::MissingExceptionHandling: return build_missing_exception_handling(rng);
        case PatternKind::InvariantRecompute: return build_invariant_recompute(rng);
        case PatternKind::RedundantObjectCreation: return build_redundant_object_creation(rng);
        case PatternKind::StringConcatInLoop: return build_string_concat_in_loop(rng);
        case PatternKind::MissingLazyEvaluation: return build_missing_lazy_evaluation(rng);
        case PatternKind::AvoidableNestedLoop: return build_avoidable_nested_loop(rng);
        case PatternKind::InefficientMembershipCheck: return build_inefficient_membership_check(rng);
        case PatternKind::MissingBuiltinComprehension: return build_missing_builtin_comprehension(rng);
        case PatternKind::RedundantIOInLoop: return build_redundant_io_in_loop(rng);
        case PatternKind::UnusedAccumulation: return build_unused_accumulation(rng);
        case PatternKind::RangeLenAntipattern: return build_range_len_antipattern(rng);
    }
    throw std::logic_error("unknown pattern kind");
}

}  // namespace

std::vector<CodeSample> generate_seed_corpus(const std::set<Category>& categories,
                                             std::uint64_t rng_seed) {
    if (categories.empty()) throw std::invalid_argument("generate_seed_corpus: categories must be non-empty");

    std::vector<CodeSample> samples;
    std::uint64_t kind_index = 0;
    for (const auto& entry : catalog()) {
        std::uint64_t mix = rng_seed * 1000003ull + kind_index * 7919ull + 17ull;
        ++kind_index;
        if (!categories.count(entry.category)) continue;
        Rng rng(mix);
        TemplateOutput t = build_template(entry.kind, rng);

        CodeSample vulnerable;
        vulnerable.sample_id = std::string(entry.id) + "_vuln";
        vulnerable.source = join(t.vuln_lines);
        GroundTruthAnnotation ann;
        ann.sample_id = vulnerable.sample_id;
        ann.line_start = t.ann_line;
        ann.line_end = t.ann_line;
        ann.category = entry.category;
        ann.kind = entry.kind;
        ann.note = t.note;
        vulnerable.annotations.push_back(std::move(ann));
        samples.push_back(std::move(vulnerable));

        CodeSample clean;
        clean.sample_id = std::string(entry.id) + "_clean";
        clean.source = join(t.clean_lines);
        samples.push_back(std::move(clean));
    }
    return samples;
}

}  // namespace loopscan
