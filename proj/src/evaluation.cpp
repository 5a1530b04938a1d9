#include "loopscan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace loopscan {

namespace {

using nlohmann::json;

int kind_order(PatternKind kind) {
    int i = 0;
    for (const auto& entry : catalog()) {
        if (entry.kind == kind) return i;
        ++i;
    }
    return i;
}

bool kinds_match(const Finding& finding, const GroundTruthAnnotation& ann,
                 MatchPolicy::Granularity granularity) {
    if (granularity == MatchPolicy::Granularity::PatternKind) return finding.kind == ann.kind;
    return finding.category == ann.category;
}

std::string format2(double value) {
    double rounded = display_round(value);
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << rounded;
    return os.str();
}

}  // namespace

MatchResult match_findings(const std::vector<Finding>& findings,
                           const std::vector<GroundTruthAnnotation>& truth,
                           const MatchPolicy& policy) {
    if (policy.line_tolerance < 0 || policy.line_tolerance > 10) {
        throw std::invalid_argument("line_tolerance must be within [0, 10]");
    }
    std::set<std::string> ids;
    for (const auto& f : findings) ids.insert(f.sample_id);
    for (const auto& a : truth) ids.insert(a.sample_id);
    if (ids.size() > 1) {
        throw std::invalid_argument("match_findings requires findings and truth from one sample");
    }

    // canonical order makes the outcome independent of input permutation
    std::vector<std::size_t> order(findings.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&findings](std::size_t a, std::size_t b) {
        const Finding& fa = findings[a];
        const Finding& fb = findings[b];
        if (fa.line != fb.line) return fa.line < fb.line;
        int ka = kind_order(fa.kind), kb = kind_order(fb.kind);
        if (ka != kb) return ka < kb;
        return a < b;
    });

    MatchResult result;
    std::vector<bool> consumed(truth.size(), false);
    for (std::size_t fi : order) {
        const Finding& finding = findings[fi];
        std::size_t best = truth.size();
        for (std::size_t ai = 0; ai < truth.size(); ++ai) {
            if (consumed[ai]) continue;
            const GroundTruthAnnotation& ann = truth[ai];
            if (!kinds_match(finding, ann, policy.granularity)) continue;
            if (finding.line < ann.line_start - policy.line_tolerance ||
                finding.line > ann.line_end + policy.line_tolerance) {
                continue;
            }
            if (best == truth.size() || ann.line_start < truth[best].line_start ||
                (ann.line_start == truth[best].line_start && ann.line_end < truth[best].line_end)) {
                best = ai;
            }
        }
        if (best != truth.size()) {
            consumed[best] = true;
            result.pairs.push_back({fi, best});
        }
    }
    result.counts.tp = static_cast<int>(result.pairs.size());
    result.counts.fp = static_cast<int>(findings.size()) - result.counts.tp;
    result.counts.fn = static_cast<int>(truth.size()) - result.counts.tp;
    return result;
}

EvalMetrics compute_metrics(const EvalCounts& counts) {
    EvalMetrics m;
    int predicted = counts.tp + counts.fp;
    int actual = counts.tp + counts.fn;
    m.precision = predicted > 0 ? static_cast<double>(counts.tp) / predicted : 0.0;
    m.recall = actual > 0 ? static_cast<double>(counts.tp) / actual : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    return m;
}

double display_round(double value) {
    return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

EvalReport build_report(const std::vector<ReportEntry>& entries, const MatchPolicy& policy,
                        const std::string& config_fingerprint) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& entry : entries) {
        if (!seen.insert({entry.sample_id, std::string(category_id(entry.category))}).second) {
            throw std::invalid_argument("duplicate report row for sample '" + entry.sample_id +
                                        "' in category '" +
                                        std::string(category_id(entry.category)) + "'");
        }
    }

    EvalReport report;
    report.policy = policy;
    report.config_fingerprint = config_fingerprint;
    for (Category category : all_categories()) {
        CategoryReport cat;
        cat.category = category;
        for (const auto& entry : entries) {
            if (entry.category != category) continue;
            SampleRow row;
            row.sample_id = entry.sample_id;
            row.counts = entry.counts;
            row.metrics = compute_metrics(entry.counts);
            cat.rows.push_back(std::move(row));
        }
        if (cat.rows.empty()) continue;
        std::sort(cat.rows.begin(), cat.rows.end(),
                  [](const SampleRow& a, const SampleRow& b) { return a.sample_id < b.sample_id; });
        double p = 0, r = 0, f = 0;  // macro mean of displayed per-sample values
        for (const SampleRow& row : cat.rows) {
            p += display_round(row.metrics.precision);
            r += display_round(row.metrics.recall);
            f += display_round(row.metrics.f1);
        }
        double n = static_cast<double>(cat.rows.size());
        cat.average = {p / n, r / n, f / n};
        report.categories.push_back(std::move(cat));
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    json doc;
    doc["version"] = 1;
    if (!report.config_fingerprint.empty()) doc["config_fingerprint"] = report.config_fingerprint;
    doc["policy"] = {
        {"line_tolerance", report.policy.line_tolerance},
        {"granularity", report.policy.granularity == MatchPolicy::Granularity::PatternKind
                            ? "pattern_kind"
                            : "category"},
    };
    doc["categories"] = json::array();
    for (const CategoryReport& cat : report.categories) {
        json c;
        c["category"] = std::string(category_id(cat.category));
        c["rows"] = json::array();
        for (const SampleRow& row : cat.rows) {
            c["rows"].push_back({
                {"sample_id", row.sample_id},
                {"tp", row.counts.tp},
                {"fp", row.counts.fp},
                {"fn", row.counts.fn},
                {"precision", row.metrics.precision},
                {"recall", row.metrics.recall},
                {"f1", row.metrics.f1},
            });
        }
        c["average"] = {
            {"precision", cat.average.precision},
            {"recall", cat.average.recall},
            {"f1", cat.average.f1},
            {"precision_display", display_round(cat.average.precision)},
            {"recall_display", display_round(cat.average.recall)},
            {"f1_display", display_round(cat.average.f1)},
        };
        doc["categories"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

std::string report_to_markdown(const EvalReport& report) {
    std::string md;
    for (const CategoryReport& cat : report.categories) {
        md += "## ";
        md += category_title(cat.category);
        md += "\n\n";
        md += "| Sample | TP | FP | FN | Precision | Recall | F1-score |\n";
        md += "|---|---|---|---|---|---|---|\n";
        for (const SampleRow& row : cat.rows) {
            md += "| " + row.sample_id + " | " + std::to_string(row.counts.tp) + " | " +
                  std::to_string(row.counts.fp) + " | " + std::to_string(row.counts.fn) + " | " +
                  format2(row.metrics.precision) + " | " + format2(row.metrics.recall) + " | " +
                  format2(row.metrics.f1) + " |\n";
        }
        md += "| **Average** |  |  |  | **" + format2(cat.average.precision) + "** | **" +
              format2(cat.average.recall) + "** | **" + format2(cat.average.f1) + "** |\n\n";
    }
    md += "Match policy: line tolerance " + std::to_string(report.policy.line_tolerance) +
          ", granularity " +
          (report.policy.granularity == MatchPolicy::Granularity::PatternKind ? "pattern_kind"
                                                                              : "category") +
          ".\n";
    if (!report.config_fingerprint.empty()) {
        md += "Config fingerprint: " + report.config_fingerprint + ".\n";
    }
    return md;
}

}  // namespace loopscan
