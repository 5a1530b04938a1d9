#pragma once

#include <string>
#include <vector>

#include "loopscan/corpus.hpp"
#include "loopscan/detectors.hpp"

namespace loopscan {

struct MatchPolicy {
    enum class Granularity { PatternKind, Category };
    int line_tolerance = 1;  // bounded to [0, 10]
    Granularity granularity = Granularity::PatternKind;
};

struct EvalCounts {
    int tp = 0;
    int fp = 0;
    int fn = 0;
};

struct EvalMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MatchedPair {
    std::size_t finding_index = 0;
    std::size_t annotation_index = 0;
};

struct MatchResult {
    std::vector<MatchedPair> pairs;
    EvalCounts counts;
};

// Greedy one-to-one matching over findings in canonical (line, kind) order;
// each annotation is consumed at most once, ties go to the annotation with the
// smallest line_start. Throws std::invalid_argument on mixed sample ids or an
// out-of-bounds tolerance.
MatchResult match_findings(const std::vector<Finding>& findings,
                           const std::vector<GroundTruthAnnotation>& truth,
                           const MatchPolicy& policy);

// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = harmonic mean; 0/0 -> 0.
EvalMetrics compute_metrics(const EvalCounts& counts);

// Display rounding, half-up to 2 decimals.
double display_round(double value);

struct ReportEntry {
    std::string sample_id;
    Category category = Category::LoopControlLogic;
    EvalCounts counts;
};

struct SampleRow {
    std::string sample_id;
    EvalCounts counts;
    EvalMetrics metrics;  // full precision
};

struct CategoryReport {
    Category category = Category::LoopControlLogic;
    std::vector<SampleRow> rows;
    EvalMetrics average;  // macro mean of the *displayed* per-sample metrics
};

struct EvalReport {
    MatchPolicy policy;
    std::vector<CategoryReport> categories;
    std::string config_fingerprint;
};

// Throws std::invalid_argument when a (sample, category) pair appears twice.
EvalReport build_report(const std::vector<ReportEntry>& entries, const MatchPolicy& policy,
                        const std::string& config_fingerprint = "");

std::string report_to_json(const EvalReport& report);
std::string report_to_markdown(const EvalReport& report);

}  // namespace loopscan
