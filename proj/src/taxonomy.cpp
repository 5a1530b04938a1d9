#include "loopscan/taxonomy.hpp"

namespace loopscan {

namespace {

constexpr std::array<CatalogEntry, kPatternKindCount> kCatalog = {{
    {PatternKind::InfiniteLoop, Category::LoopControlLogic, "infinite_loop", "Infinite loop",
     "A while loop whose exit condition can never become false and whose body offers no other way out."},
    {PatternKind::OffByOne, Category::LoopControlLogic, "off_by_one", "Off-by-one error",
     "A loop boundary that misses or overshoots the intended endpoint by one iteration."},
    {PatternKind::ControlFlowMisuse, Category::LoopControlLogic, "control_flow_misuse", "Control flow misuse",
     "A loop else clause that can never run because the loop is guaranteed to break."},
    {PatternKind::LoopVarReassignment, Category::LoopControlLogic, "loop_var_reassignment", "Loop variable reassignment",
     "The loop control variable is reassigned inside the body, disrupting the natural progression."},
    {PatternKind::DeadUnreachableCode, Category::LoopControlLogic, "dead_unreachable_code", "Dead or unreachable code",
     "A branch inside a loop that the iteration space makes impossible to reach."},
    {PatternKind::SensitiveDataLogging, Category::SecurityInLoop, "sensitive_data_logging", "Sensitive data logging",
     "A print or logging call inside a loop that exposes secrets such as passwords or tokens."},
    {PatternKind::TimingSideChannel, Category::SecurityInLoop, "timing_side_channel", "Timing side channel",
     "A sleep whose execution depends on a comparison of attacker-observable data, leaking information through response time."},
    {PatternKind::MissingAuthorization, Category::SecurityInLoop, "missing_authorization", "Missing authorization",
     "A destructive operation performed on loop-processed requests with no permission check on the path."},
    {PatternKind::InsecureEvalInjection, Category::SecurityInLoop, "insecure_eval_injection", "Insecure eval injection",
     "Dynamic evaluation of non-literal data inside a loop, enabling arbitrary code execution."},
    {PatternKind::UnvalidatedLoopBound, Category::SecurityInLoop, "unvalidated_loop_bound", "Unvalidated loop bound",
     "A loop bound taken from user input without clamping, allowing denial of service."},
    {PatternKind::ResourceExhaustion, Category::SecurityInLoop, "resource_exhaustion", "Resource exhaustion",
     "Unbounded creation of files or sockets while iterating externally controlled data."},
    {PatternKind::UnencryptedSensitiveStorage, Category::SecurityInLoop, "unencrypted_sensitive_storage", "Unencrypted sensitive storage",
     "Sensitive fields written to storage in plaintext from inside a loop."},
    {PatternKind::HardcodedSecret, Category::SecurityInLoop, "hardcoded_secret", "Hardcoded secret",
     "A credential embedded as a string literal inside loop code."},
    {PatternKind::UnsafeNetworkFileOp, Category::SecurityInLoop, "unsafe_network_file_op", "Unsafe network or file operation",
     "A network connection to a loop-derived target with neither validation nor a timeout."},
    {PatternKind::MissingExceptionHandling, Category::SecurityInLoop, "missing_exception_handling", "Missing exception handling",
     "Failure-prone calls inside a loop with no try protection, so one error aborts all remaining iterations."},
    {PatternKind::InvariantRecompute, Category::ResourceEfficiency, "invariant_recompute", "Invariant recomputation",
     "A value that never changes across iterations is recomputed inside the loop body."},
    {PatternKind::RedundantObjectCreation, Category::ResourceEfficiency, "redundant_object_creation", "Redundant object creation",
     "A container literal rebuilt identically on every iteration instead of being created once."},
    {PatternKind::StringConcatInLoop, Category::ResourceEfficiency, "string_concat_in_loop", "String concatenation in loop",
     "Repeated += on an immutable string accumulator, giving quadratic copying."},
    {PatternKind::MissingLazyEvaluation, Category::ResourceEfficiency, "missing_lazy_evaluation", "Missing lazy evaluation",
     "A huge list materialized in memory although the values are only ever iterated."},
    {PatternKind::AvoidableNestedLoop, Category::ResourceEfficiency, "avoidable_nested_loop", "Avoidable nested loop",
     "A quadratic nested scan over one sequence where a set or dict would do the job in linear time."},
    {PatternKind::InefficientMembershipCheck, Category::ResourceEfficiency, "inefficient_membership_check", "Inefficient membership check",
     "Repeated linear-time membership tests against a list inside a loop."},
    {PatternKind::MissingBuiltinComprehension, Category::ResourceEfficiency, "missing_builtin_comprehension", "Missing builtin comprehension",
     "A loop that only appends a transformed element, where a comprehension is faster and clearer."},
    {PatternKind::RedundantIOInLoop, Category::ResourceEfficiency, "redundant_io_in_loop", "Redundant I/O in loop",
     "A write issued to an already-open handle on every iteration instead of buffering."},
    {PatternKind::UnusedAccumulation, Category::ResourceEfficiency, "unused_accumulation", "Unused accumulation",
     "Results collected into memory on every iteration and never read afterwards."},
    {PatternKind::RangeLenAntipattern, Category::ResourceEfficiency, "range_len_antipattern", "range(len()) antipattern",
     "Index-based iteration via range(len(...)) where direct iteration, enumerate, or zip is safer."},
}};

const CatalogEntry& entry_of(PatternKind kind) {
    for (const auto& e : kCatalog) {
        if (e.kind == kind) return e;
    }
    return kCatalog.front();  // unreachable for valid kinds
}

}  // namespace

const std::array<CatalogEntry, kPatternKindCount>& catalog() { return kCatalog; }

Category category_of(PatternKind kind) { return entry_of(kind).category; }

std::string_view kind_id(PatternKind kind) { return entry_of(kind).id; }

std::string_view kind_title(PatternKind kind) { return entry_of(kind).title; }

std::optional<PatternKind> kind_from_id(std::string_view id) {
    for (const auto& e : kCatalog) {
        if (e.id == id) return e.kind;
    }
    return std::nullopt;
}

std::string_view category_id(Category category) {
    switch (category) {
        case Category::LoopControlLogic: return "loop_control_logic";
        case Category::SecurityInLoop: return "security_in_loop";
        case Category::ResourceEfficiency: return "resource_efficiency";
    }
    return "";
}

std::string_view category_title(Category category) {
    switch (category) {
        case Category::LoopControlLogic: return "Loop Control and Logic Errors";
        case Category::SecurityInLoop: return "Security Risks Inside Loops";
        case Category::ResourceEfficiency: return "Resource Management and Efficiency Issues";
    }
    return "";
}

std::optional<Category> category_from_id(std::string_view id) {
    for (Category c : {Category::LoopControlLogic, Category::SecurityInLoop, Category::ResourceEfficiency}) {
        if (category_id(c) == id) return c;
    }
    return std::nullopt;
}

std::vector<PatternKind> kinds_in_category(Category category) {
    std::vector<PatternKind> out;
    for (const auto& e : kCatalog) {
        if (e.category == category) out.push_back(e.kind);
    }
    return out;
}

std::vector<Category> all_categories() {
    return {Category::LoopControlLogic, Category::SecurityInLoop, Category::ResourceEfficiency};
}

std::vector<PatternKind> all_kinds() {
    std::vector<PatternKind> out;
    out.reserve(kCatalog.size());
    for (const auto& e : kCatalog) out.push_back(e.kind);
    return out;
}

}  // namespace loopscan
