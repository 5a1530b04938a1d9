// Structured descriptions of every rule: firing criterion, anchor line, and
// known limitations. The prompt builder reuses the criterion text so the rule
// engine and the model instructions describe identical semantics.

#include <array>

#include "loopscan/detectors.hpp"

namespace loopscan {

namespace {

const std::array<RuleCriteria, kPatternKindCount> kCriteria = {{
    {PatternKind::InfiniteLoop,
     "a while loop whose condition names only variables with no mutation of condition variables "
     "and no break/return/raise in the body, or 'while True' with no break/return/raise",
     "the while header line",
     "mutation through aliases or callees is invisible; conditions involving calls, attributes, "
     "or subscripts are skipped as potentially stateful"},
    {PatternKind::OffByOne,
     "heuristic: range(a, b) whose end disagrees with an inclusive intent stated in a nearby "
     "comment, or whose end variable is used elsewhere as an inclusive bound",
     "the for header line",
     "heuristic and intent-dependent: a true decision needs the author's intended endpoint, so "
     "only explicitly documented intent or an inclusive comparison elsewhere is trusted"},
    {PatternKind::ControlFlowMisuse,
     "a loop carrying an else clause while the body breaks unconditionally or on an equality "
     "test the constant range is guaranteed to satisfy",
     "the else line",
     "breaks behind arbitrary data-dependent conditions are treated as undecidable and not "
     "reported"},
    {PatternKind::LoopVarReassignment,
     "an assignment to the for-loop target inside the loop body",
     "the assignment line",
     "rebinding via nested loop targets or closures is not tracked"},
    {PatternKind::DeadUnreachableCode,
     "a comparison of a constant-range loop variable against a constant that the range makes "
     "always-true or always-false, leaving a branch unreachable",
     "the unreachable branch's first line",
     "constant ranges only; arithmetic on the loop variable inside the comparison is not "
     "evaluated"},
    {PatternKind::SensitiveDataLogging,
     "a print or logging call inside a loop whose argument mentions an identifier from the "
     "secret lexicon (password, secret, token, key, ssn, credential...)",
     "the logging call line",
     "matching is lexical over identifiers, attribute names, and string keys; renamed secrets "
     "escape it"},
    {PatternKind::TimingSideChannel,
     "a sleep-suffixed call inside a conditional that compares loop-derived or user-derived "
     "data, inside a loop",
     "the sleep call line",
     "only sleep-style delays are modeled; computational timing skew is invisible"},
    {PatternKind::MissingAuthorization,
     "a call matching the destructive lexicon (delete, drop, remove, purge) inside a loop with "
     "no call or flag matching the authorization lexicon anywhere in that loop",
     "the destructive call line",
     "authorization checks hoisted outside the loop or spelled outside the lexicon are not "
     "recognized"},
    {PatternKind::InsecureEvalInjection,
     "an eval or exec call inside a loop whose first argument is not a string literal",
     "the eval/exec call line",
     "indirect references to eval and sanitized inputs are not distinguished"},
    {PatternKind::UnvalidatedLoopBound,
     "a loop bound expression containing input() with no min() clamp in the same expression",
     "the loop header line",
     "bounds validated on an earlier line are trusted; taint is not tracked across statements"},
    {PatternKind::ResourceExhaustion,
     "a file opened for writing, or a socket created without a connect, inside a loop over "
     "user-controlled or unbounded input",
     "the open/socket call line",
     "user control is judged from identifier names; connected sockets are reported by the "
     "unsafe network rule instead"},
    {PatternKind::UnencryptedSensitiveStorage,
     "a file write inside a loop whose written expression mentions the secret lexicon",
     "the write call line",
     "encryption applied inside helper functions is invisible"},
    {PatternKind::HardcodedSecret,
     "a string literal assigned inside a loop to a name in the secret lexicon, or passed "
     "literally to an authorization-lexicon call",
     "the literal's line",
     "secrets built by concatenation or stored under unrelated names escape the lexicon"},
    {PatternKind::UnsafeNetworkFileOp,
     "a connect call on a loop-derived target in a loop containing neither a validation call "
     "nor any timeout configuration",
     "the connect call line",
     "validation is judged by callee name; only connect-style network operations are covered"},
    {PatternKind::MissingExceptionHandling,
     "a loop body consisting solely of failure-prone plain calls with no try statement around "
     "them, on samples marked exception-prone",
     "the first call line",
     "heuristic: fires only when a comment marks the calls as able to raise or the "
     "assume-exception-prone option is set, to keep false positives down"},
    {PatternKind::InvariantRecompute,
     "an assignment inside a loop of a pure call/operator expression whose free variables are "
     "all loop-invariant",
     "the assignment line",
     "purity is an allowlist of builtins and math functions; invariance ignores aliasing"},
    {PatternKind::RedundantObjectCreation,
     "a dict/list/set literal constructed in the loop body, bound to a name neither mutated "
     "nor dependent on the loop variable",
     "the construction line",
     "mutation inside callees that receive the object is not visible"},
    {PatternKind::StringConcatInLoop,
     "augmented += inside a loop on an accumulator initialized from a string literal before "
     "the loop",
     "the += line",
     "string-typedness is inferred only from a literal initializer"},
    {PatternKind::MissingLazyEvaluation,
     "a list comprehension over a constant range of at least 100000 elements bound to a name "
     "that is only ever iterated",
     "the comprehension line",
     "the size threshold is configurable; usage analysis is module-local"},
    {PatternKind::AvoidableNestedLoop,
     "a directly nested loop over the same sequence as its parent with an equality test "
     "between parent-indexed and child-indexed elements",
     "the inner loop header line",
     "only the index-pair scan shape is recognized"},
    {PatternKind::InefficientMembershipCheck,
     "an 'in' test inside a loop whose right operand is a name initialized as a list before "
     "the loop and never mutated",
     "the membership test line",
     "lists mutated through aliases are not seen; judgment is module-local"},
    {PatternKind::MissingBuiltinComprehension,
     "a loop whose entire body is a single append of a pure expression of the loop variable "
     "to a list initialized empty just before, over a modest iterable",
     "the append line",
     "string-formatting appends and appends over memory-soak-sized constant ranges are left to "
     "the I/O and accumulation rules"},
    {PatternKind::RedundantIOInLoop,
     "an unconditional write on a file handle opened outside the loop, so every iteration "
     "performs I/O",
     "the write call line",
     "only open()-bound handles are tracked"},
    {PatternKind::UnusedAccumulation,
     "an unconditional append inside a loop to a list that is never read anywhere in the "
     "sample",
     "the append line",
     "reads are counted module-locally; the transform-and-append shape over modest iterables "
     "is reported as a missing comprehension instead"},
    {PatternKind::RangeLenAntipattern,
     "a for over range(len(x)) whose body subscripts with the loop variable for reading only",
     "the for header line",
     "loops that write through the index or drive a nested scan genuinely need the index and "
     "are skipped"},
}};

}  // namespace

const RuleCriteria& detector_criteria(PatternKind kind) {
    for (const auto& c : kCriteria) {
        if (c.kind == kind) return c;
    }
    return kCriteria.front();
}

}  // namespace loopscan
