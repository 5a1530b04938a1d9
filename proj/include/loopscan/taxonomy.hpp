#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loopscan {

// The three vulnerability categories. Every pattern kind belongs to exactly one.
enum class Category {
    LoopControlLogic,
    SecurityInLoop,
    ResourceEfficiency,
};

enum class PatternKind {
    // loop control and logic errors
    InfiniteLoop,
    OffByOne,
    ControlFlowMisuse,
    LoopVarReassignment,
    DeadUnreachableCode,
    // security risks inside loops
    SensitiveDataLogging,
    TimingSideChannel,
    MissingAuthorization,
    InsecureEvalInjection,
    UnvalidatedLoopBound,
    ResourceExhaustion,
    UnencryptedSensitiveStorage,
    HardcodedSecret,
    UnsafeNetworkFileOp,
    MissingExceptionHandling,
    // resource management and efficiency issues
    InvariantRecompute,
    RedundantObjectCreation,
    StringConcatInLoop,
    MissingLazyEvaluation,
    AvoidableNestedLoop,
    InefficientMembershipCheck,
    MissingBuiltinComprehension,
    RedundantIOInLoop,
    UnusedAccumulation,
    RangeLenAntipattern,
};

inline constexpr int kPatternKindCount = 25;

struct CatalogEntry {
    PatternKind kind;
    Category category;
    std::string_view id;     // stable machine identifier, lower_snake
    std::string_view title;  // short human name
    std::string_view description;
};

// All 25 entries in fixed catalog order: 5 control/logic, 10 security, 10 efficiency.
const std::array<CatalogEntry, kPatternKindCount>& catalog();

Category category_of(PatternKind kind);
std::string_view kind_id(PatternKind kind);
std::string_view kind_title(PatternKind kind);
std::optional<PatternKind> kind_from_id(std::string_view id);

std::string_view category_id(Category category);
std::string_view category_title(Category category);
std::optional<Category> category_from_id(std::string_view id);

std::vector<PatternKind> kinds_in_category(Category category);
std::vector<Category> all_categories();
std::vector<PatternKind> all_kinds();

}  // namespace loopscan
