#pragma once

// Syntax tree for the Python 3.7+ subset this analyzer understands.
// Nodes carry 1-based source positions; end_line spans the whole construct
// including any else/except/finally suites.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace loopscan::py {

enum class ExprKind {
    Name,
    IntLit,
    FloatLit,
    StringLit,
    FString,
    BoolLit,
    NoneLit,
    EllipsisLit,
    Tuple,
    List,
    Dict,
    Set,
    ListComp,
    SetComp,
    DictComp,
    GeneratorExp,
    Call,
    Attribute,
    Subscript,
    Slice,
    BinOp,
    UnaryOp,
    BoolOp,
    Compare,
    Lambda,
    IfExp,
    Starred,
    Await,
    Yield,
    Named,
};

enum class BinOpKind {
    Add, Sub, Mult, Div, FloorDiv, Mod, Pow, MatMult,
    LShift, RShift, BitOr, BitXor, BitAnd,
};

enum class UnaryOpKind { Not, Minus, Plus, Invert };

enum class CmpOpKind { Lt, LtE, Gt, GtE, Eq, NotEq, In, NotIn, Is, IsNot };

struct Expr {
    ExprKind kind;
    int line = 0;
    int col = 0;
    int end_line = 0;

    explicit Expr(ExprKind k) : kind(k) {}
    virtual ~Expr() = default;
};

using ExprPtr = std::unique_ptr<Expr>;

struct NameExpr : Expr {
    std::string id;
    NameExpr() : Expr(ExprKind::Name) {}
};

struct IntLitExpr : Expr {
    std::string text;          // original spelling
    long long value = 0;       // valid only when fits
    bool fits = false;
    IntLitExpr() : Expr(ExprKind::IntLit) {}
};

struct FloatLitExpr : Expr {
    std::string text;
    double value = 0.0;
    FloatLitExpr() : Expr(ExprKind::FloatLit) {}
};

struct StringLitExpr : Expr {
    std::string value;  // decoded; adjacent literals concatenated
    bool is_bytes = false;
    StringLitExpr() : Expr(ExprKind::StringLit) {}
};

// f-string: alternating literal text and embedded expressions.
struct FStringExpr : Expr {
    struct Part {
        std::string text;  // literal text when expr is null
        ExprPtr expr;      // parsed interpolation otherwise
    };
    std::vector<Part> parts;
    FStringExpr() : Expr(ExprKind::FString) {}
};

struct BoolLitExpr : Expr {
    bool value = false;
    BoolLitExpr() : Expr(ExprKind::BoolLit) {}
};

struct NoneLitExpr : Expr {
    NoneLitExpr() : Expr(ExprKind::NoneLit) {}
};

struct EllipsisLitExpr : Expr {
    EllipsisLitExpr() : Expr(ExprKind::EllipsisLit) {}
};

struct SequenceExpr : Expr {  // Tuple / List / Set
    std::vector<ExprPtr> elements;
    explicit SequenceExpr(ExprKind k) : Expr(k) {}
};

struct DictExpr : Expr {
    // key == nullptr marks a **mapping unpacking entry
    std::vector<std::pair<ExprPtr, ExprPtr>> items;
    DictExpr() : Expr(ExprKind::Dict) {}
};

struct Comprehension {
    ExprPtr target;
    ExprPtr iter;
    std::vector<ExprPtr> conditions;
    bool is_async = false;
};

struct CompExpr : Expr {  // ListComp / SetComp / GeneratorExp
    ExprPtr element;
    std::vector<Comprehension> generators;
    explicit CompExpr(ExprKind k) : Expr(k) {}
};

struct DictCompExpr : Expr {
    ExprPtr key;
    ExprPtr value;
    std::vector<Comprehension> generators;
    DictCompExpr() : Expr(ExprKind::DictComp) {}
};

struct CallExpr : Expr {
    ExprPtr callee;
    std::vector<ExprPtr> args;                               // includes Starred entries
    std::vector<std::pair<std::string, ExprPtr>> kwargs;     // name empty for **kwargs
    CallExpr() : Expr(ExprKind::Call) {}
};

struct AttributeExpr : Expr {
    ExprPtr object;
    std::string attr;
    AttributeExpr() : Expr(ExprKind::Attribute) {}
};

struct SubscriptExpr : Expr {
    ExprPtr object;
    ExprPtr index;  // Slice, Tuple of slices, or plain expression
    SubscriptExpr() : Expr(ExprKind::Subscript) {}
};

struct SliceExpr : Expr {
    ExprPtr lower, upper, step;  // any may be null
    SliceExpr() : Expr(ExprKind::Slice) {}
};

struct BinOpExpr : Expr {
    BinOpKind op;
    ExprPtr lhs, rhs;
    BinOpExpr() : Expr(ExprKind::BinOp), op(BinOpKind::Add) {}
};

struct UnaryOpExpr : Expr {
    UnaryOpKind op;
    ExprPtr operand;
    UnaryOpExpr() : Expr(ExprKind::UnaryOp), op(UnaryOpKind::Minus) {}
};

struct BoolOpExpr : Expr {
    bool is_and = true;
    std::vector<ExprPtr> values;
    BoolOpExpr() : Expr(ExprKind::BoolOp) {}
};

struct CompareExpr : Expr {
    ExprPtr first;
    std::vector<std::pair<CmpOpKind, ExprPtr>> rest;
    CompareExpr() : Expr(ExprKind::Compare) {}
};

struct Param {
    enum class Kind { Regular, VarArgs, KwOnly, KwArgs, PosOnlyMarker };
    Kind kind = Kind::Regular;
    std::string name;  // empty for bare * and / markers
    ExprPtr annotation;
    ExprPtr default_value;
};

struct LambdaExpr : Expr {
    std::vector<Param> params;
    ExprPtr body;
    LambdaExpr() : Expr(ExprKind::Lambda) {}
};

struct IfExpExpr : Expr {
    ExprPtr body, test, orelse;
    IfExpExpr() : Expr(ExprKind::IfExp) {}
};

struct StarredExpr : Expr {
    ExprPtr value;
    StarredExpr() : Expr(ExprKind::Starred) {}
};

struct AwaitExpr : Expr {
    ExprPtr value;
    AwaitExpr() : Expr(ExprKind::Await) {}
};

struct YieldExpr : Expr {
    ExprPtr value;  // may be null
    bool is_from = false;
    YieldExpr() : Expr(ExprKind::Yield) {}
};

struct NamedExpr : Expr {  // walrus
    ExprPtr target, value;
    NamedExpr() : Expr(ExprKind::Named) {}
};

// ---------------------------------------------------------------------------

enum class StmtKind {
    Expr, Assign, AugAssign, AnnAssign,
    Assert, Pass, Del, Return, Raise, Break, Continue,
    Import, ImportFrom, Global, Nonlocal,
    If, While, For, Try, With, FuncDef, ClassDef,
};

struct Stmt {
    StmtKind kind;
    int line = 0;
    int col = 0;
    int end_line = 0;

    explicit Stmt(StmtKind k) : kind(k) {}
    virtual ~Stmt() = default;
};

using StmtPtr = std::unique_ptr<Stmt>;
using StmtList = std::vector<StmtPtr>;

struct ExprStmt : Stmt {
    ExprPtr value;
    ExprStmt() : Stmt(StmtKind::Expr) {}
};

struct AssignStmt : Stmt {
    std::vector<ExprPtr> targets;  // a = b = value has two targets
    ExprPtr value;
    AssignStmt() : Stmt(StmtKind::Assign) {}
};

struct AugAssignStmt : Stmt {
    ExprPtr target;
    BinOpKind op = BinOpKind::Add;
    ExprPtr value;
    AugAssignStmt() : Stmt(StmtKind::AugAssign) {}
};

struct AnnAssignStmt : Stmt {
    ExprPtr target, annotation, value;  // value may be null
    AnnAssignStmt() : Stmt(StmtKind::AnnAssign) {}
};

struct AssertStmt : Stmt {
    ExprPtr test, message;
    AssertStmt() : Stmt(StmtKind::Assert) {}
};

struct PassStmt : Stmt {
    PassStmt() : Stmt(StmtKind::Pass) {}
};

struct DelStmt : Stmt {
    std::vector<ExprPtr> targets;
    DelStmt() : Stmt(StmtKind::Del) {}
};

struct ReturnStmt : Stmt {
    ExprPtr value;  // may be null
    ReturnStmt() : Stmt(StmtKind::Return) {}
};

struct RaiseStmt : Stmt {
    ExprPtr exception, cause;  // both may be null
    RaiseStmt() : Stmt(StmtKind::Raise) {}
};

struct BreakStmt : Stmt {
    BreakStmt() : Stmt(StmtKind::Break) {}
};

struct ContinueStmt : Stmt {
    ContinueStmt() : Stmt(StmtKind::Continue) {}
};

struct ImportAlias {
    std::string name;
    std::string asname;
};

struct ImportStmt : Stmt {
    std::vector<ImportAlias> names;
    ImportStmt() : Stmt(StmtKind::Import) {}
};

struct ImportFromStmt : Stmt {
    std::string module;
    int level = 0;  // leading dots
    std::vector<ImportAlias> names;
    bool star = false;
    ImportFromStmt() : Stmt(StmtKind::ImportFrom) {}
};

struct ScopeDeclStmt : Stmt {  // global / nonlocal
    std::vector<std::string> names;
    explicit ScopeDeclStmt(StmtKind k) : Stmt(k) {}
};

struct IfStmt : Stmt {
    ExprPtr test;
    StmtList body, orelse;
    int orelse_line = 0;  // line of the else keyword, 0 when absent
    IfStmt() : Stmt(StmtKind::If) {}
};

struct WhileStmt : Stmt {
    ExprPtr test;
    StmtList body, orelse;
    int orelse_line = 0;
    WhileStmt() : Stmt(StmtKind::While) {}
};

struct ForStmt : Stmt {
    ExprPtr target, iter;
    StmtList body, orelse;
    int orelse_line = 0;
    bool is_async = false;
    ForStmt() : Stmt(StmtKind::For) {}
};

struct ExceptHandler {
    ExprPtr type;      // may be null (bare except)
    std::string name;  // "as" binding, may be empty
    StmtList body;
    int line = 0;
};

struct TryStmt : Stmt {
    StmtList body;
    std::vector<ExceptHandler> handlers;
    StmtList orelse, finally_body;
    TryStmt() : Stmt(StmtKind::Try) {}
};

struct WithItem {
    ExprPtr context;
    ExprPtr optional_vars;  // may be null
};

struct WithStmt : Stmt {
    std::vector<WithItem> items;
    StmtList body;
    bool is_async = false;
    WithStmt() : Stmt(StmtKind::With) {}
};

struct FuncDefStmt : Stmt {
    std::string name;
    std::vector<Param> params;
    ExprPtr returns;  // may be null
    StmtList body;
    std::vector<ExprPtr> decorators;
    bool is_async = false;
    FuncDefStmt() : Stmt(StmtKind::FuncDef) {}
};

struct ClassDefStmt : Stmt {
    std::string name;
    std::vector<ExprPtr> bases;
    std::vector<std::pair<std::string, ExprPtr>> keywords;
    StmtList body;
    std::vector<ExprPtr> decorators;
    ClassDefStmt() : Stmt(StmtKind::ClassDef) {}
};

// ---------------------------------------------------------------------------
// Traversal helpers.

// Pre-order walk over every statement, descending into nested suites.
// The callback may return false to skip the children of that statement.
void walk_statements(const StmtList& stmts, const std::function<bool(const Stmt&)>& fn);

// Pre-order walk over an expression tree, including f-string interpolations,
// comprehension parts, call arguments, and lambda bodies.
void walk_expressions(const Expr& expr, const std::function<void(const Expr&)>& fn);

// Walk every expression appearing directly in one statement (tests, targets,
// values, decorators, with-items...) without descending into nested statements.
void for_each_expr_in_stmt(const Stmt& stmt, const std::function<void(const Expr&)>& fn);

// Child suites of a compound statement, in source order.
std::vector<const StmtList*> child_suites(const Stmt& stmt);

// Collect all Name identifiers in an expression tree.
std::vector<std::string> collect_names(const Expr& expr);

// Constant-fold small non-negative integer expressions (literals, unary +/-,
// and + - * ** over folded operands). Returns false when not a foldable constant
// or when the value overflows long long.
bool fold_const_int(const Expr& expr, long long& out);

}  // namespace loopscan::py
