#include "loopscan/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>

namespace loopscan {

namespace {

using py::Expr;
using py::ExprKind;
using py::Stmt;
using py::StmtKind;

// ---------------------------------------------------------------------------
// lexicon matching

std::vector<std::string> name_components(const std::string& identifier) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : identifier) {
        if (c == '_') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

bool component_equals(const std::string& comp, const std::string& lexeme_part) {
    return comp == lexeme_part || comp == lexeme_part + "s";
}

// lexeme components must appear as a contiguous subsequence of the identifier's
// components; a trailing plural 's' on a component is tolerated.
bool identifier_matches(const std::string& identifier, const std::string& lexeme) {
    if (identifier == lexeme) return true;
    std::vector<std::string> id_parts = name_components(identifier);
    std::vector<std::string> lex_parts = name_components(lexeme);
    if (lex_parts.empty() || id_parts.size() < lex_parts.size()) return false;
    for (size_t start = 0; start + lex_parts.size() <= id_parts.size(); ++start) {
        bool all = true;
        for (size_t k = 0; k < lex_parts.size(); ++k) {
            if (!component_equals(id_parts[start + k], lex_parts[k])) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool matches_any(const std::string& identifier, const std::vector<std::string>& lexicon) {
    for (const auto& lexeme : lexicon) {
        if (identifier_matches(identifier, lexeme)) return true;
    }
    return false;
}

// names, attribute names, string subscript keys, and keyword argument names
bool expr_mentions_lexicon(const Expr& expr, const std::vector<std::string>& lexicon) {
    bool found = false;
    py::walk_expressions(expr, [&](const Expr& e) {
        if (found) return;
        switch (e.kind) {
            case ExprKind::Name:
                found = matches_any(static_cast<const py::NameExpr&>(e).id, lexicon);
                break;
            case ExprKind::Attribute:
                found = matches_any(static_cast<const py::AttributeExpr&>(e).attr, lexicon);
                break;
            case ExprKind::Subscript: {
                const auto& sub = static_cast<const py::SubscriptExpr&>(e);
                if (sub.index && sub.index->kind == ExprKind::StringLit) {
                    found = matches_any(static_cast<const py::StringLitExpr&>(*sub.index).value,
                                        lexicon);
                }
                break;
            }
            case ExprKind::Call: {
                const auto& call = static_cast<const py::CallExpr&>(e);
                for (const auto& [kwname, value] : call.kwargs) {
                    (void)value;
                    if (!kwname.empty() && matches_any(kwname, lexicon)) {
                        found = true;
                        break;
                    }
                }
                break;
            }
            default:
                break;
        }
    });
    return found;
}

// ---------------------------------------------------------------------------
// small AST utilities

const py::NameExpr* as_name(const Expr* e) {
    return e && e->kind == ExprKind::Name ? static_cast<const py::NameExpr*>(e) : nullptr;
}

const py::CallExpr* as_call(const Expr* e) {
    return e && e->kind == ExprKind::Call ? static_cast<const py::CallExpr*>(e) : nullptr;
}

bool is_name(const Expr* e, const std::string& id) {
    const auto* n = as_name(e);
    return n && n->id == id;
}

// "open", "socket.socket" -> last path component of the callee
std::string callee_last_name(const py::CallExpr& call) {
    if (const auto* n = as_name(call.callee.get())) return n->id;
    if (call.callee && call.callee->kind == ExprKind::Attribute) {
        return static_cast<const py::AttributeExpr&>(*call.callee).attr;
    }
    return "";
}

bool callee_is_plain_name(const py::CallExpr& call, const std::string& id) {
    return is_name(call.callee.get(), id);
}

std::set<std::string> names_in_expr(const Expr& expr) {
    std::set<std::string> out;
    py::walk_expressions(expr, [&out](const Expr& e) {
        if (e.kind == ExprKind::Name) out.insert(static_cast<const py::NameExpr&>(e).id);
    });
    return out;
}

bool expr_contains_kind(const Expr& expr, std::initializer_list<ExprKind> kinds) {
    bool found = false;
    py::walk_expressions(expr, [&](const Expr& e) {
        if (found) return;
        for (ExprKind k : kinds) {
            if (e.kind == k) {
                found = true;
                return;
            }
        }
    });
    return found;
}

void collect_target_names(const Expr& target, std::vector<std::string>& out) {
    py::walk_expressions(target, [&out](const Expr& e) {
        if (e.kind == ExprKind::Name) out.push_back(static_cast<const py::NameExpr&>(e).id);
    });
}

long long fold_or(const Expr* e, long long fallback, bool& ok) {
    long long v = 0;
    if (e && py::fold_const_int(*e, v)) {
        ok = true;
        return v;
    }
    ok = false;
    return fallback;
}

struct ConstRange {
    long long start = 0;
    long long stop = 0;
    long long step = 1;

    bool empty() const {
        return step > 0 ? start >= stop : (step < 0 ? start <= stop : true);
    }
    long long first() const { return start; }
    long long last() const {
        long long n = step > 0 ? (stop - start + step - 1) / step : (start - stop + (-step) - 1) / (-step);
        return start + (n - 1) * step;
    }
    long long min_value() const { return step > 0 ? first() : last(); }
    long long max_value() const { return step > 0 ? last() : first(); }
    bool contains(long long v) const {
        if (empty()) return false;
        if (v < min_value() || v > max_value()) return false;
        return (v - start) % step == 0;
    }
};

// range(...) with constant-foldable arguments
std::optional<ConstRange> const_range_of(const Expr* iter) {
    const auto* call = as_call(iter);
    if (!call || !callee_is_plain_name(*call, "range")) return std::nullopt;
    if (call->args.empty() || call->args.size() > 3 || !call->kwargs.empty()) return std::nullopt;
    ConstRange r;
    bool ok = false;
    if (call->args.size() == 1) {
        r.stop = fold_or(call->args[0].get(), 0, ok);
        if (!ok) return std::nullopt;
    } else {
        r.start = fold_or(call->args[0].get(), 0, ok);
        if (!ok) return std::nullopt;
        r.stop = fold_or(call->args[1].get(), 0, ok);
        if (!ok) return std::nullopt;
        if (call->args.size() == 3) {
            r.step = fold_or(call->args[2].get(), 1, ok);
            if (!ok || r.step == 0) return std::nullopt;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// statement index: every statement with its ancestor chain

struct StmtCtx {
    const Stmt* stmt = nullptr;
    std::vector<const Stmt*> ancestors;  // outermost first

    const Stmt* innermost_loop() const {
        for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it) {
            if ((*it)->kind == StmtKind::For || (*it)->kind == StmtKind::While) return *it;
        }
        return nullptr;
    }

    bool inside_try() const {
        return std::any_of(ancestors.begin(), ancestors.end(),
                           [](const Stmt* s) { return s->kind == StmtKind::Try; });
    }
};

struct LoopCtx {
    const Stmt* stmt = nullptr;
    const py::ForStmt* as_for = nullptr;
    const py::WhileStmt* as_while = nullptr;
    std::vector<const Stmt*> ancestors;
    std::vector<std::string> target_names;  // for-loops only

    const py::StmtList& body() const { return as_for ? as_for->body : as_while->body; }
    const py::StmtList& orelse() const { return as_for ? as_for->orelse : as_while->orelse; }
    int orelse_line() const { return as_for ? as_for->orelse_line : as_while->orelse_line; }
};

struct AssignInfo {
    const py::AssignStmt* stmt = nullptr;
    std::string name;  // single plain-name target only
    int line = 0;
};

struct Index {
    std::vector<StmtCtx> statements;
    std::vector<LoopCtx> loops;
    std::vector<AssignInfo> simple_assigns;  // module-wide, in source order
    std::map<const Stmt*, size_t> loop_of;   // loop stmt -> index into loops

    const LoopCtx* loop_ctx(const Stmt* loop_stmt) const {
        auto it = loop_of.find(loop_stmt);
        return it == loop_of.end() ? nullptr : &loops[it->second];
    }
};

void index_stmts(const py::StmtList& stmts, std::vector<const Stmt*>& stack, Index& index) {
    for (const auto& sp : stmts) {
        if (!sp) continue;
        const Stmt& s = *sp;
        index.statements.push_back({&s, stack});
        if (s.kind == StmtKind::For || s.kind == StmtKind::While) {
            LoopCtx loop;
            loop.stmt = &s;
            loop.ancestors = stack;
            if (s.kind == StmtKind::For) {
                loop.as_for = static_cast<const py::ForStmt*>(&s);
                if (loop.as_for->target) collect_target_names(*loop.as_for->target, loop.target_names);
            } else {
                loop.as_while = static_cast<const py::WhileStmt*>(&s);
            }
            index.loop_of[&s] = index.loops.size();
            index.loops.push_back(std::move(loop));
        }
        if (s.kind == StmtKind::Assign) {
            const auto& assign = static_cast<const py::AssignStmt&>(s);
            if (assign.targets.size() == 1) {
                if (const auto* n = as_name(assign.targets[0].get())) {
                    index.simple_assigns.push_back({&assign, n->id, s.line});
                }
            }
        }
        stack.push_back(&s);
        for (const py::StmtList* suite : py::child_suites(s)) index_stmts(*suite, stack, index);
        stack.pop_back();
    }
}

// visit statements of a suite, not descending into nested function/class bodies
void walk_scope(const py::StmtList& stmts, const std::function<void(const Stmt&)>& fn) {
    for (const auto& sp : stmts) {
        if (!sp) continue;
        fn(*sp);
        if (sp->kind == StmtKind::FuncDef || sp->kind == StmtKind::ClassDef) continue;
        for (const py::StmtList* suite : py::child_suites(*sp)) walk_scope(*suite, fn);
    }
}

// names at true binding positions of a target expression; subscript and
// attribute stores mutate an object without rebinding any name
void collect_binding_names(const Expr& target, std::set<std::string>& out) {
    switch (target.kind) {
        case ExprKind::Name:
            out.insert(static_cast<const py::NameExpr&>(target).id);
            break;
        case ExprKind::Tuple:
        case ExprKind::List:
            for (const auto& el : static_cast<const py::SequenceExpr&>(target).elements) {
                if (el) collect_binding_names(*el, out);
            }
            break;
        case ExprKind::Starred:
            if (const auto& inner = static_cast<const py::StarredExpr&>(target).value) {
                collect_binding_names(*inner, out);
            }
            break;
        default:
            break;
    }
}

// names (re)bound anywhere in a suite: assignment targets, loop targets,
// with-as names, walrus targets, del targets
std::set<std::string> bound_names_in_suite(const py::StmtList& body) {
    std::set<std::string> bound;
    auto add_target = [&bound](const Expr* target) {
        if (!target) return;
        collect_binding_names(*target, bound);
    };
    walk_scope(body, [&](const Stmt& s) {
        switch (s.kind) {
            case StmtKind::Assign:
                for (const auto& t : static_cast<const py::AssignStmt&>(s).targets) add_target(t.get());
                break;
            case StmtKind::AugAssign:
                add_target(static_cast<const py::AugAssignStmt&>(s).target.get());
                break;
            case StmtKind::AnnAssign:
                add_target(static_cast<const py::AnnAssignStmt&>(s).target.get());
                break;
            case StmtKind::For:
                add_target(static_cast<const py::ForStmt&>(s).target.get());
                break;
            case StmtKind::With:
                for (const auto& item : static_cast<const py::WithStmt&>(s).items) {
                    add_target(item.optional_vars.get());
                }
                break;
            case StmtKind::Del:
                for (const auto& t : static_cast<const py::DelStmt&>(s).targets) add_target(t.get());
                break;
            default:
                break;
        }
        py::for_each_expr_in_stmt(s, [&bound](const Expr& top) {
            py::walk_expressions(top, [&bound](const Expr& e) {
                if (e.kind == ExprKind::Named) {
                    const auto& w = static_cast<const py::NamedExpr&>(e);
                    if (const auto* n = as_name(w.target.get())) bound.insert(n->id);
                }
            });
        });
    });
    return bound;
}

// names with a mutating method call on them inside a suite (x.append(...), ...)
std::set<std::string> method_mutated_names(const py::StmtList& body) {
    static const std::set<std::string> kMutators = {
        "append", "extend", "insert", "add",  "update",  "pop",     "remove",
        "clear",  "discard", "sort",  "reverse", "setdefault", "write", "writelines",
        "appendleft", "popleft",
    };
    std::set<std::string> mutated;
    walk_scope(body, [&mutated](const Stmt& s) {
        py::for_each_expr_in_stmt(s, [&mutated](const Expr& top) {
            py::walk_expressions(top, [&mutated](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call || !call->callee || call->callee->kind != ExprKind::Attribute) return;
                const auto& attr = static_cast<const py::AttributeExpr&>(*call->callee);
                if (!kMutators.count(attr.attr)) return;
                if (const auto* base = as_name(attr.object.get())) mutated.insert(base->id);
            });
        });
    });
    return mutated;
}

// break statements belonging to this loop (nested loops capture their own)
bool has_break_at_loop_level(const py::StmtList& body) {
    for (const auto& sp : body) {
        if (!sp) continue;
        if (sp->kind == StmtKind::Break) return true;
        if (sp->kind == StmtKind::For || sp->kind == StmtKind::While) continue;
        if (sp->kind == StmtKind::FuncDef || sp->kind == StmtKind::ClassDef) continue;
        for (const py::StmtList* suite : py::child_suites(*sp)) {
            if (has_break_at_loop_level(*suite)) return true;
        }
    }
    return false;
}

bool has_return_or_raise(const py::StmtList& body) {
    bool found = false;
    walk_scope(body, [&found](const Stmt& s) {
        if (s.kind == StmtKind::Return || s.kind == StmtKind::Raise) found = true;
    });
    return found;
}

void walk_exprs_in_suite(const py::StmtList& body, const std::function<void(const Expr&, const Stmt&)>& fn) {
    walk_scope(body, [&fn](const Stmt& s) {
        py::for_each_expr_in_stmt(s, [&fn, &s](const Expr& top) {
            py::walk_expressions(top, [&fn, &s](const Expr& e) { fn(e, s); });
        });
    });
}

// latest simple assignment to `name` strictly before `line`
const AssignInfo* latest_binding_before(const Index& index, const std::string& name, int line) {
    const AssignInfo* best = nullptr;
    for (const auto& info : index.simple_assigns) {
        if (info.name == name && info.line < line) {
            if (!best || info.line > best->line) best = &info;
        }
    }
    return best;
}

bool is_empty_list_literal(const Expr* e) {
    return e && e->kind == ExprKind::List &&
           static_cast<const py::SequenceExpr*>(e)->elements.empty();
}

bool is_list_initializer(const Expr* e) {
    if (!e) return false;
    if (e->kind == ExprKind::List) return true;
    const auto* call = as_call(e);
    return call && callee_is_plain_name(*call, "list");
}

// ---------------------------------------------------------------------------
// detector context

struct Ctx {
    const ParsedSource& source;
    const DetectorConfig& config;
    Index index;
    std::vector<Finding> findings;

    Ctx(const ParsedSource& src, const DetectorConfig& cfg) : source(src), config(cfg) {
        std::vector<const Stmt*> stack;
        index_stmts(src.module.body, stack, index);
    }

    void emit(PatternKind kind, int line, std::string message) {
        Finding f;
        f.sample_id = source.sample_id;
        f.line = line;
        f.kind = kind;
        f.category = category_of(kind);
        f.message = std::move(message);
        f.origin = FindingOrigin::rule();
        f.confidence = 1.0;
        findings.push_back(std::move(f));
    }

    bool loop_target_anywhere(const StmtCtx& ctx, const std::string& name) const {
        for (const Stmt* anc : ctx.ancestors) {
            if (anc->kind != StmtKind::For) continue;
            const auto* lc = index.loop_ctx(anc);
            if (lc && std::find(lc->target_names.begin(), lc->target_names.end(), name) !=
                          lc->target_names.end()) {
                return true;
            }
        }
        return false;
    }
};

// ===========================================================================
// loop control and logic rules
// ===========================================================================

void detect_infinite_loop(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_while || !loop.as_while->test) continue;
        const Expr& test = *loop.as_while->test;
        bool can_exit = has_break_at_loop_level(loop.body()) || has_return_or_raise(loop.body());
        if (can_exit) continue;

        bool const_true = test.kind == ExprKind::BoolLit &&
                          static_cast<const py::BoolLitExpr&>(test).value;
        if (const_true) {
            ctx.emit(PatternKind::InfiniteLoop, loop.stmt->line,
                     "'while True' loop with no break, return, or raise in the body");
            continue;
        }
        // condition over plain variables only, none of which the body updates
        if (expr_contains_kind(test, {ExprKind::Call, ExprKind::Attribute, ExprKind::Subscript,
                                      ExprKind::Await, ExprKind::Yield, ExprKind::Named})) {
            continue;
        }
        std::set<std::string> cond_names = names_in_expr(test);
        if (cond_names.empty()) continue;
        std::set<std::string> bound = bound_names_in_suite(loop.body());
        bool any_updated = std::any_of(cond_names.begin(), cond_names.end(),
                                       [&bound](const std::string& n) { return bound.count(n) > 0; });
        if (!any_updated) {
            ctx.emit(PatternKind::InfiniteLoop, loop.stmt->line,
                     "loop condition variables are never updated in the body and no break, "
                     "return, or raise can exit");
        }
    }
}

struct IntentDecl {
    long long from = 0;
    long long to = 0;
};

std::vector<IntentDecl> intent_declarations(const std::vector<py::CommentTok>& comments) {
    static const std::regex kKeyword(R"((intention|intended|should|expected|expect|want|must))",
                                     std::regex::icase);
    static const std::regex kPair(R"((\d+)\s*(?:to|through|\.\.|-|–)\s*(\d+))", std::regex::icase);
    std::vector<IntentDecl> out;
    for (const auto& comment : comments) {
        if (!std::regex_search(comment.text, kKeyword)) continue;
        std::smatch m;
        if (std::regex_search(comment.text, m, kPair)) {
            out.push_back({std::stoll(m[1].str()), std::stoll(m[2].str())});
        }
    }
    return out;
}

void detect_off_by_one(Ctx& ctx) {
    std::vector<IntentDecl> intents = intent_declarations(ctx.source.module.comments);
    std::set<int> fired_lines;

    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_for) continue;
        const auto* call = as_call(loop.as_for->iter.get());
        if (!call || !callee_is_plain_name(*call, "range") || call->args.size() != 2) continue;

        long long start = 0, stop = 0;
        bool start_ok = false, stop_ok = false;
        start = fold_or(call->args[0].get(), 0, start_ok);
        stop = fold_or(call->args[1].get(), 0, stop_ok);

        if (start_ok && stop_ok) {
            for (const IntentDecl& intent : intents) {
                if (intent.from == start && intent.to == stop && intent.to >= intent.from &&
                    fired_lines.insert(loop.stmt->line).second) {
                    ctx.emit(PatternKind::OffByOne, loop.stmt->line,
                             "heuristic: range(" + std::to_string(start) + ", " +
                                 std::to_string(stop) + ") stops at " + std::to_string(stop - 1) +
                                 " but a nearby comment states the intent " +
                                 std::to_string(intent.from) + " to " + std::to_string(intent.to));
                }
            }
            continue;
        }

        // range(a, n) where n is elsewhere used as an inclusive bound (x <= n)
        const auto* bound_name = as_name(call->args[1].get());
        if (!bound_name) continue;
        bool inclusive_use = false;
        for (const StmtCtx& sc : ctx.index.statements) {
            py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
                py::walk_expressions(top, [&](const Expr& e) {
                    if (inclusive_use || e.kind != ExprKind::Compare) return;
                    const auto& cmp = static_cast<const py::CompareExpr&>(e);
                    const Expr* lhs = cmp.first.get();
                    for (const auto& [op, rhs] : cmp.rest) {
                        if (op == py::CmpOpKind::LtE && is_name(rhs.get(), bound_name->id)) {
                            inclusive_use = true;
                        }
                        if (op == py::CmpOpKind::GtE && is_name(lhs, bound_name->id)) {
                            inclusive_use = true;
                        }
                        lhs = rhs.get();
                    }
                });
            });
        }
        if (inclusive_use && fired_lines.insert(loop.stmt->line).second) {
            ctx.emit(PatternKind::OffByOne, loop.stmt->line,
                     "heuristic: '" + bound_name->id +
                         "' is used as an inclusive bound elsewhere but range() excludes it");
        }
    }
}

void detect_control_flow_misuse(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (loop.orelse().empty()) continue;
        int anchor = loop.orelse_line() > 0 ? loop.orelse_line() : loop.orelse().front()->line;

        bool unconditional_break = std::any_of(
            loop.body().begin(), loop.body().end(),
            [](const py::StmtPtr& s) { return s && s->kind == StmtKind::Break; });
        if (unconditional_break) {
            ctx.emit(PatternKind::ControlFlowMisuse, anchor,
                     "the loop body always breaks, so the else clause never runs");
            continue;
        }

        // conditional break guaranteed to fire: loop var == constant inside its range
        if (!loop.as_for || loop.target_names.size() != 1) continue;
        auto range = const_range_of(loop.as_for->iter.get());
        if (!range || range->empty()) continue;
        for (const auto& sp : loop.body()) {
            if (!sp || sp->kind != StmtKind::If) continue;
            const auto& ifstmt = static_cast<const py::IfStmt&>(*sp);
            bool has_break = has_break_at_loop_level(ifstmt.body);
            if (!has_break || !ifstmt.test || ifstmt.test->kind != ExprKind::Compare) continue;
            const auto& cmp = static_cast<const py::CompareExpr&>(*ifstmt.test);
            if (cmp.rest.size() != 1 || cmp.rest[0].first != py::CmpOpKind::Eq) continue;
            const Expr* lhs = cmp.first.get();
            const Expr* rhs = cmp.rest[0].second.get();
            long long constant = 0;
            const py::NameExpr* var = nullptr;
            if ((var = as_name(lhs)) && py::fold_const_int(*rhs, constant)) {
            } else if ((var = as_name(rhs)) && py::fold_const_int(*lhs, constant)) {
            } else {
                continue;
            }
            if (var->id == loop.target_names.front() && range->contains(constant)) {
                ctx.emit(PatternKind::ControlFlowMisuse, anchor,
                         "the break on " + var->id + " == " + std::to_string(constant) +
                             " always fires for this range, so the else clause never runs");
                break;
            }
        }
    }
}

void detect_loop_var_reassignment(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_for || loop.target_names.empty()) continue;
        std::set<std::string> targets(loop.target_names.begin(), loop.target_names.end());
        walk_scope(loop.body(), [&](const Stmt& s) {
            const Expr* target = nullptr;
            if (s.kind == StmtKind::Assign) {
                const auto& assign = static_cast<const py::AssignStmt&>(s);
                for (const auto& t : assign.targets) {
                    if (const auto* n = as_name(t.get()); n && targets.count(n->id)) target = t.get();
                }
            } else if (s.kind == StmtKind::AugAssign) {
                const auto& aug = static_cast<const py::AugAssignStmt&>(s);
                if (const auto* n = as_name(aug.target.get()); n && targets.count(n->id)) {
                    target = aug.target.get();
                }
            } else if (s.kind == StmtKind::AnnAssign) {
                const auto& ann = static_cast<const py::AnnAssignStmt&>(s);
                if (ann.value) {
                    if (const auto* n = as_name(ann.target.get()); n && targets.count(n->id)) {
                        target = ann.target.get();
                    }
                }
            }
            if (target) {
                ctx.emit(PatternKind::LoopVarReassignment, s.line,
                         "the loop variable '" + static_cast<const py::NameExpr*>(target)->id +
                             "' is reassigned inside the body");
            }
        });
    }
}

void detect_dead_unreachable_code(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_for || loop.target_names.size() != 1) continue;
        auto range = const_range_of(loop.as_for->iter.get());
        if (!range || range->empty()) continue;
        const std::string& var = loop.target_names.front();

        // ifs at any non-loop nesting inside this loop body
        std::function<void(const py::StmtList&)> scan = [&](const py::StmtList& stmts) {
            for (const auto& sp : stmts) {
                if (!sp) continue;
                if (sp->kind == StmtKind::For || sp->kind == StmtKind::While ||
                    sp->kind == StmtKind::FuncDef || sp->kind == StmtKind::ClassDef) {
                    continue;
                }
                if (sp->kind == StmtKind::If) {
                    const auto& ifstmt = static_cast<const py::IfStmt&>(*sp);
                    if (ifstmt.test && ifstmt.test->kind == ExprKind::Compare) {
                        const auto& cmp = static_cast<const py::CompareExpr&>(*ifstmt.test);
                        if (cmp.rest.size() == 1) {
                            py::CmpOpKind op = cmp.rest[0].first;
                            const Expr* lhs = cmp.first.get();
                            const Expr* rhs = cmp.rest[0].second.get();
                            long long constant = 0;
                            bool var_on_left = false, usable = false;
                            if (is_name(lhs, var) && py::fold_const_int(*rhs, constant)) {
                                var_on_left = true;
                                usable = true;
                            } else if (is_name(rhs, var) && py::fold_const_int(*lhs, constant)) {
                                usable = true;
                            }
                            if (usable) {
                                if (!var_on_left) {
                                    // C op v  ->  v flipped(op) C
                                    switch (op) {
                                        case py::CmpOpKind::Lt: op = py::CmpOpKind::Gt; break;
                                        case py::CmpOpKind::LtE: op = py::CmpOpKind::GtE; break;
                                        case py::CmpOpKind::Gt: op = py::CmpOpKind::Lt; break;
                                        case py::CmpOpKind::GtE: op = py::CmpOpKind::LtE; break;
                                        default: break;
                                    }
                                }
                                long long lo = range->min_value();
                                long long hi = range->max_value();
                                int verdict = 0;  // 1 always, -1 never, 0 mixed
                                switch (op) {
                                    case py::CmpOpKind::Lt:
                                        verdict = hi < constant ? 1 : (lo >= constant ? -1 : 0);
                                        break;
                                    case py::CmpOpKind::LtE:
                                        verdict = hi <= constant ? 1 : (lo > constant ? -1 : 0);
                                        break;
                                    case py::CmpOpKind::Gt:
                                        verdict = lo > constant ? 1 : (hi <= constant ? -1 : 0);
                                        break;
                                    case py::CmpOpKind::GtE:
                                        verdict = lo >= constant ? 1 : (hi < constant ? -1 : 0);
                                        break;
                                    case py::CmpOpKind::Eq:
                                        verdict = (lo == hi && lo == constant)
                                                      ? 1
                                                      : (!range->contains(constant) ? -1 : 0);
                                        break;
                                    case py::CmpOpKind::NotEq:
                                        verdict = !range->contains(constant)
                                                      ? 1
                                                      : ((lo == hi && lo == constant) ? -1 : 0);
                                        break;
                                    default:
                                        verdict = 0;
                                }
                                if (verdict == 1 && !ifstmt.orelse.empty()) {
                                    ctx.emit(PatternKind::DeadUnreachableCode,
                                             ifstmt.orelse.front()->line,
                                             "the condition on '" + var +
                                                 "' is always true for this range, so the else "
                                                 "branch is unreachable");
                                } else if (verdict == -1 && !ifstmt.body.empty()) {
                                    ctx.emit(PatternKind::DeadUnreachableCode,
                                             ifstmt.body.front()->line,
                                             "the condition on '" + var +
                                                 "' is always false for this range, so this "
                                                 "branch is unreachable");
                                }
                            }
                        }
                    }
                }
                for (const py::StmtList* suite : py::child_suites(*sp)) scan(*suite);
            }
        };
        scan(loop.body());
    }
}

// ===========================================================================
// security rules
// ===========================================================================

bool is_logging_call(const py::CallExpr& call) {
    if (callee_is_plain_name(call, "print")) return true;
    if (!call.callee || call.callee->kind != ExprKind::Attribute) return false;
    static const std::set<std::string> kLogMethods = {"debug", "info", "warning", "error",
                                                      "critical", "exception", "log"};
    const auto& attr = static_cast<const py::AttributeExpr&>(*call.callee);
    if (!kLogMethods.count(attr.attr)) return false;
    const auto* base = as_name(attr.object.get());
    if (!base) return false;
    for (const std::string& comp : name_components(base->id)) {
        if (comp == "log" || comp == "logger" || comp == "logging") return true;
    }
    return false;
}

void detect_sensitive_data_logging(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (!sc.innermost_loop()) continue;
        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call || !is_logging_call(*call)) return;
                bool secret = false;
                for (const auto& arg : call->args) {
                    if (arg && expr_mentions_lexicon(*arg, ctx.config.secret_lexicon)) secret = true;
                }
                for (const auto& [name, value] : call->kwargs) {
                    (void)name;
                    if (value && expr_mentions_lexicon(*value, ctx.config.secret_lexicon)) secret = true;
                }
                if (secret) {
                    ctx.emit(PatternKind::SensitiveDataLogging, e.line,
                             "a logging call inside the loop exposes a value matching the secret "
                             "lexicon");
                }
            });
        });
    }
}

bool compares_user_derived(const Expr& test, const LoopCtx* loop, const DetectorConfig& config) {
    bool found = false;
    py::walk_expressions(test, [&](const Expr& e) {
        if (found || e.kind != ExprKind::Compare) return;
        py::walk_expressions(e, [&](const Expr& inner) {
            if (found || inner.kind != ExprKind::Name) return;
            const std::string& id = static_cast<const py::NameExpr&>(inner).id;
            if (loop && std::find(loop->target_names.begin(), loop->target_names.end(), id) !=
                            loop->target_names.end()) {
                found = true;
                return;
            }
            if (matches_any(id, config.user_input_lexicon)) found = true;
        });
    });
    return found;
}

void detect_timing_side_channel(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind != StmtKind::If) continue;
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        const auto& ifstmt = static_cast<const py::IfStmt&>(*sc.stmt);
        if (!ifstmt.test) continue;
        const LoopCtx* loop = ctx.index.loop_ctx(loop_stmt);
        if (!compares_user_derived(*ifstmt.test, loop, ctx.config)) continue;
        walk_exprs_in_suite(ifstmt.body, [&](const Expr& e, const Stmt&) {
            const auto* call = as_call(&e);
            if (!call) return;
            std::string name = callee_last_name(*call);
            if (name.size() >= 5 && name.compare(name.size() - 5, 5, "sleep") == 0) {
                ctx.emit(PatternKind::TimingSideChannel, e.line,
                         "a sleep that only happens for particular input values leaks "
                         "information through response timing");
            }
        });
    }
}

void detect_missing_authorization(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        const LoopCtx* loop = ctx.index.loop_ctx(loop_stmt);
        if (!loop) continue;

        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call) return;
                std::string name = callee_last_name(*call);
                if (name.empty() || !matches_any(name, ctx.config.destructive_lexicon)) return;

                // authorization evidence anywhere inside the loop statement
                bool authorized = false;
                auto check_expr = [&](const Expr& candidate) {
                    py::walk_expressions(candidate, [&](const Expr& inner) {
                        if (authorized) return;
                        if (const auto* c = as_call(&inner)) {
                            std::string cn = callee_last_name(*c);
                            if (!cn.empty() && matches_any(cn, ctx.config.auth_lexicon)) {
                                authorized = true;
                            }
                        }
                        if (inner.kind == ExprKind::Name &&
                            matches_any(static_cast<const py::NameExpr&>(inner).id,
                                        ctx.config.auth_lexicon)) {
                            authorized = true;
                        }
                    });
                };
                walk_scope(loop->body(), [&](const Stmt& s) {
                    py::for_each_expr_in_stmt(s, check_expr);
                });
                if (!authorized) {
                    ctx.emit(PatternKind::MissingAuthorization, e.line,
                             "'" + name + "' performs a destructive operation with no "
                             "authorization check anywhere in the loop");
                }
            });
        });
    }
}

void detect_insecure_eval_injection(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (!sc.innermost_loop()) continue;
        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call) return;
                if (!callee_is_plain_name(*call, "eval") && !callee_is_plain_name(*call, "exec")) return;
                if (call->args.empty()) return;
                if (call->args[0]->kind == ExprKind::StringLit) return;
                ctx.emit(PatternKind::InsecureEvalInjection, e.line,
                         "dynamic evaluation of non-literal data inside a loop enables code "
                         "injection");
            });
        });
    }
}

void detect_unvalidated_loop_bound(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        const Expr* header = loop.as_for ? loop.as_for->iter.get()
                                         : loop.as_while->test.get();
        if (!header) continue;
        bool has_input = false, has_clamp = false;
        py::walk_expressions(*header, [&](const Expr& e) {
            const auto* call = as_call(&e);
            if (!call) return;
            if (callee_is_plain_name(*call, "input")) has_input = true;
            if (callee_is_plain_name(*call, "min")) has_clamp = true;
        });
        if (has_input && !has_clamp) {
            ctx.emit(PatternKind::UnvalidatedLoopBound, loop.stmt->line,
                     "the loop bound is taken directly from input() with no clamp");
        }
    }
}

bool iterates_user_controlled(const LoopCtx& loop, const DetectorConfig& config) {
    if (loop.as_while) {
        const Expr* test = loop.as_while->test.get();
        return test && test->kind == ExprKind::BoolLit &&
               static_cast<const py::BoolLitExpr*>(test)->value;  // while True is unbounded
    }
    if (!loop.as_for || !loop.as_for->iter) return false;
    for (const std::string& name : names_in_expr(*loop.as_for->iter)) {
        if (matches_any(name, config.user_input_lexicon)) return true;
    }
    return false;
}

void detect_resource_exhaustion(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!iterates_user_controlled(loop, ctx.config)) continue;

        bool any_connect = false;
        walk_exprs_in_suite(loop.body(), [&](const Expr& e, const Stmt&) {
            const auto* call = as_call(&e);
            if (call && call->callee && call->callee->kind == ExprKind::Attribute &&
                static_cast<const py::AttributeExpr&>(*call->callee).attr == "connect") {
                any_connect = true;
            }
        });

        walk_exprs_in_suite(loop.body(), [&](const Expr& e, const Stmt&) {
            const auto* call = as_call(&e);
            if (!call) return;
            if (callee_is_plain_name(*call, "open")) {
                std::string mode;
                if (call->args.size() >= 2 && call->args[1]->kind == ExprKind::StringLit) {
                    mode = static_cast<const py::StringLitExpr&>(*call->args[1]).value;
                }
                for (const auto& [kwname, value] : call->kwargs) {
                    if (kwname == "mode" && value && value->kind == ExprKind::StringLit) {
                        mode = static_cast<const py::StringLitExpr&>(*value).value;
                    }
                }
                if (mode.find('w') != std::string::npos || mode.find('a') != std::string::npos ||
                    mode.find('x') != std::string::npos) {
                    ctx.emit(PatternKind::ResourceExhaustion, e.line,
                             "a file is created or appended on every iteration over externally "
                             "controlled input");
                }
                return;
            }
            // raw socket churn; connected sockets are the unsafe-network rule's domain
            std::string name = callee_last_name(*call);
            if (name == "socket" && !any_connect) {
                ctx.emit(PatternKind::ResourceExhaustion, e.line,
                         "a socket is created on every iteration over externally controlled "
                         "input");
            }
        });
    }
}

void detect_unencrypted_sensitive_storage(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (!sc.innermost_loop()) continue;
        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call || !call->callee || call->callee->kind != ExprKind::Attribute) return;
                const std::string& attr = static_cast<const py::AttributeExpr&>(*call->callee).attr;
                if (attr != "write" && attr != "writelines") return;
                for (const auto& arg : call->args) {
                    if (arg && expr_mentions_lexicon(*arg, ctx.config.secret_lexicon)) {
                        ctx.emit(PatternKind::UnencryptedSensitiveStorage, e.line,
                                 "sensitive fields are written to storage in plaintext");
                        return;
                    }
                }
            });
        });
    }
}

void detect_hardcoded_secret(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (!sc.innermost_loop()) continue;
        const Stmt& s = *sc.stmt;
        const Expr* target = nullptr;
        const Expr* value = nullptr;
        if (s.kind == StmtKind::Assign) {
            const auto& assign = static_cast<const py::AssignStmt&>(s);
            if (assign.targets.size() == 1) {
                target = assign.targets[0].get();
                value = assign.value.get();
            }
        } else if (s.kind == StmtKind::AnnAssign) {
            const auto& ann = static_cast<const py::AnnAssignStmt&>(s);
            target = ann.target.get();
            value = ann.value.get();
        }
        if (target && value) {
            const auto* n = as_name(target);
            if (n && matches_any(n->id, ctx.config.secret_lexicon) &&
                value->kind == ExprKind::StringLit &&
                !static_cast<const py::StringLitExpr*>(value)->is_bytes &&
                !static_cast<const py::StringLitExpr*>(value)->value.empty()) {
                ctx.emit(PatternKind::HardcodedSecret, s.line,
                         "'" + n->id + "' is assigned a literal credential inside the loop");
            }
        }
        py::for_each_expr_in_stmt(s, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                const auto* call = as_call(&e);
                if (!call) return;
                std::string name = callee_last_name(*call);
                if (name.empty() || !matches_any(name, ctx.config.auth_lexicon)) return;
                for (const auto& arg : call->args) {
                    if (arg && arg->kind == ExprKind::StringLit &&
                        !static_cast<const py::StringLitExpr&>(*arg).value.empty()) {
                        ctx.emit(PatternKind::HardcodedSecret, e.line,
                                 "a literal credential is passed to '" + name + "'");
                        return;
                    }
                }
            });
        });
    }
}

void detect_unsafe_network_file_op(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (loop.target_names.empty()) continue;

        bool has_validation = false, has_timeout = false;
        std::vector<std::pair<const py::CallExpr*, int>> connects;

        auto inspect = [&](const Expr& e, const Stmt&) {
            const auto* call = as_call(&e);
            if (!call) return;
            std::string name = callee_last_name(*call);
            if (name == "settimeout") has_timeout = true;
            if (!name.empty() && matches_any(name, ctx.config.validation_lexicon)) has_validation = true;
            for (const auto& [kwname, value] : call->kwargs) {
                (void)value;
                if (kwname == "timeout") has_timeout = true;
            }
            if (call->callee && call->callee->kind == ExprKind::Attribute &&
                static_cast<const py::AttributeExpr&>(*call->callee).attr == "connect") {
                for (const auto& arg : call->args) {
                    if (!arg) continue;
                    for (const std::string& n : names_in_expr(*arg)) {
                        if (std::find(loop.target_names.begin(), loop.target_names.end(), n) !=
                            loop.target_names.end()) {
                            connects.emplace_back(call, e.line);
                            return;
                        }
                    }
                }
            }
        };
        walk_exprs_in_suite(loop.body(), inspect);

        if (!has_validation && !has_timeout) {
            for (const auto& [call, line] : connects) {
                (void)call;
                ctx.emit(PatternKind::UnsafeNetworkFileOp, line,
                         "connects to a loop-derived target with neither validation nor a "
                         "timeout");
            }
        }
    }
}

bool sample_flagged_exception_prone(const Ctx& ctx) {
    if (ctx.config.assume_exception_prone) return true;
    static const std::regex kProne(R"(\b(raise|raises|exception|exceptions|may fail)\b)",
                                   std::regex::icase);
    for (const auto& comment : ctx.source.module.comments) {
        if (std::regex_search(comment.text, kProne)) return true;
    }
    return false;
}

void detect_missing_exception_handling(Ctx& ctx) {
    if (!sample_flagged_exception_prone(ctx)) return;
    static const std::set<std::string> kBuiltins = {
        "print", "len",   "range", "int",       "float",     "str",  "bool", "sum",
        "min",   "max",   "abs",   "sorted",    "reversed",  "enumerate", "zip",
        "input", "open",  "repr",  "format",    "type",      "isinstance", "hash",
        "id",    "list",  "dict",  "set",       "tuple",
    };
    for (const LoopCtx& loop : ctx.index.loops) {
        bool in_try = std::any_of(loop.ancestors.begin(), loop.ancestors.end(),
                                  [](const Stmt* s) { return s->kind == StmtKind::Try; });
        if (in_try) continue;
        const py::StmtList& body = loop.body();
        if (body.empty()) continue;
        bool all_bare_calls = true;
        int first_call_line = 0;
        for (const auto& sp : body) {
            const auto* es = sp && sp->kind == StmtKind::Expr
                                 ? static_cast<const py::ExprStmt*>(sp.get())
                                 : nullptr;
            const auto* call = es ? as_call(es->value.get()) : nullptr;
            const auto* callee = call ? as_name(call->callee.get()) : nullptr;
            if (!callee || kBuiltins.count(callee->id)) {
                all_bare_calls = false;
                break;
            }
            if (first_call_line == 0) first_call_line = sp->line;
        }
        if (all_bare_calls && first_call_line > 0) {
            ctx.emit(PatternKind::MissingExceptionHandling, first_call_line,
                     "failure-prone calls run with no try protection, so one error aborts the "
                     "whole loop");
        }
    }
}

// ===========================================================================
// efficiency rules
// ===========================================================================

bool is_pure_call(const py::CallExpr& call) {
    static const std::set<std::string> kPure = {"len",  "abs",   "min",   "max",  "sum",
                                                "pow",  "round", "sorted", "int", "float",
                                                "str",  "bool",  "ord",   "chr",  "divmod"};
    if (const auto* n = as_name(call.callee.get())) return kPure.count(n->id) > 0;
    if (call.callee && call.callee->kind == ExprKind::Attribute) {
        const auto& attr = static_cast<const py::AttributeExpr&>(*call.callee);
        return is_name(attr.object.get(), "math");
    }
    return false;
}

void detect_invariant_recompute(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind != StmtKind::Assign) continue;
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        const LoopCtx* loop = ctx.index.loop_ctx(loop_stmt);
        if (!loop) continue;
        const auto& assign = static_cast<const py::AssignStmt&>(*sc.stmt);
        if (assign.targets.size() != 1 || !as_name(assign.targets[0].get()) || !assign.value) continue;
        const Expr& value = *assign.value;

        // container literals belong to the redundant-object rule; comprehensions
        // and string building have rules of their own
        if (value.kind == ExprKind::Dict || value.kind == ExprKind::List ||
            value.kind == ExprKind::Set || value.kind == ExprKind::Tuple) {
            continue;
        }
        if (expr_contains_kind(value, {ExprKind::ListComp, ExprKind::SetComp, ExprKind::DictComp,
                                       ExprKind::GeneratorExp, ExprKind::Lambda, ExprKind::Await,
                                       ExprKind::Yield, ExprKind::FString, ExprKind::Named})) {
            continue;
        }
        if (!expr_contains_kind(value, {ExprKind::Call, ExprKind::BinOp, ExprKind::UnaryOp,
                                        ExprKind::BoolOp, ExprKind::Compare})) {
            continue;
        }
        bool impure = false;
        py::walk_expressions(value, [&](const Expr& e) {
            if (const auto* call = as_call(&e); call && !is_pure_call(*call)) impure = true;
        });
        if (impure) continue;

        std::set<std::string> bound = bound_names_in_suite(loop->body());
        std::set<std::string> mutated = method_mutated_names(loop->body());
        bool invariant = true;
        for (const std::string& name : names_in_expr(value)) {
            if (bound.count(name) || mutated.count(name) || ctx.loop_target_anywhere(sc, name)) {
                invariant = false;
                break;
            }
        }
        if (invariant) {
            ctx.emit(PatternKind::InvariantRecompute, sc.stmt->line,
                     "this value never changes across iterations and can be computed before "
                     "the loop");
        }
    }
}

void detect_redundant_object_creation(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind != StmtKind::Assign) continue;
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        const LoopCtx* loop = ctx.index.loop_ctx(loop_stmt);
        if (!loop) continue;
        const auto& assign = static_cast<const py::AssignStmt&>(*sc.stmt);
        if (assign.targets.size() != 1 || !assign.value) continue;
        const auto* target = as_name(assign.targets[0].get());
        if (!target) continue;
        ExprKind vk = assign.value->kind;
        if (vk != ExprKind::Dict && vk != ExprKind::List && vk != ExprKind::Set) continue;

        bool loop_dependent = false;
        for (const std::string& name : names_in_expr(*assign.value)) {
            if (ctx.loop_target_anywhere(sc, name)) loop_dependent = true;
        }
        if (loop_dependent) continue;
        if (method_mutated_names(loop->body()).count(target->id)) continue;
        ctx.emit(PatternKind::RedundantObjectCreation, sc.stmt->line,
                 "an identical container literal is rebuilt on every iteration");
    }
}

void detect_string_concat_in_loop(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind != StmtKind::AugAssign) continue;
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        const auto& aug = static_cast<const py::AugAssignStmt&>(*sc.stmt);
        if (aug.op != py::BinOpKind::Add) continue;
        const auto* target = as_name(aug.target.get());
        if (!target) continue;
        const AssignInfo* binding =
            latest_binding_before(ctx.index, target->id, loop_stmt->line);
        if (!binding || !binding->stmt->value) continue;
        if (binding->stmt->value->kind != ExprKind::StringLit) continue;
        ctx.emit(PatternKind::StringConcatInLoop, sc.stmt->line,
                 "'" + target->id + "' is a string accumulator; repeated += copies it every "
                 "iteration");
    }
}

// occurrences of a name across the module, split into iteration and other uses
struct NameUsage {
    int total = 0;
    int as_iteration = 0;
};

NameUsage usage_of(const Ctx& ctx, const std::string& name) {
    NameUsage usage;
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind == StmtKind::For) {
            const auto& loop = static_cast<const py::ForStmt&>(*sc.stmt);
            if (is_name(loop.iter.get(), name)) ++usage.as_iteration;
        }
        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                if (e.kind == ExprKind::Name && static_cast<const py::NameExpr&>(e).id == name) {
                    ++usage.total;
                }
                if (e.kind == ExprKind::ListComp || e.kind == ExprKind::SetComp ||
                    e.kind == ExprKind::GeneratorExp) {
                    for (const auto& gen : static_cast<const py::CompExpr&>(e).generators) {
                        if (is_name(gen.iter.get(), name)) ++usage.as_iteration;
                    }
                } else if (e.kind == ExprKind::DictComp) {
                    for (const auto& gen : static_cast<const py::DictCompExpr&>(e).generators) {
                        if (is_name(gen.iter.get(), name)) ++usage.as_iteration;
                    }
                }
            });
        });
    }
    return usage;
}

void detect_missing_lazy_evaluation(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        if (sc.stmt->kind != StmtKind::Assign) continue;
        const auto& assign = static_cast<const py::AssignStmt&>(*sc.stmt);
        if (assign.targets.size() != 1 || !assign.value) continue;
        const auto* target = as_name(assign.targets[0].get());
        if (!target || assign.value->kind != ExprKind::ListComp) continue;
        const auto& comp = static_cast<const py::CompExpr&>(*assign.value);
        if (comp.generators.size() != 1) continue;
        auto range = const_range_of(comp.generators[0].iter.get());
        if (!range) continue;
        long long extent = std::max(std::llabs(range->start), std::llabs(range->stop));
        if (extent < ctx.config.large_range_threshold) continue;

        NameUsage usage = usage_of(ctx, target->id);
        // every appearance is the binding itself or an iteration position
        if (usage.total == usage.as_iteration + 1) {
            ctx.emit(PatternKind::MissingLazyEvaluation, sc.stmt->line,
                     "a list of about " + std::to_string(extent) +
                         " elements is materialized although '" + target->id +
                         "' is only ever iterated; a generator would be lazy");
        }
    }
}

// names X appearing as len(X) inside an expression
std::set<std::string> len_call_names(const Expr& expr) {
    std::set<std::string> out;
    py::walk_expressions(expr, [&out](const Expr& e) {
        const auto* call = as_call(&e);
        if (call && callee_is_plain_name(*call, "len") && call->args.size() == 1) {
            if (const auto* n = as_name(call->args[0].get())) out.insert(n->id);
        }
    });
    return out;
}

void detect_avoidable_nested_loop(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_for || !loop.as_for->iter || loop.target_names.size() != 1) continue;
        const Stmt* parent_stmt = nullptr;
        for (auto it = loop.ancestors.rbegin(); it != loop.ancestors.rend(); ++it) {
            if ((*it)->kind == StmtKind::For) {
                parent_stmt = *it;
                break;
            }
            if ((*it)->kind == StmtKind::While) break;
        }
        if (!parent_stmt) continue;
        const LoopCtx* parent = ctx.index.loop_ctx(parent_stmt);
        if (!parent || !parent->as_for || !parent->as_for->iter || parent->target_names.size() != 1) continue;

        std::set<std::string> inner_seqs = len_call_names(*loop.as_for->iter);
        std::set<std::string> outer_seqs = len_call_names(*parent->as_for->iter);
        std::string shared;
        for (const std::string& s : inner_seqs) {
            if (outer_seqs.count(s)) shared = s;
        }
        if (shared.empty()) continue;

        const std::string& outer_var = parent->target_names.front();
        const std::string& inner_var = loop.target_names.front();
        bool eq_test = false;
        auto is_indexed = [&shared](const Expr* e, const std::string& var) {
            if (!e || e->kind != ExprKind::Subscript) return false;
            const auto& sub = static_cast<const py::SubscriptExpr&>(*e);
            return is_name(sub.object.get(), shared) && is_name(sub.index.get(), var);
        };
        walk_exprs_in_suite(loop.body(), [&](const Expr& e, const Stmt&) {
            if (eq_test || e.kind != ExprKind::Compare) return;
            const auto& cmp = static_cast<const py::CompareExpr&>(e);
            if (cmp.rest.size() != 1 || cmp.rest[0].first != py::CmpOpKind::Eq) return;
            const Expr* lhs = cmp.first.get();
            const Expr* rhs = cmp.rest[0].second.get();
            if ((is_indexed(lhs, outer_var) && is_indexed(rhs, inner_var)) ||
                (is_indexed(lhs, inner_var) && is_indexed(rhs, outer_var))) {
                eq_test = true;
            }
        });
        if (eq_test) {
            ctx.emit(PatternKind::AvoidableNestedLoop, loop.stmt->line,
                     "this nested scan over '" + shared +
                         "' is quadratic; a set or dict gives the same answer in linear time");
        }
    }
}

void detect_inefficient_membership_check(Ctx& ctx) {
    for (const StmtCtx& sc : ctx.index.statements) {
        const Stmt* loop_stmt = sc.innermost_loop();
        if (!loop_stmt) continue;
        py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
            py::walk_expressions(top, [&](const Expr& e) {
                if (e.kind != ExprKind::Compare) return;
                const auto& cmp = static_cast<const py::CompareExpr&>(e);
                for (const auto& [op, rhs] : cmp.rest) {
                    if (op != py::CmpOpKind::In && op != py::CmpOpKind::NotIn) continue;
                    const auto* container = as_name(rhs.get());
                    if (!container) continue;
                    const AssignInfo* binding =
                        latest_binding_before(ctx.index, container->id, loop_stmt->line);
                    if (!binding || !is_list_initializer(binding->stmt->value.get())) continue;
                    bool mutated =
                        method_mutated_names(ctx.source.module.body).count(container->id) > 0;
                    // rebinding after the initial one also disqualifies
                    for (const auto& info : ctx.index.simple_assigns) {
                        if (info.name == container->id && info.stmt != binding->stmt) mutated = true;
                    }
                    if (!mutated) {
                        ctx.emit(PatternKind::InefficientMembershipCheck, e.line,
                                 "membership test against list '" + container->id +
                                     "' is linear; a set makes it constant time");
                    }
                }
            });
        });
    }
}

// the transform-and-append shape shared by two rules
struct AppendShape {
    bool matches = false;       // body is exactly one append of a pure loop-var expression
    bool large_range = false;   // iterable is a constant range at memory-soak scale
    int append_line = 0;
    std::string list_name;
};

bool pure_value_expr(const Expr& expr) {
    bool ok = true;
    py::walk_expressions(expr, [&ok](const Expr& e) {
        switch (e.kind) {
            case ExprKind::Name:
            case ExprKind::IntLit:
            case ExprKind::FloatLit:
            case ExprKind::StringLit:
            case ExprKind::BoolLit:
            case ExprKind::NoneLit:
            case ExprKind::BinOp:
            case ExprKind::UnaryOp:
            case ExprKind::Tuple:
                break;
            case ExprKind::Call:
                if (!is_pure_call(static_cast<const py::CallExpr&>(e))) ok = false;
                break;
            default:
                ok = false;
        }
    });
    return ok;
}

AppendShape append_shape_of(const Ctx& ctx, const LoopCtx& loop) {
    AppendShape shape;
    if (!loop.as_for || loop.target_names.empty()) return shape;
    const py::StmtList& body = loop.body();
    if (body.size() != 1 || !body[0] || body[0]->kind != StmtKind::Expr) return shape;
    const auto* call = as_call(static_cast<const py::ExprStmt&>(*body[0]).value.get());
    if (!call || !call->callee || call->callee->kind != ExprKind::Attribute) return shape;
    const auto& attr = static_cast<const py::AttributeExpr&>(*call->callee);
    if (attr.attr != "append" || call->args.size() != 1 || !call->kwargs.empty()) return shape;
    const auto* list_name = as_name(attr.object.get());
    if (!list_name || !call->args[0]) return shape;

    const AssignInfo* binding = latest_binding_before(ctx.index, list_name->id, loop.stmt->line);
    if (!binding || !is_empty_list_literal(binding->stmt->value.get())) return shape;

    if (!pure_value_expr(*call->args[0])) return shape;
    std::set<std::string> arg_names = names_in_expr(*call->args[0]);
    bool uses_loop_var = std::any_of(loop.target_names.begin(), loop.target_names.end(),
                                     [&arg_names](const std::string& t) { return arg_names.count(t); });
    if (!uses_loop_var) return shape;

    shape.matches = true;
    shape.append_line = body[0]->line;
    shape.list_name = list_name->id;
    if (auto range = const_range_of(loop.as_for->iter.get())) {
        long long extent = std::max(std::llabs(range->start), std::llabs(range->stop));
        shape.large_range = extent >= ctx.config.large_range_threshold;
    }
    return shape;
}

bool mbc_fires(const Ctx& ctx, const LoopCtx& loop, AppendShape& shape_out) {
    shape_out = append_shape_of(ctx, loop);
    return shape_out.matches && !shape_out.large_range;
}

void detect_missing_builtin_comprehension(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        AppendShape shape;
        if (mbc_fires(ctx, loop, shape)) {
            ctx.emit(PatternKind::MissingBuiltinComprehension, shape.append_line,
                     "the whole loop body is one transform-and-append; a list comprehension is "
                     "faster and clearer");
        }
    }
}

void detect_redundant_io_in_loop(Ctx& ctx) {
    // open() handles bound before/around each loop
    for (const LoopCtx& loop : ctx.index.loops) {
        std::set<std::string> outer_handles;
        for (const Stmt* anc : loop.ancestors) {
            if (anc->kind != StmtKind::With) continue;
            for (const auto& item : static_cast<const py::WithStmt*>(anc)->items) {
                const auto* call = as_call(item.context.get());
                const auto* var = as_name(item.optional_vars.get());
                if (call && var && callee_is_plain_name(*call, "open")) outer_handles.insert(var->id);
            }
        }
        for (const auto& info : ctx.index.simple_assigns) {
            if (info.line >= loop.stmt->line) continue;
            const auto* call = as_call(info.stmt->value.get());
            if (call && callee_is_plain_name(*call, "open")) outer_handles.insert(info.name);
        }
        if (outer_handles.empty()) continue;

        for (const auto& sp : loop.body()) {  // unconditional writes only
            if (!sp || sp->kind != StmtKind::Expr) continue;
            const auto* call = as_call(static_cast<const py::ExprStmt&>(*sp).value.get());
            if (!call || !call->callee || call->callee->kind != ExprKind::Attribute) continue;
            const auto& attr = static_cast<const py::AttributeExpr&>(*call->callee);
            if (attr.attr != "write" && attr.attr != "writelines") continue;
            const auto* handle = as_name(attr.object.get());
            if (handle && outer_handles.count(handle->id)) {
                ctx.emit(PatternKind::RedundantIOInLoop, sp->line,
                         "every iteration writes to '" + handle->id +
                             "'; buffer the rows and write once");
            }
        }
    }
}

void detect_unused_accumulation(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        AppendShape mbc_shape;
        bool mbc = mbc_fires(ctx, loop, mbc_shape);

        for (const auto& sp : loop.body()) {  // unconditional appends at body level
            if (!sp || sp->kind != StmtKind::Expr) continue;
            const auto* call = as_call(static_cast<const py::ExprStmt&>(*sp).value.get());
            if (!call || !call->callee || call->callee->kind != ExprKind::Attribute) continue;
            const auto& attr = static_cast<const py::AttributeExpr&>(*call->callee);
            if (attr.attr != "append") continue;
            const auto* list_name = as_name(attr.object.get());
            if (!list_name) continue;
            const AssignInfo* binding =
                latest_binding_before(ctx.index, list_name->id, loop.stmt->line);
            if (!binding || !is_list_initializer(binding->stmt->value.get())) continue;

            // reads = occurrences that are neither the binding target nor append receivers
            NameUsage usage = usage_of(ctx, list_name->id);
            int append_receivers = 0;
            for (const StmtCtx& sc : ctx.index.statements) {
                py::for_each_expr_in_stmt(*sc.stmt, [&](const Expr& top) {
                    py::walk_expressions(top, [&](const Expr& e) {
                        const auto* c = as_call(&e);
                        if (!c || !c->callee || c->callee->kind != ExprKind::Attribute) return;
                        const auto& a = static_cast<const py::AttributeExpr&>(*c->callee);
                        if (a.attr == "append" && is_name(a.object.get(), list_name->id)) {
                            ++append_receivers;
                        }
                    });
                });
            }
            int bindings = 0;
            for (const auto& info : ctx.index.simple_assigns) {
                if (info.name == list_name->id) ++bindings;
            }
            int reads = usage.total - append_receivers - bindings;
            if (reads <= 0 && !mbc) {
                ctx.emit(PatternKind::UnusedAccumulation, sp->line,
                         "'" + list_name->id + "' grows on every iteration and is never read");
            }
        }
    }
}

void detect_range_len_antipattern(Ctx& ctx) {
    for (const LoopCtx& loop : ctx.index.loops) {
        if (!loop.as_for || loop.target_names.size() != 1) continue;
        const auto* call = as_call(loop.as_for->iter.get());
        if (!call || !callee_is_plain_name(*call, "range") || call->args.size() != 1) continue;
        const auto* len_call = as_call(call->args[0].get());
        if (!len_call || !callee_is_plain_name(*len_call, "len") || len_call->args.size() != 1) continue;
        const auto* seq = as_name(len_call->args[0].get());
        if (!seq) continue;
        const std::string& var = loop.target_names.front();

        bool reads_indexed = false, writes_indexed = false, nested_same_seq = false;
        walk_scope(loop.body(), [&](const Stmt& s) {
            if (s.kind == StmtKind::For) {
                const auto& nested = static_cast<const py::ForStmt&>(s);
                if (nested.iter && len_call_names(*nested.iter).count(seq->id)) nested_same_seq = true;
            }
            auto check_store_target = [&](const Expr* target) {
                if (!target) return;
                py::walk_expressions(*target, [&](const Expr& e) {
                    if (e.kind != ExprKind::Subscript) return;
                    const auto& sub = static_cast<const py::SubscriptExpr&>(e);
                    if (is_name(sub.index.get(), var)) writes_indexed = true;
                });
            };
            if (s.kind == StmtKind::Assign) {
                for (const auto& t : static_cast<const py::AssignStmt&>(s).targets) {
                    check_store_target(t.get());
                }
            } else if (s.kind == StmtKind::AugAssign) {
                check_store_target(static_cast<const py::AugAssignStmt&>(s).target.get());
            } else if (s.kind == StmtKind::AnnAssign) {
                check_store_target(static_cast<const py::AnnAssignStmt&>(s).target.get());
            }
            py::for_each_expr_in_stmt(s, [&](const Expr& top) {
                py::walk_expressions(top, [&](const Expr& e) {
                    if (e.kind != ExprKind::Subscript) return;
                    const auto& sub = static_cast<const py::SubscriptExpr&>(e);
                    if (is_name(sub.index.get(), var)) reads_indexed = true;
                });
            });
        });
        if (reads_indexed && !writes_indexed && !nested_same_seq) {
            ctx.emit(PatternKind::RangeLenAntipattern, loop.stmt->line,
                     "iterating range(len(" + seq->id +
                         ")) for read-only access; iterate directly or use enumerate/zip");
        }
    }
}

using DetectorFn = void (*)(Ctx&);

const std::vector<std::pair<PatternKind, DetectorFn>>& detector_table() {
    static const std::vector<std::pair<PatternKind, DetectorFn>> kTable = {
        {PatternKind::InfiniteLoop, detect_infinite_loop},
        {PatternKind::OffByOne, detect_off_by_one},
        {PatternKind::ControlFlowMisuse, detect_control_flow_misuse},
        {PatternKind::LoopVarReassignment, detect_loop_var_reassignment},
        {PatternKind::DeadUnreachableCode, detect_dead_unreachable_code},
        {PatternKind::SensitiveDataLogging, detect_sensitive_data_logging},
        {PatternKind::TimingSideChannel, detect_timing_side_channel},
        {PatternKind::MissingAuthorization, detect_missing_authorization},
        {PatternKind::InsecureEvalInjection, detect_insecure_eval_injection},
        {PatternKind::UnvalidatedLoopBound, detect_unvalidated_loop_bound},
        {PatternKind::ResourceExhaustion, detect_resource_exhaustion},
        {PatternKind::UnencryptedSensitiveStorage, detect_unencrypted_sensitive_storage},
        {PatternKind::HardcodedSecret, detect_hardcoded_secret},
        {PatternKind::UnsafeNetworkFileOp, detect_unsafe_network_file_op},
        {PatternKind::MissingExceptionHandling, detect_missing_exception_handling},
        {PatternKind::InvariantRecompute, detect_invariant_recompute},
        {PatternKind::RedundantObjectCreation, detect_redundant_object_creation},
        {PatternKind::StringConcatInLoop, detect_string_concat_in_loop},
        {PatternKind::MissingLazyEvaluation, detect_missing_lazy_evaluation},
        {PatternKind::AvoidableNestedLoop, detect_avoidable_nested_loop},
        {PatternKind::InefficientMembershipCheck, detect_inefficient_membership_check},
        {PatternKind::MissingBuiltinComprehension, detect_missing_builtin_comprehension},
        {PatternKind::RedundantIOInLoop, detect_redundant_io_in_loop},
        {PatternKind::UnusedAccumulation, detect_unused_accumulation},
        {PatternKind::RangeLenAntipattern, detect_range_len_antipattern},
    };
    return kTable;
}

int kind_order(PatternKind kind) {
    int i = 0;
    for (const auto& entry : catalog()) {
        if (entry.kind == kind) return i;
        ++i;
    }
    return i;
}

}  // namespace

std::vector<Finding> run_detectors(const ParsedSource& source,
                                   const std::vector<LoopRegion>& regions,
                                   const std::set<PatternKind>& enabled,
                                   const DetectorConfig& config) {
    (void)regions;  // regions derive from the same tree; detectors use the tree directly
    Ctx ctx(source, config);
    for (const auto& [kind, fn] : detector_table()) {
        if (enabled.count(kind)) fn(ctx);
    }
    std::vector<Finding>& out = ctx.findings;
    std::stable_sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
        if (a.line != b.line) return a.line < b.line;
        return kind_order(a.kind) < kind_order(b.kind);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Finding& a, const Finding& b) {
                              return a.line == b.line && a.kind == b.kind;
                          }),
              out.end());
    return out;
}

bool is_heuristic_kind(PatternKind kind) {
    return kind == PatternKind::OffByOne || kind == PatternKind::MissingExceptionHandling;
}

}  // namespace loopscan
