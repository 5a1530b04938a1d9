#include "loopscan/pyast.hpp"

namespace loopscan::py {

namespace {

void walk_expr_impl(const Expr& e, const std::function<void(const Expr&)>& fn) {
    fn(e);
    auto walk = [&fn](const ExprPtr& p) {
        if (p) walk_expr_impl(*p, fn);
    };
    switch (e.kind) {
        case ExprKind::Name:
        case ExprKind::IntLit:
        case ExprKind::FloatLit:
        case ExprKind::StringLit:
        case ExprKind::BoolLit:
        case ExprKind::NoneLit:
        case ExprKind::EllipsisLit:
            break;
        case ExprKind::FString:
            for (const auto& part : static_cast<const FStringExpr&>(e).parts) walk(part.expr);
            break;
        case ExprKind::Tuple:
        case ExprKind::List:
        case ExprKind::Set:
            for (const auto& el : static_cast<const SequenceExpr&>(e).elements) walk(el);
            break;
        case ExprKind::Dict:
            for (const auto& [k, v] : static_cast<const DictExpr&>(e).items) {
                walk(k);
                walk(v);
            }
            break;
        case ExprKind::ListComp:
        case ExprKind::SetComp:
        case ExprKind::GeneratorExp: {
            const auto& c = static_cast<const CompExpr&>(e);
            walk(c.element);
            for (const auto& gen : c.generators) {
                walk(gen.target);
                walk(gen.iter);
                for (const auto& cond : gen.conditions) walk(cond);
            }
            break;
        }
        case ExprKind::DictComp: {
            const auto& c = static_cast<const DictCompExpr&>(e);
            walk(c.key);
            walk(c.value);
            for (const auto& gen : c.generators) {
                walk(gen.target);
                walk(gen.iter);
                for (const auto& cond : gen.conditions) walk(cond);
            }
            break;
        }
        case ExprKind::Call: {
            const auto& c = static_cast<const CallExpr&>(e);
            walk(c.callee);
            for (const auto& a : c.args) walk(a);
            for (const auto& [name, v] : c.kwargs) walk(v);
            break;
        }
        case ExprKind::Attribute:
            walk(static_cast<const AttributeExpr&>(e).object);
            break;
        case ExprKind::Subscript: {
            const auto& s = static_cast<const SubscriptExpr&>(e);
            walk(s.object);
            walk(s.index);
            break;
        }
        case ExprKind::Slice: {
            const auto& s = static_cast<const SliceExpr&>(e);
            walk(s.lower);
            walk(s.upper);
            walk(s.step);
            break;
        }
        case ExprKind::BinOp: {
            const auto& b = static_cast<const BinOpExpr&>(e);
            walk(b.lhs);
            walk(b.rhs);
            break;
        }
        case ExprKind::UnaryOp:
            walk(static_cast<const UnaryOpExpr&>(e).operand);
            break;
        case ExprKind::BoolOp:
            for (const auto& v : static_cast<const BoolOpExpr&>(e).values) walk(v);
            break;
        case ExprKind::Compare: {
            const auto& c = static_cast<const CompareExpr&>(e);
            walk(c.first);
            for (const auto& [op, rhs] : c.rest) walk(rhs);
            break;
        }
        case ExprKind::Lambda: {
            const auto& l = static_cast<const LambdaExpr&>(e);
            for (const auto& p : l.params) {
                walk(p.annotation);
                walk(p.default_value);
            }
            walk(l.body);
            break;
        }
        case ExprKind::IfExp: {
            const auto& i = static_cast<const IfExpExpr&>(e);
            walk(i.body);
            walk(i.test);
            walk(i.orelse);
            break;
        }
        case ExprKind::Starred:
            walk(static_cast<const StarredExpr&>(e).value);
            break;
        case ExprKind::Await:
            walk(static_cast<const AwaitExpr&>(e).value);
            break;
        case ExprKind::Yield:
            walk(static_cast<const YieldExpr&>(e).value);
            break;
        case ExprKind::Named: {
            const auto& n = static_cast<const NamedExpr&>(e);
            walk(n.target);
            walk(n.value);
            break;
        }
    }
}

}  // namespace

void walk_expressions(const Expr& expr, const std::function<void(const Expr&)>& fn) {
    walk_expr_impl(expr, fn);
}

void for_each_expr_in_stmt(const Stmt& stmt, const std::function<void(const Expr&)>& fn) {
    auto emit = [&fn](const ExprPtr& p) {
        if (p) fn(*p);
    };
    switch (stmt.kind) {
        case StmtKind::Expr:
            emit(static_cast<const ExprStmt&>(stmt).value);
            break;
        case StmtKind::Assign: {
            const auto& s = static_cast<const AssignStmt&>(stmt);
            for (const auto& t : s.targets) emit(t);
            emit(s.value);
            break;
        }
        case StmtKind::AugAssign: {
            const auto& s = static_cast<const AugAssignStmt&>(stmt);
            emit(s.target);
            emit(s.value);
            break;
        }
        case StmtKind::AnnAssign: {
            const auto& s = static_cast<const AnnAssignStmt&>(stmt);
            emit(s.target);
            emit(s.annotation);
            emit(s.value);
            break;
        }
        case StmtKind::Assert: {
            const auto& s = static_cast<const AssertStmt&>(stmt);
            emit(s.test);
            emit(s.message);
            break;
        }
        case StmtKind::Del:
            for (const auto& t : static_cast<const DelStmt&>(stmt).targets) emit(t);
            break;
        case StmtKind::Return:
            emit(static_cast<const ReturnStmt&>(stmt).value);
            break;
        case StmtKind::Raise: {
            const auto& s = static_cast<const RaiseStmt&>(stmt);
            emit(s.exception);
            emit(s.cause);
            break;
        }
        case StmtKind::If:
            emit(static_cast<const IfStmt&>(stmt).test);
            break;
        case StmtKind::While:
            emit(static_cast<const WhileStmt&>(stmt).test);
            break;
        case StmtKind::For: {
            const auto& s = static_cast<const ForStmt&>(stmt);
            emit(s.target);
            emit(s.iter);
            break;
        }
        case StmtKind::Try:
            for (const auto& h : static_cast<const TryStmt&>(stmt).handlers) emit(h.type);
            break;
        case StmtKind::With:
            for (const auto& item : static_cast<const WithStmt&>(stmt).items) {
                emit(item.context);
                emit(item.optional_vars);
            }
            break;
        case StmtKind::FuncDef: {
            const auto& s = static_cast<const FuncDefStmt&>(stmt);
            for (const auto& d : s.decorators) emit(d);
            for (const auto& p : s.params) {
                emit(p.annotation);
                emit(p.default_value);
            }
            emit(s.returns);
            break;
        }
        case StmtKind::ClassDef: {
            const auto& s = static_cast<const ClassDefStmt&>(stmt);
            for (const auto& d : s.decorators) emit(d);
            for (const auto& b : s.bases) emit(b);
            for (const auto& [name, v] : s.keywords) emit(v);
            break;
        }
        case StmtKind::Pass:
        case StmtKind::Break:
        case StmtKind::Continue:
        case StmtKind::Import:
        case StmtKind::ImportFrom:
        case StmtKind::Global:
        case StmtKind::Nonlocal:
            break;
    }
}

std::vector<const StmtList*> child_suites(const Stmt& stmt) {
    std::vector<const StmtList*> out;
    switch (stmt.kind) {
        case StmtKind::If: {
            const auto& s = static_cast<const IfStmt&>(stmt);
            out.push_back(&s.body);
            if (!s.orelse.empty()) out.push_back(&s.orelse);
            break;
        }
        case StmtKind::While: {
            const auto& s = static_cast<const WhileStmt&>(stmt);
            out.push_back(&s.body);
            if (!s.orelse.empty()) out.push_back(&s.orelse);
            break;
        }
        case StmtKind::For: {
            const auto& s = static_cast<const ForStmt&>(stmt);
            out.push_back(&s.body);
            if (!s.orelse.empty()) out.push_back(&s.orelse);
            break;
        }
        case StmtKind::Try: {
            const auto& s = static_cast<const TryStmt&>(stmt);
            out.push_back(&s.body);
            for (const auto& h : s.handlers) out.push_back(&h.body);
            if (!s.orelse.empty()) out.push_back(&s.orelse);
            if (!s.finally_body.empty()) out.push_back(&s.finally_body);
            break;
        }
        case StmtKind::With:
            out.push_back(&static_cast<const WithStmt&>(stmt).body);
            break;
        case StmtKind::FuncDef:
            out.push_back(&static_cast<const FuncDefStmt&>(stmt).body);
            break;
        case StmtKind::ClassDef:
            out.push_back(&static_cast<const ClassDefStmt&>(stmt).body);
            break;
        default:
            break;
    }
    return out;
}

void walk_statements(const StmtList& stmts, const std::function<bool(const Stmt&)>& fn) {
    for (const auto& s : stmts) {
        if (!s) continue;
        if (!fn(*s)) continue;
        for (const StmtList* suite : child_suites(*s)) walk_statements(*suite, fn);
    }
}

std::vector<std::string> collect_names(const Expr& expr) {
    std::vector<std::string> out;
    walk_expressions(expr, [&out](const Expr& e) {
        if (e.kind == ExprKind::Name) out.push_back(static_cast<const NameExpr&>(e).id);
    });
    return out;
}

bool fold_const_int(const Expr& expr, long long& out) {
    switch (expr.kind) {
        case ExprKind::IntLit: {
            const auto& lit = static_cast<const IntLitExpr&>(expr);
            if (!lit.fits) return false;
            out = lit.value;
            return true;
        }
        case ExprKind::UnaryOp: {
            const auto& u = static_cast<const UnaryOpExpr&>(expr);
            long long v = 0;
            if (!u.operand || !fold_const_int(*u.operand, v)) return false;
            if (u.op == UnaryOpKind::Minus) {
                out = -v;
                return true;
            }
            if (u.op == UnaryOpKind::Plus) {
                out = v;
                return true;
            }
            return false;
        }
        case ExprKind::BinOp: {
            const auto& b = static_cast<const BinOpExpr&>(expr);
            long long lhs = 0, rhs = 0;
            if (!b.lhs || !b.rhs) return false;
            if (!fold_const_int(*b.lhs, lhs) || !fold_const_int(*b.rhs, rhs)) return false;
            switch (b.op) {
                case BinOpKind::Add:
                    if (__builtin_add_overflow(lhs, rhs, &out)) return false;
                    return true;
                case BinOpKind::Sub:
                    if (__builtin_sub_overflow(lhs, rhs, &out)) return false;
                    return true;
                case BinOpKind::Mult:
                    if (__builtin_mul_overflow(lhs, rhs, &out)) return false;
                    return true;
                case BinOpKind::Pow: {
                    if (rhs < 0 || rhs > 62) return false;
                    long long acc = 1;
                    for (long long i = 0; i < rhs; ++i) {
                        if (__builtin_mul_overflow(acc, lhs, &acc)) return false;
                    }
                    out = acc;
                    return true;
                }
                default:
                    return false;
            }
        }
        default:
            return false;
    }
}

}  // namespace loopscan::py
