#include "loopscan/pyparse.hpp"

#include <cstdlib>
#include <utility>

namespace loopscan::py {

namespace {

struct Parser {
    std::vector<Token> toks;
    size_t idx = 0;
    int line_offset = 0;
    int last_content_end = 1;  // end line of the last substantive token consumed

    const Token& cur() const { return toks[idx]; }
    const Token& prev() const { return toks[idx > 0 ? idx - 1 : 0]; }

    bool at(TokKind k) const { return cur().kind == k; }
    bool at_op(const char* text) const { return cur().kind == TokKind::Op && cur().text == text; }
    bool at_kw(const char* text) const { return cur().kind == TokKind::Keyword && cur().text == text; }

    void next() {
        TokKind k = cur().kind;
        if (k != TokKind::Newline && k != TokKind::Indent && k != TokKind::Dedent &&
            k != TokKind::EndMarker) {
            last_content_end = cur().end_line;
        }
        if (idx + 1 < toks.size()) ++idx;
    }

    bool eat_op(const char* text) {
        if (at_op(text)) {
            next();
            return true;
        }
        return false;
    }

    bool eat_kw(const char* text) {
        if (at_kw(text)) {
            next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line + line_offset, cur().col, msg);
    }

    void expect_op(const char* text) {
        if (!eat_op(text)) fail(std::string("expected '") + text + "'");
    }

    void expect_kw(const char* text) {
        if (!eat_kw(text)) fail(std::string("expected '") + text + "'");
    }

    std::string expect_name() {
        if (!at(TokKind::Name)) fail("expected identifier");
        std::string s = cur().text;
        next();
        return s;
    }

    void expect_newline() {
        if (at(TokKind::Newline)) {
            next();
            return;
        }
        if (at(TokKind::EndMarker)) return;
        fail("expected end of line");
    }

    template <typename T>
    std::unique_ptr<T> make_expr() {
        auto node = std::make_unique<T>();
        node->line = cur().line + line_offset;
        node->col = cur().col;
        node->end_line = node->line;
        return node;
    }

    template <typename T, typename... A>
    std::unique_ptr<T> make_expr_args(A&&... a) {
        auto node = std::make_unique<T>(std::forward<A>(a)...);
        node->line = cur().line + line_offset;
        node->col = cur().col;
        node->end_line = node->line;
        return node;
    }

    void close_expr(Expr& e) { e.end_line = last_content_end + line_offset; }
    void close_stmt(Stmt& s) { s.end_line = last_content_end + line_offset; }

    // ---- module -----------------------------------------------------------

    StmtList parse_file() {
        StmtList body;
        while (!at(TokKind::EndMarker)) {
            if (at(TokKind::Newline)) {
                next();
                continue;
            }
            if (at(TokKind::Indent)) fail("unexpected indent");
            parse_statement(body);
        }
        return body;
    }

    // ---- statements -------------------------------------------------------

    void parse_statement(StmtList& out) {
        if (at(TokKind::Keyword)) {
            const std::string& kw = cur().text;
            if (kw == "if") return out.push_back(parse_if());
            if (kw == "while") return out.push_back(parse_while());
            if (kw == "for") return out.push_back(parse_for(false));
            if (kw == "try") return out.push_back(parse_try());
            if (kw == "with") return out.push_back(parse_with(false));
            if (kw == "def") return out.push_back(parse_funcdef(false, {}));
            if (kw == "class") return out.push_back(parse_classdef({}));
            if (kw == "async") return out.push_back(parse_async());
        }
        if (at_op("@")) return out.push_back(parse_decorated());
        parse_simple_stmt_line(out);
    }

    StmtPtr parse_async() {
        expect_kw("async");
        if (at_kw("def")) return parse_funcdef(true, {});
        if (at_kw("for")) return parse_for(true);
        if (at_kw("with")) return parse_with(true);
        fail("expected 'def', 'for', or 'with' after 'async'");
    }

    StmtPtr parse_decorated() {
        std::vector<ExprPtr> decorators;
        while (at_op("@")) {
            next();
            decorators.push_back(parse_namedexpr());
            expect_newline();
        }
        if (at_kw("def")) return parse_funcdef(false, std::move(decorators));
        if (at_kw("class")) return parse_classdef(std::move(decorators));
        if (at_kw("async")) {
            next();
            if (at_kw("def")) return parse_funcdef(true, std::move(decorators));
            fail("expected 'def' after decorated 'async'");
        }
        fail("expected function or class after decorators");
    }

    void parse_simple_stmt_line(StmtList& out) {
        out.push_back(parse_small_stmt());
        while (eat_op(";")) {
            if (at(TokKind::Newline) || at(TokKind::EndMarker)) break;
            out.push_back(parse_small_stmt());
        }
        expect_newline();
    }

    StmtPtr parse_small_stmt() {
        if (at(TokKind::Keyword)) {
            const std::string& kw = cur().text;
            if (kw == "pass") return simple_stmt<PassStmt>();
            if (kw == "break") return simple_stmt<BreakStmt>();
            if (kw == "continue") return simple_stmt<ContinueStmt>();
            if (kw == "return") return parse_return();
            if (kw == "raise") return parse_raise();
            if (kw == "del") return parse_del();
            if (kw == "assert") return parse_assert();
            if (kw == "import") return parse_import();
            if (kw == "from") return parse_import_from();
            if (kw == "global" || kw == "nonlocal") return parse_scope_decl();
            if (kw == "yield") {
                auto stmt = begin_stmt<ExprStmt>();
                stmt->value = parse_yield_expr();
                close_stmt(*stmt);
                return stmt;
            }
        }
        return parse_expr_stmt();
    }

    template <typename T>
    std::unique_ptr<T> begin_stmt() {
        auto node = std::make_unique<T>();
        node->line = cur().line + line_offset;
        node->col = cur().col;
        node->end_line = node->line;
        return node;
    }

    template <typename T>
    StmtPtr simple_stmt() {
        auto node = begin_stmt<T>();
        next();
        close_stmt(*node);
        return node;
    }

    StmtPtr parse_return() {
        auto stmt = begin_stmt<ReturnStmt>();
        expect_kw("return");
        if (!at(TokKind::Newline) && !at(TokKind::EndMarker) && !at_op(";")) {
            stmt->value = parse_testlist_star();
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_raise() {
        auto stmt = begin_stmt<RaiseStmt>();
        expect_kw("raise");
        if (!at(TokKind::Newline) && !at(TokKind::EndMarker) && !at_op(";")) {
            stmt->exception = parse_test();
            if (eat_kw("from")) stmt->cause = parse_test();
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_del() {
        auto stmt = begin_stmt<DelStmt>();
        expect_kw("del");
        stmt->targets.push_back(parse_or_expr_chain());
        while (eat_op(",")) {
            if (at(TokKind::Newline)) break;
            stmt->targets.push_back(parse_or_expr_chain());
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_assert() {
        auto stmt = begin_stmt<AssertStmt>();
        expect_kw("assert");
        stmt->test = parse_test();
        if (eat_op(",")) stmt->message = parse_test();
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_import() {
        auto stmt = begin_stmt<ImportStmt>();
        expect_kw("import");
        do {
            ImportAlias alias;
            alias.name = parse_dotted_name();
            if (eat_kw("as")) alias.asname = expect_name();
            stmt->names.push_back(std::move(alias));
        } while (eat_op(","));
        close_stmt(*stmt);
        return stmt;
    }

    std::string parse_dotted_name() {
        std::string name = expect_name();
        while (at_op(".")) {
            next();
            name += "." + expect_name();
        }
        return name;
    }

    StmtPtr parse_import_from() {
        auto stmt = begin_stmt<ImportFromStmt>();
        expect_kw("from");
        while (at_op(".") || at_op("...")) {
            stmt->level += at_op("...") ? 3 : 1;
            next();
        }
        if (at(TokKind::Name)) stmt->module = parse_dotted_name();
        expect_kw("import");
        if (eat_op("*")) {
            stmt->star = true;
        } else {
            bool parens = eat_op("(");
            do {
                if (parens && at_op(")")) break;
                ImportAlias alias;
                alias.name = expect_name();
                if (eat_kw("as")) alias.asname = expect_name();
                stmt->names.push_back(std::move(alias));
            } while (eat_op(","));
            if (parens) expect_op(")");
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_scope_decl() {
        auto stmt = std::make_unique<ScopeDeclStmt>(at_kw("global") ? StmtKind::Global : StmtKind::Nonlocal);
        stmt->line = cur().line + line_offset;
        stmt->col = cur().col;
        next();
        do {
            stmt->names.push_back(expect_name());
        } while (eat_op(","));
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_expr_stmt() {
        int start_line = cur().line + line_offset;
        int start_col = cur().col;
        ExprPtr first = parse_testlist_star();

        // annotated assignment
        if (at_op(":") ) {
            next();
            auto stmt = std::make_unique<AnnAssignStmt>();
            stmt->line = start_line;
            stmt->col = start_col;
            stmt->target = std::move(first);
            stmt->annotation = parse_test();
            if (eat_op("=")) {
                stmt->value = at_kw("yield") ? parse_yield_expr() : parse_testlist_star();
            }
            close_stmt(*stmt);
            return stmt;
        }

        // augmented assignment
        static const std::pair<const char*, BinOpKind> kAugOps[] = {
            {"+=", BinOpKind::Add},     {"-=", BinOpKind::Sub},      {"*=", BinOpKind::Mult},
            {"/=", BinOpKind::Div},     {"//=", BinOpKind::FloorDiv}, {"%=", BinOpKind::Mod},
            {"**=", BinOpKind::Pow},    {"@=", BinOpKind::MatMult},  {"<<=", BinOpKind::LShift},
            {">>=", BinOpKind::RShift}, {"&=", BinOpKind::BitAnd},   {"|=", BinOpKind::BitOr},
            {"^=", BinOpKind::BitXor},
        };
        for (const auto& [text, op] : kAugOps) {
            if (at_op(text)) {
                next();
                auto stmt = std::make_unique<AugAssignStmt>();
                stmt->line = start_line;
                stmt->col = start_col;
                stmt->target = std::move(first);
                stmt->op = op;
                stmt->value = at_kw("yield") ? parse_yield_expr() : parse_testlist_star();
                close_stmt(*stmt);
                return stmt;
            }
        }

        // plain or chained assignment
        if (at_op("=")) {
            auto stmt = std::make_unique<AssignStmt>();
            stmt->line = start_line;
            stmt->col = start_col;
            stmt->targets.push_back(std::move(first));
            while (eat_op("=")) {
                ExprPtr value = at_kw("yield") ? parse_yield_expr() : parse_testlist_star();
                if (at_op("=")) {
                    stmt->targets.push_back(std::move(value));
                } else {
                    stmt->value = std::move(value);
                    break;
                }
            }
            close_stmt(*stmt);
            return stmt;
        }

        auto stmt = std::make_unique<ExprStmt>();
        stmt->line = start_line;
        stmt->col = start_col;
        stmt->value = std::move(first);
        close_stmt(*stmt);
        return stmt;
    }

    // ---- compound statements ----------------------------------------------

    StmtList parse_suite() {
        StmtList body;
        if (at(TokKind::Newline)) {
            next();
            if (!at(TokKind::Indent)) fail("expected an indented block");
            next();
            while (!at(TokKind::Dedent) && !at(TokKind::EndMarker)) {
                if (at(TokKind::Newline)) {
                    next();
                    continue;
                }
                parse_statement(body);
            }
            if (at(TokKind::Dedent)) next();
        } else {
            parse_simple_stmt_line(body);
        }
        if (body.empty()) fail("expected statement in block");
        return body;
    }

    StmtPtr parse_if() {
        auto stmt = begin_stmt<IfStmt>();
        expect_kw("if");
        stmt->test = parse_namedexpr();
        expect_op(":");
        stmt->body = parse_suite();
        if (at_kw("elif")) {
            stmt->orelse_line = cur().line + line_offset;
            // represent elif as a nested if in the else suite
            auto nested = begin_stmt<IfStmt>();
            expect_kw("elif");
            nested->test = parse_namedexpr();
            expect_op(":");
            nested->body = parse_suite();
            StmtPtr chained = finish_elif_chain(std::move(nested));
            stmt->orelse.push_back(std::move(chained));
        } else if (at_kw("else")) {
            stmt->orelse_line = cur().line + line_offset;
            next();
            expect_op(":");
            stmt->orelse = parse_suite();
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr finish_elif_chain(std::unique_ptr<IfStmt> head) {
        if (at_kw("elif")) {
            head->orelse_line = cur().line + line_offset;
            auto nested = begin_stmt<IfStmt>();
            expect_kw("elif");
            nested->test = parse_namedexpr();
            expect_op(":");
            nested->body = parse_suite();
            head->orelse.push_back(finish_elif_chain(std::move(nested)));
        } else if (at_kw("else")) {
            head->orelse_line = cur().line + line_offset;
            next();
            expect_op(":");
            head->orelse = parse_suite();
        }
        close_stmt(*head);
        return head;
    }

    StmtPtr parse_while() {
        auto stmt = begin_stmt<WhileStmt>();
        expect_kw("while");
        stmt->test = parse_namedexpr();
        expect_op(":");
        stmt->body = parse_suite();
        if (at_kw("else")) {
            stmt->orelse_line = cur().line + line_offset;
            next();
            expect_op(":");
            stmt->orelse = parse_suite();
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_for(bool is_async) {
        auto stmt = begin_stmt<ForStmt>();
        stmt->is_async = is_async;
        expect_kw("for");
        stmt->target = parse_target_list();
        expect_kw("in");
        stmt->iter = parse_testlist_star();
        expect_op(":");
        stmt->body = parse_suite();
        if (at_kw("else")) {
            stmt->orelse_line = cur().line + line_offset;
            next();
            expect_op(":");
            stmt->orelse = parse_suite();
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_try() {
        auto stmt = begin_stmt<TryStmt>();
        expect_kw("try");
        expect_op(":");
        stmt->body = parse_suite();
        while (at_kw("except")) {
            ExceptHandler handler;
            handler.line = cur().line + line_offset;
            next();
            if (!at_op(":")) {
                handler.type = parse_test();
                if (eat_kw("as")) handler.name = expect_name();
            }
            expect_op(":");
            handler.body = parse_suite();
            stmt->handlers.push_back(std::move(handler));
        }
        if (at_kw("else")) {
            if (stmt->handlers.empty()) fail("'else' requires at least one 'except'");
            next();
            expect_op(":");
            stmt->orelse = parse_suite();
        }
        if (at_kw("finally")) {
            next();
            expect_op(":");
            stmt->finally_body = parse_suite();
        }
        if (stmt->handlers.empty() && stmt->finally_body.empty()) {
            fail("'try' requires 'except' or 'finally'");
        }
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_with(bool is_async) {
        auto stmt = begin_stmt<WithStmt>();
        stmt->is_async = is_async;
        expect_kw("with");
        do {
            WithItem item;
            item.context = parse_test();
            if (eat_kw("as")) item.optional_vars = parse_or_expr_chain();
            stmt->items.push_back(std::move(item));
        } while (eat_op(","));
        expect_op(":");
        stmt->body = parse_suite();
        close_stmt(*stmt);
        return stmt;
    }

    StmtPtr parse_funcdef(bool is_async, std::vector<ExprPtr> decorators) {
        auto stmt = begin_stmt<FuncDefStmt>();
        stmt->is_async = is_async;
        stmt->decorators = std::move(decorators);
        if (!stmt->decorators.empty()) stmt->line = stmt->decorators.front()->line;
        expect_kw("def");
        stmt->name = expect_name();
        expect_op("(");
        stmt->params = parse_param_list(true);
        expect_op(")");
        if (eat_op("->")) stmt->returns = parse_test();
        expect_op(":");
        stmt->body = parse_suite();
        close_stmt(*stmt);
        return stmt;
    }

    std::vector<Param> parse_param_list(bool allow_annotations) {
        std::vector<Param> params;
        bool closing = allow_annotations ? at_op(")") : at_op(":");
        while (!closing) {
            Param p;
            if (eat_op("*")) {
                if (at(TokKind::Name)) {
                    p.kind = Param::Kind::VarArgs;
                    p.name = expect_name();
                } else {
                    p.kind = Param::Kind::VarArgs;  // bare *: keyword-only marker
                }
            } else if (eat_op("**")) {
                p.kind = Param::Kind::KwArgs;
                p.name = expect_name();
            } else if (at_op("/")) {
                next();
                p.kind = Param::Kind::PosOnlyMarker;
            } else {
                p.name = expect_name();
            }
            if (allow_annotations && eat_op(":")) p.annotation = parse_test();
            if (eat_op("=")) p.default_value = parse_test();
            params.push_back(std::move(p));
            if (!eat_op(",")) break;
            closing = allow_annotations ? at_op(")") : at_op(":");
        }
        return params;
    }

    StmtPtr parse_classdef(std::vector<ExprPtr> decorators) {
        auto stmt = begin_stmt<ClassDefStmt>();
        stmt->decorators = std::move(decorators);
        if (!stmt->decorators.empty()) stmt->line = stmt->decorators.front()->line;
        expect_kw("class");
        stmt->name = expect_name();
        if (eat_op("(")) {
            while (!at_op(")")) {
                if (at(TokKind::Name) && toks[idx + 1].kind == TokKind::Op && toks[idx + 1].text == "=") {
                    std::string kwname = expect_name();
                    expect_op("=");
                    stmt->keywords.emplace_back(std::move(kwname), parse_test());
                } else if (at_op("**")) {
                    next();
                    stmt->keywords.emplace_back("", parse_test());
                } else {
                    stmt->bases.push_back(parse_test());
                }
                if (!eat_op(",")) break;
            }
            expect_op(")");
        }
        expect_op(":");
        stmt->body = parse_suite();
        close_stmt(*stmt);
        return stmt;
    }

    // ---- expressions --------------------------------------------------------

    ExprPtr parse_target_list() {
        // for-loop targets: star_expr-capable expr list
        ExprPtr first = parse_target_atom();
        if (!at_op(",")) return first;
        auto tuple = std::make_unique<SequenceExpr>(ExprKind::Tuple);
        tuple->line = first->line;
        tuple->col = first->col;
        tuple->elements.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_kw("in")) break;
            tuple->elements.push_back(parse_target_atom());
        }
        close_expr(*tuple);
        return tuple;
    }

    ExprPtr parse_target_atom() {
        if (at_op("*")) {
            auto star = make_expr<StarredExpr>();
            next();
            star->value = parse_or_expr_chain();
            close_expr(*star);
            return star;
        }
        return parse_or_expr_chain();
    }

    // bitwise-or precedence chain; used where full ternary is not allowed
    ExprPtr parse_or_expr_chain() { return parse_bitor(); }

    ExprPtr parse_testlist_star() {
        ExprPtr first = at_op("*") ? parse_target_atom() : parse_test();
        if (!at_op(",")) return first;
        auto tuple = std::make_unique<SequenceExpr>(ExprKind::Tuple);
        tuple->line = first->line;
        tuple->col = first->col;
        tuple->elements.push_back(std::move(first));
        while (eat_op(",")) {
            if (at(TokKind::Newline) || at(TokKind::EndMarker) || at_op("=") || at_op(")") ||
                at_op("]") || at_op("}") || at_op(":") || at_op(";")) {
                break;
            }
            tuple->elements.push_back(at_op("*") ? parse_target_atom() : parse_test());
        }
        close_expr(*tuple);
        return tuple;
    }

    ExprPtr parse_namedexpr() {
        ExprPtr target = parse_test();
        if (at_op(":=")) {
            auto named = std::make_unique<NamedExpr>();
            named->line = target->line;
            named->col = target->col;
            next();
            named->target = std::move(target);
            named->value = parse_test();
            close_expr(*named);
            return named;
        }
        return target;
    }

    ExprPtr parse_test() {
        if (at_kw("lambda")) return parse_lambda();
        ExprPtr body = parse_or_test();
        if (at_kw("if")) {
            auto ternary = std::make_unique<IfExpExpr>();
            ternary->line = body->line;
            ternary->col = body->col;
            next();
            ternary->body = std::move(body);
            ternary->test = parse_or_test();
            expect_kw("else");
            ternary->orelse = parse_test();
            close_expr(*ternary);
            return ternary;
        }
        return body;
    }

    ExprPtr parse_lambda() {
        auto lambda = make_expr<LambdaExpr>();
        expect_kw("lambda");
        lambda->params = parse_param_list(false);
        expect_op(":");
        lambda->body = parse_test();
        close_expr(*lambda);
        return lambda;
    }

    ExprPtr parse_or_test() {
        ExprPtr first = parse_and_test();
        if (!at_kw("or")) return first;
        auto node = std::make_unique<BoolOpExpr>();
        node->line = first->line;
        node->col = first->col;
        node->is_and = false;
        node->values.push_back(std::move(first));
        while (eat_kw("or")) node->values.push_back(parse_and_test());
        close_expr(*node);
        return node;
    }

    ExprPtr parse_and_test() {
        ExprPtr first = parse_not_test();
        if (!at_kw("and")) return first;
        auto node = std::make_unique<BoolOpExpr>();
        node->line = first->line;
        node->col = first->col;
        node->is_and = true;
        node->values.push_back(std::move(first));
        while (eat_kw("and")) node->values.push_back(parse_not_test());
        close_expr(*node);
        return node;
    }

    ExprPtr parse_not_test() {
        if (at_kw("not")) {
            auto node = make_expr<UnaryOpExpr>();
            node->op = UnaryOpKind::Not;
            next();
            node->operand = parse_not_test();
            close_expr(*node);
            return node;
        }
        return parse_comparison();
    }

    bool peek_cmp_op(CmpOpKind& op, int& extra) {
        extra = 0;
        if (at_op("<")) { op = CmpOpKind::Lt; return true; }
        if (at_op("<=")) { op = CmpOpKind::LtE; return true; }
        if (at_op(">")) { op = CmpOpKind::Gt; return true; }
        if (at_op(">=")) { op = CmpOpKind::GtE; return true; }
        if (at_op("==")) { op = CmpOpKind::Eq; return true; }
        if (at_op("!=")) { op = CmpOpKind::NotEq; return true; }
        if (at_kw("in")) { op = CmpOpKind::In; return true; }
        if (at_kw("not")) {
            if (toks[idx + 1].kind == TokKind::Keyword && toks[idx + 1].text == "in") {
                op = CmpOpKind::NotIn;
                extra = 1;
                return true;
            }
            return false;
        }
        if (at_kw("is")) {
            if (toks[idx + 1].kind == TokKind::Keyword && toks[idx + 1].text == "not") {
                op = CmpOpKind::IsNot;
                extra = 1;
            } else {
                op = CmpOpKind::Is;
            }
            return true;
        }
        return false;
    }

    ExprPtr parse_comparison() {
        ExprPtr first = parse_bitor();
        CmpOpKind op;
        int extra = 0;
        if (!peek_cmp_op(op, extra)) return first;
        auto node = std::make_unique<CompareExpr>();
        node->line = first->line;
        node->col = first->col;
        node->first = std::move(first);
        while (peek_cmp_op(op, extra)) {
            next();
            if (extra) next();
            node->rest.emplace_back(op, parse_bitor());
        }
        close_expr(*node);
        return node;
    }

    ExprPtr parse_binop_chain(ExprPtr (Parser::*sub)(), std::initializer_list<std::pair<const char*, BinOpKind>> ops) {
        ExprPtr lhs = (this->*sub)();
        while (true) {
            bool matched = false;
            for (const auto& [text, op] : ops) {
                if (at_op(text)) {
                    next();
                    auto node = std::make_unique<BinOpExpr>();
                    node->line = lhs->line;
                    node->col = lhs->col;
                    node->op = op;
                    node->lhs = std::move(lhs);
                    node->rhs = (this->*sub)();
                    close_expr(*node);
                    lhs = std::move(node);
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr parse_bitor() { return parse_binop_chain(&Parser::parse_bitxor, {{"|", BinOpKind::BitOr}}); }
    ExprPtr parse_bitxor() { return parse_binop_chain(&Parser::parse_bitand, {{"^", BinOpKind::BitXor}}); }
    ExprPtr parse_bitand() { return parse_binop_chain(&Parser::parse_shift, {{"&", BinOpKind::BitAnd}}); }
    ExprPtr parse_shift() {
        return parse_binop_chain(&Parser::parse_arith,
                                 {{"<<", BinOpKind::LShift}, {">>", BinOpKind::RShift}});
    }
    ExprPtr parse_arith() {
        return parse_binop_chain(&Parser::parse_term, {{"+", BinOpKind::Add}, {"-", BinOpKind::Sub}});
    }
    ExprPtr parse_term() {
        return parse_binop_chain(&Parser::parse_factor,
                                 {{"*", BinOpKind::Mult},
                                  {"@", BinOpKind::MatMult},
                                  {"/", BinOpKind::Div},
                                  {"//", BinOpKind::FloorDiv},
                                  {"%", BinOpKind::Mod}});
    }

    ExprPtr parse_factor() {
        if (at_op("+") || at_op("-") || at_op("~")) {
            auto node = make_expr<UnaryOpExpr>();
            node->op = at_op("-") ? UnaryOpKind::Minus : (at_op("+") ? UnaryOpKind::Plus : UnaryOpKind::Invert);
            next();
            node->operand = parse_factor();
            close_expr(*node);
            return node;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom_expr();
        if (at_op("**")) {
            auto node = std::make_unique<BinOpExpr>();
            node->line = base->line;
            node->col = base->col;
            node->op = BinOpKind::Pow;
            next();
            node->lhs = std::move(base);
            node->rhs = parse_factor();  // right-associative
            close_expr(*node);
            return node;
        }
        return base;
    }

    ExprPtr parse_atom_expr() {
        if (at_kw("await")) {
            auto node = make_expr<AwaitExpr>();
            next();
            node->value = parse_atom_expr();
            close_expr(*node);
            return node;
        }
        ExprPtr atom = parse_atom();
        return parse_trailers(std::move(atom));
    }

    ExprPtr parse_trailers(ExprPtr base) {
        while (true) {
            if (at_op("(")) {
                auto call = std::make_unique<CallExpr>();
                call->line = base->line;
                call->col = base->col;
                call->callee = std::move(base);
                next();
                parse_call_args(*call);
                expect_op(")");
                close_expr(*call);
                base = std::move(call);
            } else if (at_op("[")) {
                auto sub = std::make_unique<SubscriptExpr>();
                sub->line = base->line;
                sub->col = base->col;
                sub->object = std::move(base);
                next();
                sub->index = parse_subscript_list();
                expect_op("]");
                close_expr(*sub);
                base = std::move(sub);
            } else if (at_op(".")) {
                auto attr = std::make_unique<AttributeExpr>();
                attr->line = base->line;
                attr->col = base->col;
                attr->object = std::move(base);
                next();
                attr->attr = expect_name();
                close_expr(*attr);
                base = std::move(attr);
            } else {
                return base;
            }
        }
    }

    void parse_call_args(CallExpr& call) {
        while (!at_op(")")) {
            if (at_op("**")) {
                next();
                call.kwargs.emplace_back("", parse_test());
            } else if (at_op("*")) {
                auto star = make_expr<StarredExpr>();
                next();
                star->value = parse_test();
                close_expr(*star);
                call.args.push_back(std::move(star));
            } else if (at(TokKind::Name) && toks[idx + 1].kind == TokKind::Op &&
                       toks[idx + 1].text == "=") {
                std::string kwname = expect_name();
                expect_op("=");
                call.kwargs.emplace_back(std::move(kwname), parse_test());
            } else {
                ExprPtr arg = parse_namedexpr();
                if (at_kw("for") || at_kw("async")) {
                    arg = parse_comprehension_tail(std::move(arg), ExprKind::GeneratorExp);
                }
                call.args.push_back(std::move(arg));
            }
            if (!eat_op(",")) break;
        }
    }

    ExprPtr parse_subscript_list() {
        ExprPtr first = parse_subscript_item();
        if (!at_op(",")) return first;
        auto tuple = std::make_unique<SequenceExpr>(ExprKind::Tuple);
        tuple->line = first->line;
        tuple->col = first->col;
        tuple->elements.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("]")) break;
            tuple->elements.push_back(parse_subscript_item());
        }
        close_expr(*tuple);
        return tuple;
    }

    ExprPtr parse_subscript_item() {
        auto slice_part = [this]() -> ExprPtr {
            if (at_op(":") || at_op("]") || at_op(",")) return nullptr;
            return parse_test();
        };
        ExprPtr lower = slice_part();
        if (!at_op(":")) {
            if (!lower) fail("expected subscript expression");
            return lower;
        }
        auto slice = make_expr<SliceExpr>();
        if (lower) {
            slice->line = lower->line;
            slice->col = lower->col;
        }
        next();
        slice->lower = std::move(lower);
        slice->upper = slice_part();
        if (eat_op(":")) slice->step = slice_part();
        close_expr(*slice);
        return slice;
    }

    ExprPtr parse_yield_expr() {
        auto node = make_expr<YieldExpr>();
        expect_kw("yield");
        if (eat_kw("from")) {
            node->is_from = true;
            node->value = parse_test();
        } else if (!at(TokKind::Newline) && !at(TokKind::EndMarker) && !at_op(")") && !at_op(";")) {
            node->value = parse_testlist_star();
        }
        close_expr(*node);
        return node;
    }

    ExprPtr parse_comprehension_tail(ExprPtr element, ExprKind kind) {
        auto comp = std::make_unique<CompExpr>(kind);
        comp->line = element->line;
        comp->col = element->col;
        comp->element = std::move(element);
        comp->generators = parse_comp_generators();
        close_expr(*comp);
        return comp;
    }

    std::vector<Comprehension> parse_comp_generators() {
        std::vector<Comprehension> gens;
        while (at_kw("for") || at_kw("async")) {
            Comprehension gen;
            if (eat_kw("async")) gen.is_async = true;
            expect_kw("for");
            gen.target = parse_target_list();
            expect_kw("in");
            gen.iter = parse_or_test();
            while (at_kw("if")) {
                next();
                gen.conditions.push_back(parse_or_test());
            }
            gens.push_back(std::move(gen));
        }
        return gens;
    }

    ExprPtr parse_atom() {
        const Token& t = cur();
        switch (t.kind) {
            case TokKind::Name: {
                auto node = make_expr<NameExpr>();
                node->id = t.text;
                next();
                return node;
            }
            case TokKind::Number:
                return parse_number();
            case TokKind::String:
                return parse_string_group();
            case TokKind::Keyword: {
                if (t.text == "None") {
                    auto node = make_expr<NoneLitExpr>();
                    next();
                    return node;
                }
                if (t.text == "True" || t.text == "False") {
                    auto node = make_expr<BoolLitExpr>();
                    node->value = t.text == "True";
                    next();
                    return node;
                }
                if (t.text == "lambda") return parse_lambda();
                if (t.text == "yield") return parse_yield_expr();
                fail("unexpected keyword '" + t.text + "'");
            }
            case TokKind::Op: {
                if (t.text == "(") return parse_paren_atom();
                if (t.text == "[") return parse_list_atom();
                if (t.text == "{") return parse_dict_set_atom();
                if (t.text == "...") {
                    auto node = make_expr<EllipsisLitExpr>();
                    next();
                    return node;
                }
                fail("unexpected token '" + t.text + "'");
            }
            default:
                fail("unexpected end of expression");
        }
    }

    ExprPtr parse_number() {
        const Token& t = cur();
        const std::string& text = t.text;
        bool is_float = false;
        for (char c : text) {
            if (c == '.' || c == 'e' || c == 'E' || c == 'j' || c == 'J') {
                if ((c == 'e' || c == 'E') && (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)) continue;
                is_float = true;
                break;
            }
        }
        if (is_float) {
            auto node = make_expr<FloatLitExpr>();
            node->text = text;
            std::string cleaned;
            for (char c : text) {
                if (c != '_' && c != 'j' && c != 'J') cleaned += c;
            }
            node->value = std::strtod(cleaned.c_str(), nullptr);
            next();
            return node;
        }
        auto node = make_expr<IntLitExpr>();
        node->text = text;
        std::string cleaned;
        for (char c : text) {
            if (c != '_') cleaned += c;
        }
        errno = 0;
        char* end = nullptr;
        long long v = std::strtoll(cleaned.c_str(), &end, 0);
        if (errno == 0 && end && *end == '\0') {
            node->value = v;
            node->fits = true;
        }
        next();
        return node;
    }

    ExprPtr parse_string_group() {
        // adjacent string literals concatenate; any f-string makes the result an f-string
        int first_line = cur().line + line_offset;
        int first_col = cur().col;
        bool any_fstring = false;
        bool any_bytes = false;
        std::vector<Token> pieces;
        while (at(TokKind::String)) {
            any_fstring = any_fstring || cur().str_is_fstring;
            any_bytes = any_bytes || cur().str_is_bytes;
            pieces.push_back(cur());
            next();
        }
        if (!any_fstring) {
            auto node = std::make_unique<StringLitExpr>();
            node->line = first_line;
            node->col = first_col;
            node->is_bytes = any_bytes;
            for (const auto& p : pieces) node->value += p.str_value;
            close_expr(*node);
            return node;
        }
        auto node = std::make_unique<FStringExpr>();
        node->line = first_line;
        node->col = first_col;
        for (const auto& p : pieces) {
            if (!p.str_is_fstring) {
                FStringExpr::Part part;
                part.text = p.str_value;
                node->parts.push_back(std::move(part));
                continue;
            }
            append_fstring_parts(*node, p);
        }
        close_expr(*node);
        return node;
    }

    void append_fstring_parts(FStringExpr& node, const Token& tok) {
        const std::string& s = tok.str_value;
        std::string text;
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            if (c == '{') {
                if (i + 1 < s.size() && s[i + 1] == '{') {
                    text += '{';
                    i += 2;
                    continue;
                }
                if (!text.empty()) {
                    FStringExpr::Part part;
                    part.text = std::move(text);
                    node.parts.push_back(std::move(part));
                    text.clear();
                }
                size_t j = i + 1;
                int depth = 0;
                char in_quote = 0;
                size_t expr_end = std::string::npos;
                size_t spec_start = std::string::npos;
                for (; j < s.size(); ++j) {
                    char cj = s[j];
                    if (in_quote) {
                        if (cj == in_quote) in_quote = 0;
                        continue;
                    }
                    if (cj == '\'' || cj == '"') {
                        in_quote = cj;
                        continue;
                    }
                    if (cj == '(' || cj == '[' || cj == '{') {
                        ++depth;
                        continue;
                    }
                    if (cj == ')' || cj == ']') {
                        --depth;
                        continue;
                    }
                    if (cj == '}') {
                        if (depth == 0) {
                            expr_end = j;
                            break;
                        }
                        --depth;
                        continue;
                    }
                    if (cj == ':' && depth == 0 && spec_start == std::string::npos) spec_start = j;
                }
                if (expr_end == std::string::npos) {
                    throw ParseError(tok.line + line_offset, tok.col, "unterminated interpolation in f-string");
                }
                size_t content_end = spec_start != std::string::npos ? spec_start : expr_end;
                std::string content = s.substr(i + 1, content_end - i - 1);
                // strip !r / !s / !a conversion and trailing '=' debug marker
                if (content.size() >= 2 && content[content.size() - 2] == '!' &&
                    (content.back() == 'r' || content.back() == 's' || content.back() == 'a')) {
                    content.erase(content.size() - 2);
                }
                while (!content.empty() && (content.back() == ' ' || content.back() == '=')) {
                    if (content.back() == '=') {
                        content.pop_back();
                        break;
                    }
                    content.pop_back();
                }
                FStringExpr::Part part;
                part.expr = parse_expression(content, tok.line + line_offset - 1);
                node.parts.push_back(std::move(part));
                i = expr_end + 1;
                continue;
            }
            if (c == '}') {
                if (i + 1 < s.size() && s[i + 1] == '}') {
                    text += '}';
                    i += 2;
                    continue;
                }
                text += '}';
                ++i;
                continue;
            }
            text += c;
            ++i;
        }
        if (!text.empty()) {
            FStringExpr::Part part;
            part.text = std::move(text);
            node.parts.push_back(std::move(part));
        }
    }

    ExprPtr parse_paren_atom() {
        int l = cur().line + line_offset, c = cur().col;
        expect_op("(");
        if (at_op(")")) {
            next();
            auto node = std::make_unique<SequenceExpr>(ExprKind::Tuple);
            node->line = l;
            node->col = c;
            node->end_line = last_content_end + line_offset;
            return node;
        }
        if (at_kw("yield")) {
            ExprPtr y = parse_yield_expr();
            expect_op(")");
            return y;
        }
        ExprPtr first = at_op("*") ? parse_target_atom() : parse_namedexpr();
        if (at_kw("for") || at_kw("async")) {
            ExprPtr comp = parse_comprehension_tail(std::move(first), ExprKind::GeneratorExp);
            expect_op(")");
            return comp;
        }
        if (at_op(",")) {
            auto tuple = std::make_unique<SequenceExpr>(ExprKind::Tuple);
            tuple->line = l;
            tuple->col = c;
            tuple->elements.push_back(std::move(first));
            while (eat_op(",")) {
                if (at_op(")")) break;
                tuple->elements.push_back(at_op("*") ? parse_target_atom() : parse_namedexpr());
            }
            expect_op(")");
            tuple->end_line = last_content_end + line_offset;
            return tuple;
        }
        expect_op(")");
        if (first) first->end_line = last_content_end + line_offset;
        return first;
    }

    ExprPtr parse_list_atom() {
        int l = cur().line + line_offset, c = cur().col;
        expect_op("[");
        auto finish = [this, l, c](std::unique_ptr<SequenceExpr> node) -> ExprPtr {
            node->line = l;
            node->col = c;
            expect_op("]");
            node->end_line = last_content_end + line_offset;
            return node;
        };
        auto node = std::make_unique<SequenceExpr>(ExprKind::List);
        if (at_op("]")) return finish(std::move(node));
        ExprPtr first = at_op("*") ? parse_target_atom() : parse_namedexpr();
        if (at_kw("for") || at_kw("async")) {
            ExprPtr comp = parse_comprehension_tail(std::move(first), ExprKind::ListComp);
            comp->line = l;
            comp->col = c;
            expect_op("]");
            comp->end_line = last_content_end + line_offset;
            return comp;
        }
        node->elements.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("]")) break;
            node->elements.push_back(at_op("*") ? parse_target_atom() : parse_namedexpr());
        }
        return finish(std::move(node));
    }

    ExprPtr parse_dict_set_atom() {
        int l = cur().line + line_offset, c = cur().col;
        expect_op("{");
        if (at_op("}")) {
            next();
            auto node = std::make_unique<DictExpr>();
            node->line = l;
            node->col = c;
            node->end_line = last_content_end + line_offset;
            return node;
        }
        if (at_op("**")) {
            auto dict = std::make_unique<DictExpr>();
            dict->line = l;
            dict->col = c;
            while (true) {
                if (eat_op("**")) {
                    dict->items.emplace_back(nullptr, parse_bitor());
                } else {
                    ExprPtr key = parse_test();
                    expect_op(":");
                    dict->items.emplace_back(std::move(key), parse_test());
                }
                if (!eat_op(",") || at_op("}")) break;
            }
            expect_op("}");
            dict->end_line = last_content_end + line_offset;
            return dict;
        }
        ExprPtr first = at_op("*") ? parse_target_atom() : parse_namedexpr();
        if (at_op(":")) {
            next();
            ExprPtr value = parse_test();
            if (at_kw("for") || at_kw("async")) {
                auto comp = std::make_unique<DictCompExpr>();
                comp->line = l;
                comp->col = c;
                comp->key = std::move(first);
                comp->value = std::move(value);
                comp->generators = parse_comp_generators();
                expect_op("}");
                comp->end_line = last_content_end + line_offset;
                return comp;
            }
            auto dict = std::make_unique<DictExpr>();
            dict->line = l;
            dict->col = c;
            dict->items.emplace_back(std::move(first), std::move(value));
            while (eat_op(",")) {
                if (at_op("}")) break;
                if (eat_op("**")) {
                    dict->items.emplace_back(nullptr, parse_bitor());
                } else {
                    ExprPtr key = parse_test();
                    expect_op(":");
                    dict->items.emplace_back(std::move(key), parse_test());
                }
            }
            expect_op("}");
            dict->end_line = last_content_end + line_offset;
            return dict;
        }
        if (at_kw("for") || at_kw("async")) {
            ExprPtr comp = parse_comprehension_tail(std::move(first), ExprKind::SetComp);
            comp->line = l;
            comp->col = c;
            expect_op("}");
            comp->end_line = last_content_end + line_offset;
            return comp;
        }
        auto set = std::make_unique<SequenceExpr>(ExprKind::Set);
        set->line = l;
        set->col = c;
        set->elements.push_back(std::move(first));
        while (eat_op(",")) {
            if (at_op("}")) break;
            set->elements.push_back(at_op("*") ? parse_target_atom() : parse_namedexpr());
        }
        expect_op("}");
        set->end_line = last_content_end + line_offset;
        return set;
    }
};

}  // namespace

Module parse_module(const std::string& source) {
    LexResult lexed = tokenize(source);
    Parser parser;
    parser.toks = std::move(lexed.tokens);
    Module mod;
    mod.body = parser.parse_file();
    mod.comments = std::move(lexed.comments);
    return mod;
}

ExprPtr parse_expression(const std::string& text, int line_offset) {
    LexResult lexed = tokenize("(" + text + ")");
    Parser parser;
    parser.toks = std::move(lexed.tokens);
    parser.line_offset = line_offset;
    ExprPtr expr = parser.parse_namedexpr();
    if (!parser.at(TokKind::Newline) && !parser.at(TokKind::EndMarker)) {
        parser.fail("unexpected trailing tokens in expression");
    }
    return expr;
}

}  // namespace loopscan::py
