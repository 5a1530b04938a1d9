#include <doctest.h>

#include "loopscan/pyparse.hpp"

using namespace loopscan;

namespace {

py::Module parse(const std::string& src) { return py::parse_module(src); }

const py::ForStmt& as_for(const py::Stmt& s) {
    REQUIRE(s.kind == py::StmtKind::For);
    return static_cast<const py::ForStmt&>(s);
}

}  // namespace

TEST_CASE("minimal for loop parses") {
    py::Module mod = parse("for i in range(3):\n    pass\n");
    REQUIRE(mod.body.size() == 1);
    const auto& loop = as_for(*mod.body[0]);
    CHECK(loop.line == 1);
    CHECK(loop.body.size() == 1);
    CHECK(loop.body[0]->kind == py::StmtKind::Pass);
    const auto* iter = loop.iter.get();
    REQUIRE(iter != nullptr);
    CHECK(iter->kind == py::ExprKind::Call);
}

TEST_CASE("syntax error carries position") {
    try {
        parse("while True print('x')\n");
        FAIL("expected a parse error");
    } catch (const py::ParseError& e) {
        CHECK(e.line == 1);
    }
}

TEST_CASE("while with else clause") {
    py::Module mod = parse(
        "while x < 5:\n"
        "    x += 1\n"
        "else:\n"
        "    done = True\n");
    REQUIRE(mod.body.size() == 1);
    const auto& loop = static_cast<const py::WhileStmt&>(*mod.body[0]);
    CHECK(loop.orelse.size() == 1);
    CHECK(loop.orelse_line == 3);
    CHECK(loop.end_line == 4);
}

TEST_CASE("nested blocks and end lines") {
    py::Module mod = parse(
        "for i in range(5):\n"
        "    if i == 3:\n"
        "        break\n"
        "else:\n"
        "    print('no break')\n");
    const auto& loop = as_for(*mod.body[0]);
    CHECK(loop.orelse_line == 4);
    CHECK(loop.end_line == 5);
    CHECK(loop.body[0]->kind == py::StmtKind::If);
}

TEST_CASE("expressions: precedence, comparisons, ternary") {
    py::Module mod = parse("x = 1 + 2 * 3 ** 2\ny = a < b <= c\nz = p if q else r\n");
    REQUIRE(mod.body.size() == 3);
    const auto& assign = static_cast<const py::AssignStmt&>(*mod.body[0]);
    const auto& add = static_cast<const py::BinOpExpr&>(*assign.value);
    CHECK(add.op == py::BinOpKind::Add);
    const auto& mult = static_cast<const py::BinOpExpr&>(*add.rhs);
    CHECK(mult.op == py::BinOpKind::Mult);
    const auto& cmp = static_cast<const py::CompareExpr&>(
        *static_cast<const py::AssignStmt&>(*mod.body[1]).value);
    CHECK(cmp.rest.size() == 2);
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[2]).value->kind == py::ExprKind::IfExp);
}

TEST_CASE("calls with keywords, star args, and trailers") {
    py::Module mod = parse("result = fn(a, b=2, *rest, **extra).attr[1:2]\n");
    const auto& assign = static_cast<const py::AssignStmt&>(*mod.body[0]);
    REQUIRE(assign.value->kind == py::ExprKind::Subscript);
    const auto& sub = static_cast<const py::SubscriptExpr&>(*assign.value);
    CHECK(sub.index->kind == py::ExprKind::Slice);
    CHECK(sub.object->kind == py::ExprKind::Attribute);
}

TEST_CASE("comprehensions of all four shapes") {
    py::Module mod = parse(
        "a = [x * x for x in range(10) if x > 2]\n"
        "b = {x for x in items}\n"
        "c = {k: v for k, v in pairs.items()}\n"
        "d = (y for y in gen)\n");
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[0]).value->kind == py::ExprKind::ListComp);
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[1]).value->kind == py::ExprKind::SetComp);
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[2]).value->kind == py::ExprKind::DictComp);
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[3]).value->kind == py::ExprKind::GeneratorExp);
}

TEST_CASE("f-string interpolations become expressions") {
    py::Module mod = parse("msg = f\"user {name} has {count + 1} items\"\n");
    const auto& assign = static_cast<const py::AssignStmt&>(*mod.body[0]);
    REQUIRE(assign.value->kind == py::ExprKind::FString);
    const auto& fstr = static_cast<const py::FStringExpr&>(*assign.value);
    int exprs = 0;
    for (const auto& part : fstr.parts) {
        if (part.expr) ++exprs;
    }
    CHECK(exprs == 2);
    std::vector<std::string> names = py::collect_names(fstr);
    CHECK(std::find(names.begin(), names.end(), "name") != names.end());
    CHECK(std::find(names.begin(), names.end(), "count") != names.end());
}

TEST_CASE("f-string with subscript key and format spec") {
    py::Module mod = parse("line = f\"{record['ssn']},{value:>8.2f}\"\n");
    const auto& assign = static_cast<const py::AssignStmt&>(*mod.body[0]);
    REQUIRE(assign.value->kind == py::ExprKind::FString);
    std::vector<std::string> names = py::collect_names(*assign.value);
    CHECK(std::find(names.begin(), names.end(), "record") != names.end());
    CHECK(std::find(names.begin(), names.end(), "value") != names.end());
}

TEST_CASE("functions, defaults, annotations, decorators") {
    py::Module mod = parse(
        "@wraps(fn)\n"
        "def handler(a, b: int = 3, *args, key=None, **kw) -> str:\n"
        "    return str(a)\n");
    const auto& fn = static_cast<const py::FuncDefStmt&>(*mod.body[0]);
    CHECK(fn.name == "handler");
    CHECK(fn.params.size() == 5);
    CHECK(fn.decorators.size() == 1);
    CHECK(fn.returns != nullptr);
}

TEST_CASE("try except else finally and with") {
    py::Module mod = parse(
        "try:\n"
        "    risky()\n"
        "except ValueError as e:\n"
        "    handle(e)\n"
        "except Exception:\n"
        "    pass\n"
        "else:\n"
        "    ok()\n"
        "finally:\n"
        "    close()\n"
        "with open('f') as fh, lock:\n"
        "    fh.read()\n");
    const auto& tr = static_cast<const py::TryStmt&>(*mod.body[0]);
    CHECK(tr.handlers.size() == 2);
    CHECK(tr.handlers[0].name == "e");
    CHECK(tr.orelse.size() == 1);
    CHECK(tr.finally_body.size() == 1);
    const auto& with = static_cast<const py::WithStmt&>(*mod.body[1]);
    CHECK(with.items.size() == 2);
    CHECK(with.items[0].optional_vars != nullptr);
}

TEST_CASE("imports and scope declarations") {
    py::Module mod = parse(
        "import os, sys as system\n"
        "from os.path import join, exists as there\n"
        "from . import sibling\n"
        "global shared\n");
    const auto& imp = static_cast<const py::ImportStmt&>(*mod.body[0]);
    CHECK(imp.names.size() == 2);
    CHECK(imp.names[1].asname == "system");
    const auto& fromimp = static_cast<const py::ImportFromStmt&>(*mod.body[1]);
    CHECK(fromimp.module == "os.path");
    CHECK(fromimp.names.size() == 2);
    const auto& rel = static_cast<const py::ImportFromStmt&>(*mod.body[2]);
    CHECK(rel.level == 1);
}

TEST_CASE("tuple targets, chained and augmented assignment") {
    py::Module mod = parse(
        "a, b = b, a\n"
        "x = y = 0\n"
        "total += 5\n"
        "data[i] -= 1\n");
    const auto& swap = static_cast<const py::AssignStmt&>(*mod.body[0]);
    CHECK(swap.targets[0]->kind == py::ExprKind::Tuple);
    const auto& chain = static_cast<const py::AssignStmt&>(*mod.body[1]);
    CHECK(chain.targets.size() == 2);
    const auto& aug = static_cast<const py::AugAssignStmt&>(*mod.body[2]);
    CHECK(aug.op == py::BinOpKind::Add);
    const auto& sub = static_cast<const py::AugAssignStmt&>(*mod.body[3]);
    CHECK(sub.target->kind == py::ExprKind::Subscript);
}

TEST_CASE("lambda, walrus, await, yield") {
    py::Module mod = parse(
        "f = lambda x, y=1: x + y\n"
        "if (n := compute()) > 5:\n"
        "    pass\n"
        "async def pull():\n"
        "    value = await source()\n"
        "    yield value\n");
    CHECK(static_cast<const py::AssignStmt&>(*mod.body[0]).value->kind == py::ExprKind::Lambda);
    const auto& ifstmt = static_cast<const py::IfStmt&>(*mod.body[1]);
    bool has_walrus = false;
    py::walk_expressions(*ifstmt.test, [&](const py::Expr& e) {
        if (e.kind == py::ExprKind::Named) has_walrus = true;
    });
    CHECK(has_walrus);
    const auto& fn = static_cast<const py::FuncDefStmt&>(*mod.body[2]);
    CHECK(fn.is_async);
}

TEST_CASE("line continuation and implicit joining") {
    py::Module mod = parse(
        "total = 1 + \\\n"
        "    2\n"
        "items = [\n"
        "    1,\n"
        "    2,\n"
        "]\n");
    REQUIRE(mod.body.size() == 2);
    CHECK(mod.body[1]->end_line == 6);
}

TEST_CASE("comments are retained with line numbers") {
    py::Module mod = parse(
        "# leading note\n"
        "x = 1  # trailing note\n");
    REQUIRE(mod.comments.size() == 2);
    CHECK(mod.comments[0].line == 1);
    CHECK(mod.comments[1].line == 2);
    CHECK(mod.comments[0].text.find("leading") != std::string::npos);
}

TEST_CASE("string prefixes and concatenation") {
    py::Module mod = parse(
        "a = r\"raw\\n\" \"tail\"\n"
        "b = b\"GET / HTTP/1.0\\r\\n\\r\\n\"\n"
        "c = '''multi\n"
        "line'''\n");
    const auto& a = static_cast<const py::AssignStmt&>(*mod.body[0]);
    REQUIRE(a.value->kind == py::ExprKind::StringLit);
    CHECK(static_cast<const py::StringLitExpr&>(*a.value).value == "raw\\ntail");
    const auto& b = static_cast<const py::AssignStmt&>(*mod.body[1]);
    CHECK(static_cast<const py::StringLitExpr&>(*b.value).is_bytes);
    const auto& c = static_cast<const py::AssignStmt&>(*mod.body[2]);
    CHECK(c.end_line == 4);
}

TEST_CASE("numbers fold to values") {
    py::Module mod = parse("a = 10 ** 6\nb = 0x10\nc = 1_000_000\nd = 2.5e3\n");
    long long v = 0;
    CHECK(py::fold_const_int(*static_cast<const py::AssignStmt&>(*mod.body[0]).value, v));
    CHECK(v == 1000000);
    CHECK(py::fold_const_int(*static_cast<const py::AssignStmt&>(*mod.body[1]).value, v));
    CHECK(v == 16);
    CHECK(py::fold_const_int(*static_cast<const py::AssignStmt&>(*mod.body[2]).value, v));
    CHECK(v == 1000000);
    CHECK(!py::fold_const_int(*static_cast<const py::AssignStmt&>(*mod.body[3]).value, v));
}

TEST_CASE("class definitions with bases") {
    py::Module mod = parse(
        "class Walker(Base, metaclass=Meta):\n"
        "    def visit(self):\n"
        "        pass\n");
    const auto& cls = static_cast<const py::ClassDefStmt&>(*mod.body[0]);
    CHECK(cls.name == "Walker");
    CHECK(cls.bases.size() == 1);
    CHECK(cls.keywords.size() == 1);
}

TEST_CASE("indentation errors are rejected") {
    CHECK_THROWS_AS(parse("x = 1\n    y = 2\n"), py::ParseError);
    CHECK_THROWS_AS(parse("if x:\n    a = 1\n  b = 2\n"), py::LexError);
}

TEST_CASE("same source parses identically twice") {
    const std::string src =
        "for i in range(10):\n"
        "    if i % 2 == 0:\n"
        "        print(i)\n";
    py::Module first = parse(src);
    py::Module second = parse(src);
    REQUIRE(first.body.size() == second.body.size());
    CHECK(first.body[0]->end_line == second.body[0]->end_line);
}
