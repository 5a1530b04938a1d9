#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "loopscan/pyast.hpp"
#include "loopscan/pylex.hpp"

namespace loopscan::py {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int l, int c, const std::string& msg) : std::runtime_error(msg), line(l), col(c) {}
};

struct Module {
    StmtList body;
    std::vector<CommentTok> comments;
};

// Parse a complete source file. Throws ParseError or LexError on invalid syntax.
Module parse_module(const std::string& source);

// Parse a single expression (used for f-string interpolations).
// line_offset shifts reported positions so they point into the enclosing file.
ExprPtr parse_expression(const std::string& text, int line_offset = 0);

}  // namespace loopscan::py
