#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopscan::py {

enum class TokKind {
    Name,
    Keyword,
    Number,
    String,
    Op,
    Newline,
    Indent,
    Dedent,
    EndMarker,
};

struct Token {
    TokKind kind = TokKind::EndMarker;
    std::string text;   // identifier, keyword, operator spelling, or raw literal body
    int line = 0;       // 1-based
    int col = 0;        // 1-based
    int end_line = 0;

    // string literal details
    bool str_is_raw = false;
    bool str_is_bytes = false;
    bool str_is_fstring = false;
    std::string str_value;  // decoded content (raw content for f-strings)
};

struct CommentTok {
    int line = 0;
    std::string text;  // without the leading '#'
};

struct LexError : std::runtime_error {
    int line;
    int col;
    LexError(int l, int c, const std::string& msg) : std::runtime_error(msg), line(l), col(c) {}
};

struct LexResult {
    std::vector<Token> tokens;    // ends with EndMarker
    std::vector<CommentTok> comments;
};

// Tokenize Python source. Throws LexError on malformed input
// (bad indentation, unterminated string, stray characters).
LexResult tokenize(const std::string& source);

bool is_python_keyword(const std::string& word);

}  // namespace loopscan::py
