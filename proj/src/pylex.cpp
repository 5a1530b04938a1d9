#include "loopscan/pylex.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace loopscan::py {

namespace {

// Longest-match-first operator table.
const std::array<const char*, 47> kOperators = {
    "**=", "//=", ">>=", "<<=", "...",
    "==", "!=", "<=", ">=", "->", ":=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "**", "//", "<<", ">>",
    "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">",
    "(", ")", "[", "]", "{", "}", ",", ":", ".", ";", "=",
};

const std::array<const char*, 35> kKeywords = {
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class",
    "continue", "def", "del", "elif", "else", "except", "finally", "for", "from", "global",
    "if", "import", "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise",
    "return", "try", "while", "with", "yield",
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_ident_cont(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int col = 1;
    int paren_depth = 0;
    bool at_line_start = true;
    std::vector<int> indents{0};
    LexResult result;

    explicit Lexer(const std::string& s) : src(s) {}

    char peek(size_t off = 0) const {
        return pos + off < src.size() ? src[pos + off] : '\0';
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos < src.size(); ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    [[noreturn]] void fail(const std::string& msg) { throw LexError(line, col, msg); }

    void push(TokKind kind, std::string text, int l, int c, int el) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = l;
        t.col = c;
        t.end_line = el;
        result.tokens.push_back(std::move(t));
    }

    bool last_token_is_newline() const {
        return result.tokens.empty() || result.tokens.back().kind == TokKind::Newline ||
               result.tokens.back().kind == TokKind::Indent ||
               result.tokens.back().kind == TokKind::Dedent;
    }

    void run() {
        while (pos < src.size()) {
            if (at_line_start && paren_depth == 0) {
                if (!handle_indentation()) continue;  // blank/comment-only line consumed
            }
            at_line_start = false;
            char c = peek();
            if (c == '\0') break;

            if (c == '\n' || c == '\r') {
                consume_newline();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\f') {
                advance();
                continue;
            }
            if (c == '#') {
                consume_comment();
                continue;
            }
            if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
                advance(peek(1) == '\r' ? 3 : 2);  // explicit line join
                continue;
            }
            if (is_ident_start(static_cast<unsigned char>(c))) {
                lex_name_or_string_prefix();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                lex_number();
                continue;
            }
            if (c == '"' || c == '\'') {
                lex_string(0, line, col);
                continue;
            }
            if (lex_operator()) continue;
            fail(std::string("unexpected character '") + c + "'");
        }
        finish();
    }

    // Returns true when real code follows on this line.
    bool handle_indentation() {
        size_t scan = pos;
        int width = 0;
        while (scan < src.size()) {
            char c = src[scan];
            if (c == ' ') {
                ++width;
                ++scan;
            } else if (c == '\t') {
                width += 8 - (width % 8);
                ++scan;
            } else if (c == '\f') {
                ++scan;
            } else {
                break;
            }
        }
        // Blank or comment-only lines never affect indentation.
        if (scan >= src.size()) {
            advance(scan - pos);
            at_line_start = false;
            return true;
        }
        char next = src[scan];
        if (next == '\n' || next == '\r') {
            advance(scan - pos);
            consume_newline_raw();
            return false;
        }
        if (next == '#') {
            advance(scan - pos);
            consume_comment();
            if (peek() == '\n' || peek() == '\r') consume_newline_raw();
            return false;
        }
        advance(scan - pos);
        at_line_start = false;

        int current = indents.back();
        if (width > current) {
            indents.push_back(width);
            push(TokKind::Indent, "", line, 1, line);
        } else if (width < current) {
            while (indents.size() > 1 && indents.back() > width) {
                indents.pop_back();
                push(TokKind::Dedent, "", line, 1, line);
            }
            if (indents.back() != width) fail("unindent does not match any outer indentation level");
        }
        return true;
    }

    void consume_newline_raw() {
        if (peek() == '\r') advance();
        if (peek() == '\n') advance();
        at_line_start = true;
    }

    void consume_newline() {
        int l = line, c = col;
        if (paren_depth > 0) {
            consume_newline_raw();
            at_line_start = false;  // implicit joining inside brackets
            return;
        }
        consume_newline_raw();
        if (!last_token_is_newline()) push(TokKind::Newline, "\n", l, c, l);
    }

    void consume_comment() {
        int l = line;
        size_t start = pos + 1;
        while (pos < src.size() && src[pos] != '\n') advance();
        result.comments.push_back({l, src.substr(start, pos - start)});
    }

    void lex_name_or_string_prefix() {
        int l = line, c = col;
        size_t start = pos;
        while (pos < src.size() && is_ident_cont(static_cast<unsigned char>(src[pos]))) advance();
        std::string word = src.substr(start, pos - start);

        // String prefix? (r, b, f, u and two-letter combinations, any case)
        if (word.size() <= 2 && (peek() == '"' || peek() == '\'')) {
            std::string low;
            for (char ch : word) low += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            bool valid = low == "r" || low == "b" || low == "f" || low == "u" || low == "rb" ||
                         low == "br" || low == "rf" || low == "fr";
            if (valid) {
                int flags = 0;
                if (low.find('r') != std::string::npos) flags |= 1;
                if (low.find('b') != std::string::npos) flags |= 2;
                if (low.find('f') != std::string::npos) flags |= 4;
                lex_string(flags, l, c);
                return;
            }
        }
        push(is_python_keyword(word) ? TokKind::Keyword : TokKind::Name, word, l, c, l);
    }

    void lex_string(int flags, int start_line, int start_col) {
        bool raw = flags & 1;
        bool bytes = flags & 2;
        bool fstr = flags & 4;
        char quote = peek();
        bool triple = peek(1) == quote && peek(2) == quote;
        advance(triple ? 3 : 1);

        std::string value;
        while (true) {
            if (pos >= src.size()) fail("unterminated string literal");
            char c = peek();
            if (!triple && (c == '\n' || c == '\r')) fail("unterminated string literal");
            if (c == quote) {
                if (!triple) {
                    advance();
                    break;
                }
                if (peek(1) == quote && peek(2) == quote) {
                    advance(3);
                    break;
                }
                value += c;
                advance();
                continue;
            }
            if (c == '\\' && pos + 1 < src.size()) {
                char esc = peek(1);
                if (raw) {
                    value += c;
                    value += esc;
                    advance(2);
                    continue;
                }
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    case '0': value += '\0'; break;
                    case 'a': value += '\a'; break;
                    case 'b': value += '\b'; break;
                    case 'f': value += '\f'; break;
                    case 'v': value += '\v'; break;
                    case '\n': break;  // line continuation inside string
                    case 'x': {
                        if (pos + 3 < src.size() && std::isxdigit(static_cast<unsigned char>(src[pos + 2])) &&
                            std::isxdigit(static_cast<unsigned char>(src[pos + 3]))) {
                            value += static_cast<char>(std::stoi(src.substr(pos + 2, 2), nullptr, 16));
                            advance(2);
                        } else {
                            value += "\\x";
                        }
                        break;
                    }
                    default:
                        value += '\\';
                        value += esc;
                        break;
                }
                advance(2);
                continue;
            }
            value += c;
            advance();
        }

        Token t;
        t.kind = TokKind::String;
        t.line = start_line;
        t.col = start_col;
        t.end_line = line;
        t.str_is_raw = raw;
        t.str_is_bytes = bytes;
        t.str_is_fstring = fstr;
        t.str_value = std::move(value);
        result.tokens.push_back(std::move(t));
    }

    void lex_number() {
        int l = line, c = col;
        size_t start = pos;
        auto take_while = [this](auto pred) {
            while (pos < src.size() && pred(static_cast<unsigned char>(src[pos]))) advance();
        };

        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' || peek(1) == 'O' ||
                              peek(1) == 'b' || peek(1) == 'B')) {
            advance(2);
            take_while([](unsigned char ch) { return std::isalnum(ch) || ch == '_'; });
        } else {
            take_while([](unsigned char ch) { return std::isdigit(ch) || ch == '_'; });
            if (peek() == '.') {
                advance();
                take_while([](unsigned char ch) { return std::isdigit(ch) || ch == '_'; });
            }
            if (peek() == 'e' || peek() == 'E') {
                size_t save = pos;
                advance();
                if (peek() == '+' || peek() == '-') advance();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    take_while([](unsigned char ch) { return std::isdigit(ch) || ch == '_'; });
                } else {
                    pos = save;  // not an exponent; leave 'e' for the next token
                }
            }
            if (peek() == 'j' || peek() == 'J') advance();
        }
        push(TokKind::Number, src.substr(start, pos - start), l, c, l);
    }

    bool lex_operator() {
        for (const char* op : kOperators) {
            size_t n = std::char_traits<char>::length(op);
            if (src.compare(pos, n, op) == 0) {
                int l = line, c = col;
                if (op[0] == '(' || op[0] == '[' || op[0] == '{') ++paren_depth;
                if (op[0] == ')' || op[0] == ']' || op[0] == '}') {
                    if (paren_depth > 0) --paren_depth;
                }
                advance(n);
                push(TokKind::Op, op, l, c, l);
                return true;
            }
        }
        return false;
    }

    void finish() {
        if (!last_token_is_newline()) push(TokKind::Newline, "\n", line, col, line);
        while (indents.size() > 1) {
            indents.pop_back();
            push(TokKind::Dedent, "", line, 1, line);
        }
        push(TokKind::EndMarker, "", line, col, line);
    }
};

}  // namespace

bool is_python_keyword(const std::string& word) {
    return std::find_if(kKeywords.begin(), kKeywords.end(),
                        [&word](const char* k) { return word == k; }) != kKeywords.end();
}

LexResult tokenize(const std::string& source) {
    Lexer lexer(source);
    lexer.run();
    return std::move(lexer.result);
}

}  // namespace loopscan::py
