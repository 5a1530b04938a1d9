#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "loopscan/corpus.hpp"
#include "loopscan/pyparse.hpp"

namespace loopscan {

enum class LoopKind { ForLoop, WhileLoop };

struct LoopRegion {
    std::string sample_id;
    LoopKind loop_kind = LoopKind::ForLoop;
    int header_line = 1;
    int body_start = 1;
    int body_end = 1;        // last line of the whole statement, else clause included
    int nesting_depth = 0;   // 0 = top-level loop
    bool has_else_clause = false;
};

struct CodeBlock {
    std::string sample_id;
    int first_line = 1;
    std::string text;  // excerpt with original line breaks, no trailing newline
    int line_count = 0;
};

enum class ComprehensionKind { List, Set, Dict, Generator };

struct ComprehensionSite {
    int line = 0;
    ComprehensionKind kind = ComprehensionKind::List;
};

// Parse handle: full syntax tree plus the comments and comprehension sites
// the detectors need.
struct ParsedSource {
    std::string sample_id;
    std::string source;
    std::vector<std::string> lines;  // 1-based access via line_at()
    py::Module module;
    std::vector<ComprehensionSite> comprehensions;

    const std::string& line_at(int line_no) const;  // 1-based
    int line_count() const { return static_cast<int>(lines.size()); }
};

struct SyntaxErrorInfo {
    int line = 0;
    int column = 0;
    std::string message;
};

struct ParseResult {
    std::shared_ptr<const ParsedSource> source;
    std::optional<SyntaxErrorInfo> error;

    bool ok() const { return source != nullptr; }
};

inline constexpr std::size_t kDefaultMaxSourceBytes = 1 << 20;
inline constexpr int kDefaultContextLines = 3;

// Parse a sample. Returns either a handle or a syntax-error report; only the
// size limit is an outright failure worth reporting the same way.
ParseResult parse_source(const CodeSample& sample,
                         std::size_t max_source_bytes = kDefaultMaxSourceBytes);

// One region per for/while statement in source order. Comprehensions are
// recorded on the handle, not emitted as regions.
std::vector<LoopRegion> extract_loops(const ParsedSource& source);

// Region lines plus up to context_lines of leading/trailing context,
// clamped at the file boundaries.
CodeBlock slice_code_block(const CodeSample& sample, const LoopRegion& region, int context_lines);

// The entire sample as a single block (whole-file analysis mode).
CodeBlock whole_file_block(const CodeSample& sample);

std::vector<std::string> split_lines(const std::string& source);

}  // namespace loopscan
