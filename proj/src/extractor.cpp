#include "loopscan/extractor.hpp"

#include <algorithm>

namespace loopscan {

std::vector<std::string> split_lines(const std::string& source) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : source) {
        if (c == '\n') {
            if (!current.empty() && current.back() == '\r') current.pop_back();
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) lines.push_back(std::move(current));
    return lines;
}

const std::string& ParsedSource::line_at(int line_no) const {
    static const std::string empty;
    if (line_no < 1 || line_no > static_cast<int>(lines.size())) return empty;
    return lines[static_cast<size_t>(line_no) - 1];
}

ParseResult parse_source(const CodeSample& sample, std::size_t max_source_bytes) {
    ParseResult result;
    if (sample.source.size() > max_source_bytes) {
        result.error = SyntaxErrorInfo{0, 0,
                                       "source exceeds size limit (" +
                                           std::to_string(sample.source.size()) + " > " +
                                           std::to_string(max_source_bytes) + " bytes)"};
        return result;
    }
    auto parsed = std::make_shared<ParsedSource>();
    parsed->sample_id = sample.sample_id;
    parsed->source = sample.source;
    parsed->lines = split_lines(sample.source);
    try {
        parsed->module = py::parse_module(sample.source);
    } catch (const py::LexError& e) {
        result.error = SyntaxErrorInfo{e.line, e.col, e.what()};
        return result;
    } catch (const py::ParseError& e) {
        result.error = SyntaxErrorInfo{e.line, e.col, e.what()};
        return result;
    }

    py::walk_statements(parsed->module.body, [&parsed](const py::Stmt& stmt) {
        py::for_each_expr_in_stmt(stmt, [&parsed](const py::Expr& top) {
            py::walk_expressions(top, [&parsed](const py::Expr& e) {
                switch (e.kind) {
                    case py::ExprKind::ListComp:
                        parsed->comprehensions.push_back({e.line, ComprehensionKind::List});
                        break;
                    case py::ExprKind::SetComp:
                        parsed->comprehensions.push_back({e.line, ComprehensionKind::Set});
                        break;
                    case py::ExprKind::DictComp:
                        parsed->comprehensions.push_back({e.line, ComprehensionKind::Dict});
                        break;
                    case py::ExprKind::GeneratorExp:
                        parsed->comprehensions.push_back({e.line, ComprehensionKind::Generator});
                        break;
                    default:
                        break;
                }
            });
        });
        return true;
    });

    result.source = std::move(parsed);
    return result;
}

namespace {

void collect_regions(const py::StmtList& stmts, int depth, const std::string& sample_id,
                     std::vector<LoopRegion>& out) {
    for (const auto& stmt : stmts) {
        if (!stmt) continue;
        bool is_loop = stmt->kind == py::StmtKind::For || stmt->kind == py::StmtKind::While;
        if (is_loop) {
            LoopRegion region;
            region.sample_id = sample_id;
            region.header_line = stmt->line;
            region.body_end = stmt->end_line;
            region.nesting_depth = depth;
            if (stmt->kind == py::StmtKind::For) {
                const auto& loop = static_cast<const py::ForStmt&>(*stmt);
                region.loop_kind = LoopKind::ForLoop;
                region.body_start = loop.body.empty() ? loop.line : loop.body.front()->line;
                region.has_else_clause = !loop.orelse.empty();
            } else {
                const auto& loop = static_cast<const py::WhileStmt&>(*stmt);
                region.loop_kind = LoopKind::WhileLoop;
                region.body_start = loop.body.empty() ? loop.line : loop.body.front()->line;
                region.has_else_clause = !loop.orelse.empty();
            }
            out.push_back(region);
        }
        int child_depth = is_loop ? depth + 1 : depth;
        for (const py::StmtList* suite : py::child_suites(*stmt)) {
            collect_regions(*suite, child_depth, sample_id, out);
        }
    }
}

}  // namespace

std::vector<LoopRegion> extract_loops(const ParsedSource& source) {
    std::vector<LoopRegion> regions;
    collect_regions(source.module.body, 0, source.sample_id, regions);
    std::stable_sort(regions.begin(), regions.end(),
                     [](const LoopRegion& a, const LoopRegion& b) {
                         return a.header_line < b.header_line;
                     });
    return regions;
}

CodeBlock slice_code_block(const CodeSample& sample, const LoopRegion& region, int context_lines) {
    std::vector<std::string> lines = split_lines(sample.source);
    int total = static_cast<int>(lines.size());
    int first = std::max(1, region.header_line - context_lines);
    int last = std::min(total, region.body_end + context_lines);
    CodeBlock block;
    block.sample_id = sample.sample_id;
    block.first_line = first;
    for (int i = first; i <= last; ++i) {
        if (i > first) block.text += '\n';
        block.text += lines[static_cast<size_t>(i) - 1];
    }
    block.line_count = last >= first ? last - first + 1 : 0;
    return block;
}

CodeBlock whole_file_block(const CodeSample& sample) {
    std::vector<std::string> lines = split_lines(sample.source);
    CodeBlock block;
    block.sample_id = sample.sample_id;
    block.first_line = 1;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) block.text += '\n';
        block.text += lines[i];
    }
    block.line_count = static_cast<int>(lines.size());
    return block;
}

}  // namespace loopscan
