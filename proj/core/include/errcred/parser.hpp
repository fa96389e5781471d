#pragma once

// S-expression surface syntax. See docs/syntax.md for the grammar.
//
// Sugar (lam, let, seq, alloc, flip, multi-argument application) is removed
// during parsing; the resulting AST only contains core forms, with rand
// sites numbered in preorder.

#include "errcred/syntax.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace errcred {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

ExprPtr parse_expr(std::string_view text);

/// Reads and parses a program file.
ExprPtr parse_file(const std::string& path);

std::string print_expr(const ExprPtr& e);
std::string print_expr(const Expr& e);

bool is_keyword(std::string_view name);

} // namespace errcred
