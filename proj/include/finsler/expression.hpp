#pragma once

// Small arithmetic grammar for custom metrics and scalar fields.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'pi' | variable | call | '(' expr ')'
//   call    := ('sqrt' | 'exp' | 'log' | 'sin' | 'cos' | 'tan') '(' expr ')'
//            | 'pow' '(' expr ',' expr ')'
//   variable:= 'x' digits | 'y' digits           (1-based: x1, x2, ..., y1, ...)
//
// Variables x1..xn map to arguments 0..n-1 and y1..yn to n..2n-1. A grammar
// built without y-variables rejects y names.

#include <memory>
#include <string>
#include <string_view>

#include "finsler/function.hpp"

namespace finsler {

class Expression {
public:
    struct Node;

    /// Parse `text` over x1..x_nx and (if ny > 0) y1..y_ny. Throws ParseError.
    static Expression parse(std::string_view text, int nx, int ny = 0);

    const std::string& text() const noexcept { return text_; }
    int arity() const noexcept { return nx_ + ny_; }

    double evaluate(std::span<const double> vars) const;
    Jet evaluate(std::span<const Jet> vars) const;

    /// Wrap as a Function of arity nx + ny.
    Function function() const;

private:
    std::string text_;
    int nx_ = 0;
    int ny_ = 0;
    std::shared_ptr<const Node> root_;
};

}  // namespace finsler
