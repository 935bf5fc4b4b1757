#pragma once

#include <map>
#include <memory>
#include <string>

namespace smms {

/// Arithmetic expression in named variables, e.g. "2 + cos(x)" or "exp(-x^2/2)".
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses,
/// numbers, the constants pi and e, and the functions sin cos tan exp log
/// sqrt abs sinh cosh tanh atan erf, plus two-argument pow, min and max.
class Expression {
public:
    // Throws ParseError on malformed input or unknown identifiers.
    Expression(const std::string& text, std::initializer_list<std::string> variables = {"x"});

    double operator()(double x) const;
    double eval(const std::map<std::string, double>& vars) const;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

} // namespace smms
