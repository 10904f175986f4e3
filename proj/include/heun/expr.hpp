#pragma once

#include <memory>
#include <string>

#include "heun/types.hpp"

namespace heun {

namespace detail {
struct ExprNode;
}

// Arithmetic expression over the symbols {a, q, alpha, beta, gamma,
// delta}, numeric literals, + - * /, unary minus, and parentheses.
// Immutable after parse; cheap to copy.
class ParamExpr {
public:
    ParamExpr() = default;

    double eval(const HeunParams& binding) const;
    std::string to_string() const;
    bool empty() const { return root_ == nullptr; }

private:
    explicit ParamExpr(std::shared_ptr<const detail::ExprNode> root)
        : root_(std::move(root)) {}

    std::shared_ptr<const detail::ExprNode> root_;

    friend ParamExpr parse_param_expr(const std::string& text);
};

// Standard precedence (unary minus over * /, those over + -), left
// associative.  Rejects unknown identifiers; FormatError carries the
// 0-based position of the offending token.
ParamExpr parse_param_expr(const std::string& text);

}  // namespace heun
