#pragma once

#include "nullgeo/jet.hpp"
#include "nullgeo/types.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nullgeo {

namespace detail {
struct ExprNode;
}

/// A scalar field given by a closed-form expression over named variables.
///
/// Grammar: real literals, variables, `+ - * / ^`, unary minus, parentheses,
/// the functions sin cos tan sinh cosh tanh exp log sqrt abs atan, and the
/// constant `pi`. `^` is right-associative and binds tighter than unary minus.
class ExpressionField {
public:
    ExpressionField();  // the constant 0 over no variables

    const std::string& source() const { return source_; }
    const std::vector<std::string>& variables() const { return variables_; }
    std::size_t arity() const { return variables_.size(); }

    double evaluate(std::span<const double> point) const;

    /// Evaluates with every variable seeded as an independent jet coordinate.
    Jet2 evaluate_jet(std::span<const double> point) const;

    /// Evaluates with caller-supplied jets for each variable (composition).
    Jet2 evaluate(std::span<const Jet2> args) const;

    /// True when the expression does not reference any variable.
    bool is_constant() const;

    friend ExpressionField parse_expression(std::string_view source,
                                            const std::vector<std::string>& variables);

private:
    std::string source_;
    std::vector<std::string> variables_;
    std::shared_ptr<const detail::ExprNode> root_;
};

/// Parses `source` over `variables`. Throws ParseError (with position) on
/// syntax errors and unknown identifiers.
ExpressionField parse_expression(std::string_view source, const std::vector<std::string>& variables);

}  // namespace nullgeo
