#include "nullgeo/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace nullgeo {

namespace detail {

enum class Op { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs, Atan };

struct ExprNode {
    Op op = Op::Number;
    double number = 0.0;
    int variable = -1;
    Fn fn = Fn::Sin;
    std::shared_ptr<const ExprNode> lhs, rhs;
};

}  // namespace detail

namespace {

using detail::ExprNode;
using detail::Fn;
using detail::Op;
using NodePtr = std::shared_ptr<const ExprNode>;

struct FunctionName {
    std::string_view name;
    Fn fn;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"sinh", Fn::Sinh},
    {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh}, {"exp", Fn::Exp},   {"log", Fn::Log},
    {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs},   {"atan", Fn::Atan},
};

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Number;
    n->number = v;
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Op::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(Op::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<ExprNode>();
            n->op = Op::Neg;
            n->lhs = unary();
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make_binary(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const auto* first = src_.data() + start;
        const auto* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            pos_ = start;
            fail("malformed number");
        }
        return make_number(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        for (const auto& f : kFunctions) {
            if (f.name == name) {
                if (!accept('(')) fail("expected '(' after function '" + std::string(name) + "'");
                auto n = std::make_shared<ExprNode>();
                n->op = Op::Call;
                n->fn = f.fn;
                n->lhs = expression();
                if (!accept(')')) fail("expected ')'");
                return n;
            }
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                auto n = std::make_shared<ExprNode>();
                n->op = Op::Variable;
                n->variable = static_cast<int>(i);
                return n;
            }
        }
        if (name == "pi") return make_number(std::numbers::pi);
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

template <class T>
T apply(Fn fn, const T& x) {
    using std::abs, std::atan, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt,
        std::tan, std::tanh;
    switch (fn) {
        case Fn::Sin: return sin(x);
        case Fn::Cos: return cos(x);
        case Fn::Tan: return tan(x);
        case Fn::Sinh: return sinh(x);
        case Fn::Cosh: return cosh(x);
        case Fn::Tanh: return tanh(x);
        case Fn::Exp: return exp(x);
        case Fn::Log: return log(x);
        case Fn::Sqrt: return sqrt(x);
        case Fn::Abs: return abs(x);
        case Fn::Atan: return atan(x);
    }
    return x;
}

double eval(const ExprNode& n, std::span<const double> args) {
    switch (n.op) {
        case Op::Number: return n.number;
        case Op::Variable: return args[static_cast<std::size_t>(n.variable)];
        case Op::Neg: return -eval(*n.lhs, args);
        case Op::Add: return eval(*n.lhs, args) + eval(*n.rhs, args);
        case Op::Sub: return eval(*n.lhs, args) - eval(*n.rhs, args);
        case Op::Mul: return eval(*n.lhs, args) * eval(*n.rhs, args);
        case Op::Div: return eval(*n.lhs, args) / eval(*n.rhs, args);
        case Op::Pow: return std::pow(eval(*n.lhs, args), eval(*n.rhs, args));
        case Op::Call: return apply(n.fn, eval(*n.lhs, args));
    }
    return 0.0;
}

Jet2 eval(const ExprNode& n, std::span<const Jet2> args, int nvars) {
    switch (n.op) {
        case Op::Number: return Jet2::constant(n.number, nvars);
        case Op::Variable: return args[static_cast<std::size_t>(n.variable)];
        case Op::Neg: return -eval(*n.lhs, args, nvars);
        case Op::Add: return eval(*n.lhs, args, nvars) + eval(*n.rhs, args, nvars);
        case Op::Sub: return eval(*n.lhs, args, nvars) - eval(*n.rhs, args, nvars);
        case Op::Mul: return eval(*n.lhs, args, nvars) * eval(*n.rhs, args, nvars);
        case Op::Div: return eval(*n.lhs, args, nvars) / eval(*n.rhs, args, nvars);
        case Op::Pow: return pow(eval(*n.lhs, args, nvars), eval(*n.rhs, args, nvars));
        case Op::Call: return apply(n.fn, eval(*n.lhs, args, nvars));
    }
    return Jet2::constant(0.0, nvars);
}

bool references_variable(const ExprNode& n) {
    if (n.op == Op::Variable) return true;
    if (n.lhs && references_variable(*n.lhs)) return true;
    return n.rhs && references_variable(*n.rhs);
}

}  // namespace

ExpressionField::ExpressionField() : source_("0"), root_(make_number(0.0)) {}

ExpressionField parse_expression(std::string_view source, const std::vector<std::string>& variables) {
    ExpressionField f;
    f.root_ = Parser(source, variables).parse();
    f.source_ = std::string(source);
    f.variables_ = variables;
    return f;
}

double ExpressionField::evaluate(std::span<const double> point) const {
    if (point.size() != variables_.size())
        throw Error("arity mismatch: expression '" + source_ + "' takes " + std::to_string(variables_.size()) +
                    " variables, got " + std::to_string(point.size()));
    return eval(*root_, point);
}

Jet2 ExpressionField::evaluate_jet(std::span<const double> point) const {
    if (point.size() != variables_.size())
        throw Error("arity mismatch: expression '" + source_ + "' takes " + std::to_string(variables_.size()) +
                    " variables, got " + std::to_string(point.size()));
    const int n = static_cast<int>(point.size());
    std::vector<Jet2> args;
    args.reserve(point.size());
    for (int i = 0; i < n; ++i) args.push_back(Jet2::variable(point[static_cast<std::size_t>(i)], i, n));
    return eval(*root_, args, n);
}

Jet2 ExpressionField::evaluate(std::span<const Jet2> args) const {
    if (args.size() != variables_.size())
        throw Error("arity mismatch: expression '" + source_ + "' takes " + std::to_string(variables_.size()) +
                    " variables, got " + std::to_string(args.size()));
    const int nvars = args.empty() ? 0 : args.front().nvars();
    return eval(*root_, args, nvars);
}

bool ExpressionField::is_constant() const { return !references_variable(*root_); }

}  // namespace nullgeo
