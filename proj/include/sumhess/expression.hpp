#pragma once

// Arithmetic expressions over x1, x2, x3, u, p1, p2, p3.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//
// so "-2^2" is -4 and "2^3^2" is 512.

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace sumhess {

enum class Var { X1, X2, X3, U, P1, P2, P3 };
inline constexpr int kVarCount = 7;

enum class Func { Exp, Log, Sin, Cos, Sqrt, Abs };

/// Values of every identifier, indexed by Var.
struct Bindings {
    std::array<double, kVarCount> values{};
    double& operator[](Var v) { return values[static_cast<int>(v)]; }
    double operator[](Var v) const { return values[static_cast<int>(v)]; }
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct NumberNode { double value; };
struct VariableNode { Var var; };
struct NegateNode { NodePtr operand; };
struct BinaryNode { char op; NodePtr lhs; NodePtr rhs; };
struct CallNode { Func func; NodePtr arg; };

struct Node {
    std::variant<NumberNode, VariableNode, NegateNode, BinaryNode, CallNode> kind;
};

class Expression {
public:
    Expression() = default;
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    /// IEEE evaluation. Throws EvalError for x/0, log of x <= 0, sqrt of
    /// x < 0 and any non-finite intermediate, naming the subexpression.
    double evaluate(const Bindings& env) const;

    /// Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;

    bool uses(Var v) const;
    const NodePtr& root() const noexcept { return root_; }

    friend bool structurally_equal(const Expression& a, const Expression& b);

private:
    NodePtr root_;
};

/// Throws ParseError with the byte offset of the offending token.
Expression parse(std::string_view source);

std::string_view to_string(Var v);
std::string_view to_string(Func f);

} // namespace sumhess
