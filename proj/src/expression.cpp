#include "sumhess/expression.hpp"

#include "sumhess/errors.hpp"
#include "sumhess/format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace sumhess {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NodePtr make(auto&& kind) { return std::make_shared<const Node>(Node{std::forward<decltype(kind)>(kind)}); }

constexpr std::array<std::pair<std::string_view, Var>, kVarCount> kVars{{
    {"x1", Var::X1}, {"x2", Var::X2}, {"x3", Var::X3}, {"u", Var::U},
    {"p1", Var::P1}, {"p2", Var::P2}, {"p3", Var::P3},
}};

constexpr std::array<std::pair<std::string_view, Func>, 6> kFuncs{{
    {"exp", Func::Exp}, {"log", Func::Log}, {"sin", Func::Sin},
    {"cos", Func::Cos}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
}};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("expected operator or end of input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
        throw ParseError(msg + ", found " + found, pos_);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(BinaryNode{'+', lhs, term()});
            else if (accept('-')) lhs = make(BinaryNode{'-', lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(BinaryNode{'*', lhs, unary()});
            else if (accept('/')) lhs = make(BinaryNode{'/', lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(NegateNode{unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(BinaryNode{'^', base, unary()});
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("expected number, identifier or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("expected number, identifier or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
        if (ec != std::errc()) fail("malformed number");
        pos_ = static_cast<std::size_t>(end - src_.data());
        if (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            pos_ = start;
            fail("malformed number");
        }
        return make(NumberNode{value});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        for (const auto& [fname, f] : kFuncs) {
            if (name == fname) {
                if (!accept('(')) fail("expected '(' after function " + std::string(name));
                NodePtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                return make(CallNode{f, arg});
            }
        }
        for (const auto& [vname, v] : kVars) {
            if (name == vname) return make(VariableNode{v});
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::string print(const NodePtr& n) {
    return std::visit(
        overloaded{
            [](const NumberNode& x) { return format_double(x.value); },
            [](const VariableNode& x) { return std::string(to_string(x.var)); },
            [](const NegateNode& x) { return "(-" + print(x.operand) + ")"; },
            [](const BinaryNode& x) { return "(" + print(x.lhs) + " " + x.op + " " + print(x.rhs) + ")"; },
            [](const CallNode& x) { return std::string(to_string(x.func)) + "(" + print(x.arg) + ")"; },
        },
        n->kind);
}

[[noreturn]] void eval_fail(const std::string& what, const NodePtr& n) {
    throw EvalError(what + " in '" + print(n) + "'");
}

double eval(const NodePtr& n, const Bindings& env) {
    const double v = std::visit(
        overloaded{
            [](const NumberNode& x) { return x.value; },
            [&](const VariableNode& x) { return env[x.var]; },
            [&](const NegateNode& x) { return -eval(x.operand, env); },
            [&](const BinaryNode& x) {
                const double a = eval(x.lhs, env);
                const double b = eval(x.rhs, env);
                switch (x.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/':
                    if (b == 0.0) eval_fail("division by zero", n);
                    return a / b;
                default: return std::pow(a, b);
                }
            },
            [&](const CallNode& x) {
                const double a = eval(x.arg, env);
                switch (x.func) {
                case Func::Exp: return std::exp(a);
                case Func::Log:
                    if (!(a > 0.0)) eval_fail("log of non-positive value", n);
                    return std::log(a);
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Sqrt:
                    if (a < 0.0) eval_fail("sqrt of negative value", n);
                    return std::sqrt(a);
                case Func::Abs: return std::abs(a);
                }
                return a;
            },
        },
        n->kind);
    if (!std::isfinite(v)) eval_fail("non-finite value", n);
    return v;
}

bool uses_var(const NodePtr& n, Var v) {
    return std::visit(overloaded{
                          [](const NumberNode&) { return false; },
                          [&](const VariableNode& x) { return x.var == v; },
                          [&](const NegateNode& x) { return uses_var(x.operand, v); },
                          [&](const BinaryNode& x) { return uses_var(x.lhs, v) || uses_var(x.rhs, v); },
                          [&](const CallNode& x) { return uses_var(x.arg, v); },
                      },
                      n->kind);
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (a->kind.index() != b->kind.index()) return false;
    return std::visit(
        overloaded{
            [&](const NumberNode& x) { return x.value == std::get<NumberNode>(b->kind).value; },
            [&](const VariableNode& x) { return x.var == std::get<VariableNode>(b->kind).var; },
            [&](const NegateNode& x) { return equal(x.operand, std::get<NegateNode>(b->kind).operand); },
            [&](const BinaryNode& x) {
                const auto& y = std::get<BinaryNode>(b->kind);
                return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            },
            [&](const CallNode& x) {
                const auto& y = std::get<CallNode>(b->kind);
                return x.func == y.func && equal(x.arg, y.arg);
            },
        },
        a->kind);
}

} // namespace

std::string_view to_string(Var v) { return kVars[static_cast<int>(v)].first; }

std::string_view to_string(Func f) { return kFuncs[static_cast<int>(f)].first; }

Expression parse(std::string_view source) { return Expression(Parser(source).parse_all()); }

double Expression::evaluate(const Bindings& env) const {
    if (!root_) throw EvalError("empty expression");
    return eval(root_, env);
}

std::string Expression::to_string() const { return root_ ? print(root_) : std::string(); }

bool Expression::uses(Var v) const { return root_ && uses_var(root_, v); }

bool structurally_equal(const Expression& a, const Expression& b) {
    if (!a.root_ || !b.root_) return !a.root_ && !b.root_;
    return equal(a.root_, b.root_);
}

} // namespace sumhess
