#include "sumhess/errors.hpp"
#include "sumhess/expression.hpp"

#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <string>

using namespace sumhess;

namespace {

double eval(std::string_view src, Bindings env = {}) { return parse(src).evaluate(env); }

// Random fully parenthesized expression text together with the value a plain
// recursive evaluation of the same tree gives; nullopt where that is an error.
struct Generated {
    std::string text;
    std::optional<double> value;
};

class TreeGen {
public:
    TreeGen(std::uint64_t seed, const Bindings& env) : rng_(seed), env_(env) {}

    Generated make(int depth) {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
        switch (pick(rng_)) {
        case 0: {
            std::uniform_int_distribution<int> d(0, 400);
            const std::string s = std::to_string(d(rng_) / 100) + "." + std::to_string(d(rng_) % 100);
            return {s, std::stod(s)};
        }
        case 1: {
            static const char* names[] = {"x1", "x2", "x3", "u", "p1", "p2", "p3"};
            std::uniform_int_distribution<int> d(0, 6);
            const int v = d(rng_);
            return {names[v], env_.values[v]};
        }
        case 2: {
            Generated a = make(depth - 1);
            return {"(-" + a.text + ")", a.value ? std::optional<double>(-*a.value) : std::nullopt};
        }
        case 3:
        case 4: {
            static const char ops[] = {'+', '-', '*', '/', '^'};
            std::uniform_int_distribution<int> d(0, 4);
            const char op = ops[d(rng_)];
            Generated a = make(depth - 1);
            Generated b = make(depth - 1);
            std::optional<double> v;
            if (a.value && b.value) {
                const double x = *a.value, y = *b.value;
                double r = 0.0;
                bool ok = true;
                switch (op) {
                case '+': r = x + y; break;
                case '-': r = x - y; break;
                case '*': r = x * y; break;
                case '/': ok = y != 0.0; r = ok ? x / y : 0.0; break;
                default: r = std::pow(x, y);
                }
                if (ok && std::isfinite(r)) v = r;
            }
            return {"(" + a.text + " " + op + " " + b.text + ")", v};
        }
        default: {
            static const char* names[] = {"exp", "log", "sin", "cos", "sqrt", "abs"};
            std::uniform_int_distribution<int> d(0, 5);
            const int f = d(rng_);
            Generated a = make(depth - 1);
            std::optional<double> v;
            if (a.value) {
                const double x = *a.value;
                double r = 0.0;
                bool ok = true;
                switch (f) {
                case 0: r = std::exp(x); break;
                case 1: ok = x > 0.0; r = ok ? std::log(x) : 0.0; break;
                case 2: r = std::sin(x); break;
                case 3: r = std::cos(x); break;
                case 4: ok = x >= 0.0; r = ok ? std::sqrt(x) : 0.0; break;
                default: r = std::abs(x);
                }
                if (ok && std::isfinite(r)) v = r;
            }
            return {std::string(names[f]) + "(" + a.text + ")", v};
        }
        }
    }

private:
    std::mt19937_64 rng_;
    Bindings env_;
};

} // namespace

TEST_CASE("literals, identifiers and calls") {
    CHECK(eval("12 + 6") == 18.0);
    Bindings env;
    env[Var::X1] = 1.0;
    env[Var::X2] = 2.0;
    CHECK(eval("x1^2 + x2^2", env) == 5.0);
    Bindings e2;
    e2[Var::U] = 0.0;
    e2[Var::P1] = 2.0;
    CHECK(eval("exp(u) * (1 + p1^2)", e2) == 5.0);
    CHECK(eval("sqrt(4)") == 2.0);
    CHECK(eval("abs(-3) + cos(0) + sin(0) + log(1)") == 4.0);
    CHECK(eval("1.5e2") == 150.0);
    CHECK(eval("  2\t*\n3 ") == 6.0);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval("2+3*4^2") == 50.0);
    CHECK(eval("-2^2") == -4.0);
    CHECK(eval("2^3^2") == 512.0);
    CHECK(eval("2^-1") == 0.5);
    CHECK(eval("8/4/2") == 1.0);
    CHECK(eval("8-4-2") == 2.0);
    CHECK(eval("--3") == 3.0);
    CHECK(eval("-3*-2") == 6.0);
}

TEST_CASE("evaluation errors name the subexpression") {
    Bindings env;
    env[Var::X1] = 1.0;
    CHECK_THROWS_AS(eval("1/ (x1 - 1)", env), EvalError);
    try {
        eval("2 + log(x1 - 3)", env);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        CHECK(std::string(e.what()).find("log") != std::string::npos);
    }
    CHECK_THROWS_AS(eval("sqrt(-1)"), EvalError);
    CHECK_THROWS_AS(eval("exp(1000)"), EvalError);
    CHECK_THROWS_AS(eval("(-8)^(1/3)"), EvalError);
}

TEST_CASE("syntax errors carry offsets") {
    try {
        parse("1 + * 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        parse("x1 + y");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 5);
        CHECK(std::string(e.what()).find("y") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("(1 + 2"), ParseError);
    CHECK_THROWS_AS(parse("1 + 2)"), ParseError);
    CHECK_THROWS_AS(parse("exp 2"), ParseError);
    CHECK_THROWS_AS(parse("tan(1)"), ParseError);
    CHECK_THROWS_AS(parse("1 $ 2"), ParseError);
}

TEST_CASE("uses reports identifiers") {
    const Expression e = parse("exp(u) * p2 + x1");
    CHECK(e.uses(Var::U));
    CHECK(e.uses(Var::P2));
    CHECK(e.uses(Var::X1));
    CHECK_FALSE(e.uses(Var::P1));
    CHECK_FALSE(parse("18").uses(Var::U));
}

TEST_CASE("evaluator agrees with a reference on random trees") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    int errors = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Bindings env;
        for (double& v : env.values) v = d(rng);
        TreeGen gen(static_cast<std::uint64_t>(trial) * 7919 + 1, env);
        const Generated g = gen.make(5);
        const Expression e = parse(g.text);
        if (g.value) {
            CHECK(e.evaluate(env) == *g.value);
        } else {
            ++errors;
            CHECK_THROWS_AS(e.evaluate(env), EvalError);
        }
    }
    CHECK(errors > 10);   // the error paths were exercised
    CHECK(errors < 900);
}

TEST_CASE("print then parse is a fixpoint") {
    Bindings env;
    for (int trial = 0; trial < 300; ++trial) {
        TreeGen gen(static_cast<std::uint64_t>(trial) + 99, env);
        const Expression e = parse(gen.make(5).text);
        const std::string printed = e.to_string();
        const Expression again = parse(printed);
        CHECK(structurally_equal(e, again));
        CHECK(again.to_string() == printed);
    }
    for (const char* s : {"-2^2", "2+3*4^2", "2^3^2", "x1 - -x2", "1e-3 * sqrt(abs(p1))"}) {
        const Expression e = parse(s);
        CHECK(structurally_equal(e, parse(e.to_string())));
        CHECK(e.evaluate({}) == parse(e.to_string()).evaluate({}));
    }
    CHECK_FALSE(structurally_equal(parse("1 + 2"), parse("2 + 1")));
}
