#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/oracles.hpp"
#include "tsost/expr.hpp"
#include "tsost/verify.hpp"

using tsost::ErrorKind;
using tsost::ExprFunc;
using tsost::parse_expr;

namespace {

ErrorKind parse_error_kind(const char* text) {
    try {
        parse_expr(text);
    } catch (const tsost::Error& e) {
        return e.kind();
    }
    FAIL("expected parse failure for " << text);
    return ErrorKind::Degenerate;
}

} // namespace

TEST_CASE("parse and evaluate") {
    const auto f = parse_expr("t^2 + 3*t");
    CHECK(f(2) == 10);
    CHECK(f.root()->op == tsost::ExprOp::Add);
    CHECK(f.smooth());

    const auto g = parse_expr("sin(t)*exp(t)");
    CHECK(g.root()->op == tsost::ExprOp::Mul);
    CHECK(g(0) == 0);

    CHECK(tsost::eval_expr(parse_expr("t^2"), 3) == 9);
    CHECK(tsost::eval_expr(parse_expr("sin(t)"), 0) == 0);
    CHECK(parse_expr("2.5e1 - .5")(0) == 24.5);
}

TEST_CASE("precedence: ^ above unary minus above * / above + -") {
    CHECK(parse_expr("-t^2")(3) == -9);
    CHECK(parse_expr("(-t)^2")(3) == 9);
    CHECK(parse_expr("2*-t")(3) == -6);
    CHECK(parse_expr("8/2/2")(0) == 2);
    CHECK(parse_expr("8-2-2")(0) == 4);
    CHECK(parse_expr("2+3*4")(0) == 14);
    CHECK(parse_expr("t^-1")(4) == 0.25);
    CHECK(parse_expr("t^(-2)")(2) == 0.25);
}

TEST_CASE("syntax errors report a position") {
    CHECK(parse_error_kind("t +") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind("(t") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind("t^1.5") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind("t t") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind("") == ErrorKind::SyntaxError);
    CHECK(parse_error_kind("abs(t)") == ErrorKind::UnknownFunction);
    CHECK(parse_error_kind("x + 1") == ErrorKind::UnknownFunction);
    try {
        parse_expr("t + * 2");
    } catch (const tsost::Error& e) {
        CHECK(std::string(e.what()).find("position 4") != std::string::npos);
    }
}

TEST_CASE("domain errors") {
    auto kind = [](const char* text, double t) {
        try {
            parse_expr(text)(t);
        } catch (const tsost::Error& e) {
            return e.kind();
        }
        return ErrorKind::Degenerate;
    };
    CHECK(kind("1/t", 0) == ErrorKind::DomainError);
    CHECK(kind("log(t)", 0) == ErrorKind::DomainError);
    CHECK(kind("sqrt(t)", -1) == ErrorKind::DomainError);
    CHECK(kind("t^-1", 0) == ErrorKind::DomainError);
    CHECK(kind("exp(t)", 1000) == ErrorKind::DomainError);
    CHECK_FALSE(parse_expr("1/t").smooth());
    CHECK_FALSE(parse_expr("log(t)").smooth());
    CHECK_FALSE(parse_expr("t^-2").smooth());
    CHECK(parse_expr("exp(sin(t))*cos(t)").smooth());
}

TEST_CASE("symbolic derivatives") {
    CHECK(tsost::diff_expr(parse_expr("t^2")).to_string() == "2*t");
    CHECK(tsost::diff_expr(parse_expr("sin(t)")).to_string() == "cos(t)");
    CHECK(tsost::diff_expr(parse_expr("exp(t)*t")).to_string() == "exp(t)*t + exp(t)");
    CHECK(tsost::diff_expr(parse_expr("5")).to_string() == "0");

    // exp(t)*t against central differences at 100 points
    const auto f = parse_expr("exp(t)*t");
    const auto df = f.derivative();
    for (int i = 0; i < 100; ++i) {
        const double t = -3.0 + 6.0 * i / 99.0;
        const double fd = oracle::central_difference([&](double x) { return f(x); }, t, 1e-6);
        CHECK(std::abs(df(t) - fd) <= 1e-5 * (1 + std::abs(df(t))));
    }
}

TEST_CASE("derivatives of the full operator set match finite differences") {
    const char* cases[] = {"sin(2*t)*cos(t)", "exp(-t^2)", "log(t^2 + 1)", "sqrt(t^2 + 2)",
                           "1/(t^2 + 1)", "(t - 1)^3/(2 + cos(t))", "-t^4 + 3*t^-2"};
    for (const char* text : cases) {
        const auto f = parse_expr(text);
        const auto df = f.derivative();
        for (double t : {0.3, 0.9, 1.7, 2.4}) {
            const double fd = oracle::central_difference([&](double x) { return f(x); }, t, 1e-6);
            INFO(text << " at t = " << t);
            CHECK(std::abs(df(t) - fd) <= 1e-5 * (1 + std::abs(df(t))));
        }
    }
}

TEST_CASE("polynomial derivative property: 100 random points in [-10, 10]") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        tsost::Rng rng(seed);
        const auto f = tsost::random_function(rng, 6, false);
        const auto df = tsost::diff_expr(f);
        for (int i = 0; i < 100; ++i) {
            const double t = rng.uniform(-10, 10);
            const double h = 1e-6;
            const double fd = (f(t + h) - f(t - h)) / (2 * h);
            INFO(f.to_string() << " at " << t);
            // The central difference of a degree-6 polynomial at |t| ~ 10 carries
            // rounding of order eps*|f|/h, so scale by |f| as well.
            CHECK(std::abs(df(t) - fd) <= 1e-5 * (1 + std::abs(df(t))) + 1e-9 * std::abs(f(t)));
        }
    }
}

TEST_CASE("print/parse round trip is a fixed point") {
    const char* cases[] = {"t^2 + 3*t", "-t^2", "(-t)^2", "2*-t", "t - -t", "(t^2)^3",
                           "sin(t)*exp(t)", "1/(t + 1)", "8/2/2", "8/(2/2)", "t - (t - 1)",
                           "-(t + 1)*2", "--t", "t^(-2)", "1e-3*t", "0.1 + 0.2*t"};
    for (const char* text : cases) {
        const auto once = parse_expr(text);
        const auto printed = once.to_string();
        const auto twice = parse_expr(printed);
        INFO(text << " -> " << printed);
        CHECK(twice == once);
        CHECK(twice.to_string() == printed);
    }
    // derivative trees (with folded negative constants) print stably too
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        tsost::Rng rng(seed);
        const auto f = tsost::random_function(rng, 6, seed % 2 == 0);
        for (const auto& g : {f, f.derivative(), f.derivative().derivative()}) {
            const auto printed = g.to_string();
            CHECK(parse_expr(printed).to_string() == printed);
        }
    }
}
