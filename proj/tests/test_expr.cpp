#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "heun/expr.hpp"
#include "heun/types.hpp"

using namespace heun;

namespace {

const HeunParams kBind{2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 0.0};

double ev(const std::string& text) {
    return parse_param_expr(text).eval(kBind);
}

// Random expression text built from the grammar itself; depth-bounded.
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
    static const char* kSyms[] = {"a", "q", "alpha", "beta", "gamma",
                                  "delta"};
    switch (pick(rng)) {
        case 0:
            return kSyms[rng() % 6];
        case 1: {
            std::uniform_real_distribution<double> num(0.0, 9.5);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3g", num(rng));
            return buf;
        }
        case 2:
            return "(" + random_expr(rng, depth - 1) + ")";
        case 3:
            return "-" + random_expr(rng, depth - 1);
        case 4:
            return random_expr(rng, depth - 1) + " + " +
                   random_expr(rng, depth - 1);
        case 5:
            return random_expr(rng, depth - 1) + " - " +
                   random_expr(rng, depth - 1);
        default:
            return random_expr(rng, depth - 1) + "*" +
                   random_expr(rng, depth - 1);
    }
}

}  // namespace

TEST_CASE("literal and symbol evaluation") {
    CHECK(ev("1.5") == 1.5);
    CHECK(ev("1e3") == 1000.0);
    CHECK(ev(".5") == 0.5);
    CHECK(ev("2.5e-2") == 0.025);
    CHECK(ev("a") == 2.0);
    CHECK(ev("q") == 3.0);
    CHECK(ev("alpha") == 4.0);
    CHECK(ev("beta") == 5.0);
    CHECK(ev("gamma") == 6.0);
    CHECK(ev("delta") == 7.0);
}

TEST_CASE("precedence and grouping") {
    CHECK(ev("a + q*alpha") == 14.0);
    CHECK(ev("(a + q)*alpha") == 20.0);
    CHECK(ev("2*3 + 4") == 10.0);
    CHECK(ev("2*(3 + 4)") == 14.0);
    CHECK(ev("-(a + 1)/2") == -1.5);
    CHECK(ev("a - q - alpha") == -5.0);
    CHECK(ev("12/q/a") == 2.0);
    CHECK(ev("-a*q") == -6.0);
    CHECK(ev("1 - delta") == -6.0);
    CHECK(ev("q - (delta - 1)*gamma*a") == 3.0 - 6.0 * 6.0 * 2.0);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_param_expr("alpha + ");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("syntax error at position 8") !=
              std::string::npos);
    }
    try {
        parse_param_expr("foo");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()) == "unknown symbol 'foo' at position 0");
    }
    try {
        parse_param_expr("a + foo");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("'foo' at position 4") !=
              std::string::npos);
    }
    CHECK_THROWS_AS(parse_param_expr("(a"), FormatError);
    CHECK_THROWS_AS(parse_param_expr(""), FormatError);
    try {
        parse_param_expr("1 2");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("trailing") != std::string::npos);
    }
}

TEST_CASE("division by zero is a domain error") {
    ParamExpr e = parse_param_expr("1/(a - 2)");
    CHECK_THROWS_AS(e.eval(kBind), DomainError);
    HeunParams ok = kBind;
    ok.a = 4.0;
    CHECK(e.eval(ok) == 0.5);
}

TEST_CASE("printing round-trips") {
    for (const char* text :
         {"1 - delta", "q - (delta - 1)*gamma*a", "-(a + 1)/2",
          "a + q*alpha", "(a + q)*alpha", "a - (q - 1)", "-a", "2*a/q"}) {
        ParamExpr e = parse_param_expr(text);
        std::string printed = e.to_string();
        ParamExpr back = parse_param_expr(printed);
        CHECK(back.eval(kBind) == doctest::Approx(e.eval(kBind)).epsilon(1e-15));
        CHECK(back.to_string() == printed);
    }
}

TEST_CASE("random expressions round-trip") {
    std::mt19937 rng(424242);
    int nontrivial = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::string text = random_expr(rng, 4);
        ParamExpr e = parse_param_expr(text);
        double want;
        try {
            want = e.eval(kBind);
        } catch (const DomainError&) {
            continue;
        }
        ParamExpr back = parse_param_expr(e.to_string());
        double got = back.eval(kBind);
        CHECK(std::fabs(got - want) <=
              1e-12 * std::max(1.0, std::fabs(want)));
        CHECK(back.to_string() == e.to_string());
        ++nontrivial;
    }
    CHECK(nontrivial > 400);
}

TEST_CASE("default expression is empty") {
    ParamExpr e;
    CHECK(e.empty());
    CHECK(!parse_param_expr("a").empty());
}
