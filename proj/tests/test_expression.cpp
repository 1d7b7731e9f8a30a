#include <doctest.h>

#include "nullgeo/expression.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace nullgeo;

namespace {

double central_difference(const ExpressionField& f, std::vector<double> p, std::size_t i, double h = 1e-5) {
    auto q = p;
    p[i] += h;
    q[i] -= h;
    return (f.evaluate(p) - f.evaluate(q)) / (2.0 * h);
}

}  // namespace

TEST_CASE("literal evaluation") {
    CHECK(parse_expression("cosh(t)", {"t"}).evaluate(std::vector<double>{0.0}) == doctest::Approx(1.0));
    CHECK(parse_expression("sqrt(x^2+y^2)", {"x", "y"}).evaluate(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(parse_expression("2*pi", {}).evaluate(std::vector<double>{}) == doctest::Approx(2.0 * M_PI));
    CHECK(parse_expression("-x^2", {"x"}).evaluate(std::vector<double>{3.0}) == doctest::Approx(-9.0));
    CHECK(parse_expression("2^-1", {}).evaluate(std::vector<double>{}) == doctest::Approx(0.5));
    CHECK(parse_expression("2^3^2", {}).evaluate(std::vector<double>{}) == doctest::Approx(512.0));
    CHECK(parse_expression("1.5e-1 + 3E2", {}).evaluate(std::vector<double>{}) == doctest::Approx(300.15));
    CHECK(parse_expression("atan(1)", {}).evaluate(std::vector<double>{}) == doctest::Approx(M_PI / 4));
}

TEST_CASE("jet of t^2 - x^2 matches hand derivatives") {
    const auto f = parse_expression("t^2 - x^2", {"t", "x"});
    const Jet2 j = f.evaluate_jet(std::vector<double>{2.0, 1.0});
    CHECK(j.value() == doctest::Approx(3.0));
    CHECK(j.gradient()(0) == doctest::Approx(4.0));
    CHECK(j.gradient()(1) == doctest::Approx(-2.0));
    CHECK(j.hessian()(0, 0) == doctest::Approx(2.0));
    CHECK(j.hessian()(1, 1) == doctest::Approx(-2.0));
    CHECK(j.hessian()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("coordinate jet has unit gradient and zero hessian") {
    const Jet2 j = parse_expression("y", {"x", "y", "z"}).evaluate_jet(std::vector<double>{0.3, -1.0, 2.0});
    CHECK(j.gradient()(1) == 1.0);
    CHECK(j.gradient()(0) == 0.0);
    CHECK(j.hessian().isZero(0.0));
}

TEST_CASE("zero-order jets agree with plain evaluation, bit for bit") {
    const auto f = parse_expression("exp(x)*sin(y)/(1+x^2) - log(2+cos(x*y)) + abs(tanh(x-y))", {"x", "y"});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> p{u(rng), u(rng)};
        CHECK(f.evaluate_jet(p).value() == f.evaluate(p));
        CHECK(f.evaluate(p) == f.evaluate(p));
    }
}

TEST_CASE("jet gradient and hessian match central differences") {
    const std::vector<std::string> vars{"a", "b", "c"};
    const char* sources[] = {
        "sqrt(a^2+b^2+c^2)", "cosh(a)^2*sin(b)^2", "log(tan(b/2+0.8))", "atan(sinh(c))*exp(-a*b)",
        "(1+a^2)^(0.5+0.1*b)", "a/b - c^3", "tanh(a*b*c)",
    };
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 1.2);
    for (const char* src : sources) {
        const auto f = parse_expression(src, vars);
        for (int trial = 0; trial < 100; ++trial) {
            const std::vector<double> p{u(rng), u(rng), u(rng)};
            const Jet2 j = f.evaluate_jet(p);
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(std::abs(j.gradient()(static_cast<int>(i)) - central_difference(f, p, i)) <= 1e-6);
                // Hessian row i vs differences of the jet gradient.
                auto pp = p, pm = p;
                pp[i] += 1e-5;
                pm[i] -= 1e-5;
                const auto gp = f.evaluate_jet(pp).gradient(), gm = f.evaluate_jet(pm).gradient();
                for (int k = 0; k < 3; ++k)
                    CHECK(std::abs(j.hessian()(static_cast<int>(i), k) - (gp(k) - gm(k)) / 2e-5) <= 1e-5);
            }
        }
    }
}

TEST_CASE("Leibniz rule holds exactly for products") {
    const std::vector<double> p{0.7, -0.4};
    const auto u = parse_expression("sin(x)+y", {"x", "y"}).evaluate_jet(p);
    const auto v = parse_expression("x*y^2", {"x", "y"}).evaluate_jet(p);
    const Jet2 w = u * v;
    CHECK((w.gradient() - (u.value() * v.gradient() + v.value() * u.gradient())).norm() == doctest::Approx(0.0));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_expression("t +* 2", {"t"}), ParseError);
    try {
        parse_expression("t + foo", {"t"});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
        CHECK(std::string(e.what()).find("unknown identifier 'foo'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expression("sin t", {"t"}), ParseError);
    CHECK_THROWS_AS(parse_expression("(t", {"t"}), ParseError);
    CHECK_THROWS_AS(parse_expression("", {"t"}), ParseError);
    CHECK_THROWS_AS(parse_expression("1..2", {}), ParseError);
}

TEST_CASE("arity mismatch is rejected") {
    const auto f = parse_expression("x+y", {"x", "y"});
    CHECK_THROWS_AS(f.evaluate(std::vector<double>{1.0}), Error);
    CHECK(f.arity() == 2);
    CHECK_FALSE(f.is_constant());
    CHECK(parse_expression("2*pi", {"x"}).is_constant());
}
