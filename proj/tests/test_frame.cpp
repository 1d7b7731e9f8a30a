#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>
#include <random>

using namespace nullgeo;
using fixtures::vec;

namespace {

double angle(const NullFrame& f, const Vec& V, const Vec& W) {
    return f.inner(V, W) / std::sqrt(std::abs(f.inner(V, V)));
}

}  // namespace

TEST_CASE("induced gram of the null hyperplane") {
    const auto imm = fixtures::hyperplane3();
    const GramReport r = induced_gram(*imm, vec({0.3, -0.2}));
    CHECK(r.gram(0, 0) == doctest::Approx(0.0));
    CHECK(r.gram(0, 1) == doctest::Approx(0.0));
    CHECK(r.gram(1, 1) == doctest::Approx(1.0));
    CHECK(r.degenerate);
}

TEST_CASE("light cone gram is rank one") {
    const auto imm = fixtures::light_cone();
    const GramReport r = induced_gram(*imm, vec({1.0, 0.0}));
    CHECK(r.singular_values(1) <= 1e-14);
    CHECK(r.singular_values(0) > 0.5);
    CHECK(r.degenerate);
}

TEST_CASE("spacelike slice is rejected") {
    ImmersionSpec s;
    s.parameters = {"s", "v"};
    s.components = {"0", "s", "v"};
    s.domain = {{0, 1}, {0, 1}};
    const NullImmersion imm(fixtures::minkowski(3), s);
    CHECK_FALSE(induced_gram(imm, vec({0.5, 0.5})).degenerate);
    CHECK_THROWS_AS(radical_direction(imm, vec({0.5, 0.5})), GeometryError);
}

TEST_CASE("non-immersion is rejected") {
    ImmersionSpec s;
    s.parameters = {"s", "v"};
    s.components = {"s", "s", "s"};
    s.domain = {{0, 1}, {0, 1}};
    const NullImmersion imm(fixtures::minkowski(3), s);
    CHECK_THROWS_AS(induced_gram(imm, vec({0.5, 0.5})), GeometryError);
}

TEST_CASE("radical direction of the light cone is radial") {
    const auto imm = fixtures::light_cone();
    for (const Vec& u : imm->grid_points()) {
        const Vec p = imm->point(u);
        const Vec xi = radical_direction(*imm, u);
        // g(e0, xi) = 1 fixes xi = -p / r
        CHECK((xi + p / p(0)).norm() <= 1e-12);
    }
}

TEST_CASE("GRW transnormal graph has xi along d_t + grad f / rho^2") {
    GRWSpec g;
    g.t_min = -3;
    g.t_max = 3;
    g.warp = "cosh(t)";
    g.fiber.coordinates = {"x", "y"};
    g.fiber.components = {{"g00", "1"}, {"g11", "1"}};
    auto M = std::make_shared<AmbientManifold>(assemble_grw(g));
    ImmersionSpec s;
    s.parameters = {"x", "y"};
    // f' = cosh(f) makes |grad f|^2 = rho(f)^2, so t = f(x) is null
    s.components = {"log(tan(x/2 + pi/4))", "x", "y"};
    s.domain = {{-1, 1}, {-1, 1}};
    const NullImmersion imm(M, s);
    for (double x : {-0.7, 0.0, 0.4}) {
        const Vec u = vec({x, 0.2});
        const double t = std::log(std::tan(x / 2 + M_PI / 4));
        const double rho = std::cosh(t);
        const double fx = std::cosh(t);
        Vec expect = vec({1.0, fx / (rho * rho), 0.0});
        const Vec xi = radical_direction(imm, u);
        const Mat gm = M->metric(imm.point(u));
        CHECK(std::abs(expect.dot(gm * expect)) <= 1e-12);
        expect *= xi(0) / expect(0);
        CHECK((xi - expect).norm() <= 1e-10);
    }
}

TEST_CASE("rigging frames") {
    SUBCASE("light cone with zeta = e0") {
        const auto imm = fixtures::light_cone();
        const auto e0 = fixtures::field({"1", "0", "0"}, *imm);
        for (const Vec& u : imm->grid_points()) {
            const NullFrame f = frame_from_rigging(*imm, e0, u);
            const double r = std::hypot(u(0), u(1));
            CHECK((f.nt - vec({0.5, -u(0) / (2 * r), -u(1) / (2 * r)})).norm() <= 1e-12);
            CHECK(validate_frame(*imm, f).max() <= 1e-12);
        }
    }
    SUBCASE("hyperplane with reference -e0") {
        ImmersionSpec s;
        s.parameters = {"s", "v"};
        s.components = {"s", "s", "v"};
        s.domain = {{-1, 1}, {-1, 1}};
        s.xi_reference = {"-1", "0", "0"};
        const NullImmersion imm(fixtures::minkowski(3), s);
        const NullFrame f = frame_from_rigging(imm, fixtures::field({"1", "0", "0"}, imm), vec({0.1, 0.2}));
        CHECK((f.xi - vec({1, 1, 0})).norm() <= 1e-14);
        CHECK((f.nt - vec({-0.5, 0.5, 0})).norm() <= 1e-14);
    }
    SUBCASE("tangent rigging is rejected") {
        const auto imm = fixtures::hyperplane3();
        CHECK_THROWS_AS(frame_from_rigging(*imm, fixtures::field({"0", "0", "1"}, *imm), vec({0, 0})),
                        GeometryError);
    }
    SUBCASE("null rigging from the light-cone N family") {
        const auto imm = fixtures::light_cone();
        for (double n0 : {0.5, 1.0, 2.0}) {
            const std::string a = "(1 - " + std::to_string(n0) + ")", b = "sqrt(2*" + std::to_string(n0) + " - 1)";
            const auto zeta = fixtures::field({std::to_string(n0),
                                               "-(x*" + a + " + y*" + b + ")/sqrt(x^2+y^2)",
                                               "-(y*" + a + " - x*" + b + ")/sqrt(x^2+y^2)"},
                                              *imm);
            for (const Vec& u : imm->grid_points()) {
                const NullFrame f = frame_from_rigging(*imm, zeta, u);
                CHECK((f.nt - zeta.evaluate(f.x)).norm() <= 1e-12);
                CHECK(validate_frame(*imm, f).max() <= 1e-12);
                CHECK(-f.nt(0) == doctest::Approx(-n0));
            }
        }
    }
}

TEST_CASE("closed conformal frames") {
    SUBCASE("hyperplane, Z = e0") {
        const auto imm = fixtures::hyperplane3();
        const auto Z = fixtures::field({"1", "0", "0"}, *imm);
        const NullFrame f = frame_from_cc(*imm, Z, vec({0.2, 0.4}));
        CHECK(f.theta == doctest::Approx(-0.5));
    }
    SUBCASE("light cone, Z = e0") {
        const auto imm = fixtures::light_cone();
        const auto Z = fixtures::field({"1", "0", "0"}, *imm);
        for (const Vec& u : imm->grid_points()) {
            const NullFrame f = frame_from_cc(*imm, Z, u);
            const Vec z = vec({1, 0, 0});
            CHECK(f.theta == doctest::Approx(-0.5));
            CHECK((z - (f.xi - 0.5 * f.nt)).norm() <= 1e-12);
            CHECK(f.inner(z, f.screen.col(0)) == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(validate_frame(*imm, f).max() <= 1e-12);
        }
    }
    SUBCASE("null and tangent fields are rejected") {
        const auto imm = fixtures::light_cone();
        CHECK_THROWS_AS(frame_from_cc(*imm, fixtures::field({"1", "1", "0"}, *imm), vec({1, 1})), GeometryError);
        // the position field is tangent to the cone
        CHECK_THROWS_AS(frame_from_cc(*imm, fixtures::field({"t", "x", "y"}, *imm), vec({1, 1})), GeometryError);
    }
}

TEST_CASE("explicit screens") {
    SUBCASE("hyperplane in R^4_1 with screen e_k - N_k xi") {
        ImmersionSpec s;
        s.parameters = {"s", "v", "w"};
        s.components = {"s", "s", "v", "w"};
        s.domain = {{-1, 1}, {-1, 1}, {-1, 1}};
        const NullImmersion imm(fixtures::minkowski(4), s);
        const double N2 = 0.6, N3 = 0.8;
        // xi = (-1, -1, 0, 0) under g(e0, xi) = 1
        const std::vector<VectorField> fields = {
            fixtures::field({"0.6", "0.6", "1", "0"}, imm), fixtures::field({"0.8", "0.8", "0", "1"}, imm)};
        const NullFrame f = frame_from_explicit(imm, fields, vec({0.3, 0.1, -0.4}));
        CHECK(validate_frame(imm, f).max() <= 1e-12);
        CHECK(f.nt(2) == doctest::Approx(N2));
        CHECK(f.nt(3) == doctest::Approx(N3));
    }
    SUBCASE("non-planar light cone screen") {
        const auto imm = fixtures::light_cone();
        for (double n0 : {-1.0, -2.0}) {
            const std::string k = "sqrt(-1 - 2*" + std::to_string(n0) + ")";
            const auto s = fixtures::field({"1", "(x*" + k + " - y)/(" + k + "*sqrt(x^2+y^2))",
                                            "(x + y*" + k + ")/(" + k + "*sqrt(x^2+y^2))"},
                                           *imm);
            for (const Vec& u : imm->grid_points()) {
                const NullFrame f = frame_from_explicit(*imm, {s}, u);
                CHECK(validate_frame(*imm, f).max() <= 1e-12);
                // N = e0 - (1 + N0) u + k w solves g(N, xi) = 1, g(N, s) = 0, g(N, N) = 0
                CHECK(f.nt(0) == doctest::Approx(-n0));
            }
        }
    }
    SUBCASE("screen containing xi is rejected") {
        const auto imm = fixtures::light_cone();
        const auto s = fixtures::field({"-1", "-x/sqrt(x^2+y^2)", "-y/sqrt(x^2+y^2)"}, *imm);
        CHECK_THROWS_AS(frame_from_explicit(*imm, {s}, vec({1, 0.5})), GeometryError);
    }
    SUBCASE("non-tangent field is rejected") {
        const auto imm = fixtures::light_cone();
        CHECK_THROWS_AS(frame_from_explicit(*imm, {fixtures::field({"0", "1", "0"}, *imm)}, vec({1, 0.5})),
                        GeometryError);
    }
}

TEST_CASE("validate_frame detects faults") {
    const auto imm = fixtures::light_cone();
    const auto e0 = fixtures::field({"1", "0", "0"}, *imm);
    SUBCASE("perturbed transversal") {
        NullFrame f = frame_from_rigging(*imm, e0, vec({1.0, 0.5}));
        f.nt += 1e-3 * f.screen.col(0);
        const FrameResiduals r = validate_frame(*imm, f);
        CHECK(r.nt_screen == doctest::Approx(1e-3).epsilon(1e-9));
        CHECK(r.pairing <= 1e-12);
    }
    SUBCASE("printed light-cone xi is not tangent") {
        for (const Vec& u : imm->grid_points()) {
            NullFrame f = frame_from_rigging(*imm, e0, u);
            const double r = std::hypot(u(0), u(1));
            f.xi = vec({-1, u(0) / r, u(1) / r});
            // defining function F = t^2 - x^2 - y^2, dF(xi) = 2t xi_t - 2x xi_x - 2y xi_y
            const double dF = 2 * r * f.xi(0) - 2 * u(0) * f.xi(1) - 2 * u(1) * f.xi(2);
            CHECK(std::abs(dF) == doctest::Approx(4 * r));
            CHECK(validate_frame(*imm, f).tangency == doctest::Approx(std::abs(dF) / (2 * r)));
            CHECK(std::abs(f.inner(f.xi, f.xi)) <= 1e-12);
        }
    }
}

TEST_CASE("gauge rescaling") {
    const auto imm = fixtures::light_cone();
    const auto e0 = fixtures::field({"1", "0", "0"}, *imm);
    const NullFrameField field(imm, RiggingRecipe{e0});
    const Vec u = vec({0.7, 1.3});
    const NullFrame base = field.at(u);

    const NullFrame same = gauge_rescale(base, 1.0);
    CHECK(same.xi == base.xi);
    CHECK(same.nt == base.nt);

    const NullFrame twice = gauge_rescale(base, 2.0);
    CHECK(twice.inner(twice.xi, twice.nt) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(twice.screen == base.screen);
    CHECK_THROWS_AS(gauge_rescale(base, 0.0), GeometryError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = coef(rng), b = coef(rng);
        const auto f = parse_expression(std::to_string(1 + a) + " + sin(" + std::to_string(b) + "*a1*a2)", {"a1", "a2"});
        const NullFrameField gauged = field.with_gauge(parameter_gauge(f));
        for (const Vec& p : imm->grid_points()) CHECK(validate_frame(*imm, gauged.at(p)).max() <= 1e-11);
    }

    // unit angle with V: the factor must be |V| / g(V, xi)
    const Vec V = vec({1.0, 0.5, 0.0});
    for (const Vec& p : imm->grid_points()) {
        const NullFrame f = field.at(p);
        const double norm = std::sqrt(std::abs(f.inner(V, V)));
        const double g = f.inner(V, f.xi);
        CHECK(angle(gauge_rescale(f, norm / g), V, gauge_rescale(f, norm / g).xi) == doctest::Approx(1.0));
        CHECK(angle(gauge_rescale(f, g / norm), V, gauge_rescale(f, g / norm).xi) ==
              doctest::Approx(g * g / (norm * norm)));
    }
}

TEST_CASE("screen hint is reproducible") {
    const auto imm = fixtures::light_cone();
    const NullFrameField field(imm, RiggingRecipe{fixtures::field({"1", "0", "0"}, *imm)});
    ScreenHint h;
    const NullFrame a = field.at(vec({1.0, 0.4}), h);
    REQUIRE(h.order.size() == 1);
    const NullFrame b = field.at(vec({1.0, 0.4}), h);
    CHECK(a.screen == b.screen);
    const NullFrame c = field.at(vec({1.0 + 1e-4, 0.4}), h);
    CHECK((c.screen - a.screen).norm() < 1e-3);
}
