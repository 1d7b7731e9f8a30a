#include <doctest.h>

#include "fixtures.hpp"
#include "nullgeo/shape.hpp"

#include <cmath>
#include <random>

using namespace nullgeo;
using fixtures::vec;

namespace {

constexpr double kFd = 1e-5;

NullFrameField rigged(const std::shared_ptr<NullImmersion>& imm, std::vector<std::string> zeta) {
    return NullFrameField(imm, RiggingRecipe{fixtures::field(zeta, *imm)});
}

/// de Sitter 3-space as -dt^2 + cosh(t)^2 (dth^2 + sin(th)^2 dph^2) with the
/// null graph t = log(tan(th/2)).
std::shared_ptr<NullImmersion> de_sitter_graph() {
    GRWSpec g;
    g.t_min = -3;
    g.t_max = 3;
    g.warp = "cosh(t)";
    g.fiber.coordinates = {"th", "ph"};
    g.fiber.components = {{"g00", "1"}, {"g11", "sin(th)^2"}};
    auto M = std::make_shared<AmbientManifold>(assemble_grw(g));
    ImmersionSpec s;
    s.parameters = {"th", "ph"};
    s.components = {"log(tan(th/2))", "th", "ph"};
    s.domain = {{0.8, 2.2}, {0.0, 1.0}};
    s.grid = {4, 3};
    return std::make_shared<NullImmersion>(M, s);
}

}  // namespace

TEST_CASE("split field") {
    const auto imm = fixtures::light_cone();
    const auto field = rigged(imm, {"1", "0", "0"});
    for (const Vec& u : imm->grid_points()) {
        const NullFrame f = field.at(u);
        const SplitField sx = split_field(f, f.xi);
        CHECK(sx.Zstar.norm() <= 1e-12);
        CHECK(std::abs(sx.Z_N_coef) <= 1e-12);
        CHECK(sx.Z_xi_coef == doctest::Approx(1.0));
        CHECK(sx.eps_Z == 0);
        const SplitField s0 = split_field(f, vec({1, 0, 0}));
        CHECK(s0.reassembly <= 1e-9);
        CHECK(s0.prods <= 1e-9);
        CHECK(s0.eps_Z == -1);
        CHECK(s0.normZ == doctest::Approx(1.0));
    }
    const NullFrameField cc(imm, ClosedConformalRecipe{fixtures::field({"1", "0", "0"}, *imm)});
    CHECK(split_field(cc.at(vec({1, 1})), vec({1, 0, 0})).Zstar.norm() <= 1e-12);
}

TEST_CASE("null hyperplane is totally geodesic") {
    const auto imm = fixtures::hyperplane3();
    const auto field = rigged(imm, {"1", "0", "0"});
    for (const Vec& u : imm->grid_points()) {
        const FrameJet jet(field, u);
        const ShapeSample s = shape_operators(jet);
        CHECK(s.B.norm() <= 1e-12);
        CHECK(s.C.norm() <= 1e-9);
        CHECK(s.tau.norm() <= 1e-9);
        CHECK(s.A_N.norm() <= 1e-9);
        CHECK(s.A_star.norm() <= 1e-9);
        CHECK(std::abs(s.H) <= 1e-9);
        CHECK(codazzi_residual(jet) <= 1e-9);
        CHECK(nonmetric_residual(jet) <= 1e-9);
        CHECK(components_residual(jet, fixtures::field({"1", "0", "0"}, *imm)).max() <= 1e-9);
    }
}

TEST_CASE("light cone with the e0 rigging") {
    // xi = -p/r and N = e0 + xi/2 give A* = Id/r, A_N = Id/(2r), tau = 0.
    const auto imm = fixtures::light_cone();
    const auto field = rigged(imm, {"1", "0", "0"});
    for (const Vec& u : imm->grid_points()) {
        const double r = std::hypot(u(0), u(1));
        const FrameJet jet(field, u);
        const ShapeSample s = shape_operators(jet);
        CHECK(s.B(0, 0) == doctest::Approx(1.0 / r).epsilon(1e-9));
        CHECK(s.A_star(0, 0) == doctest::Approx(1.0 / r).epsilon(kFd));
        CHECK(s.A_N(0, 0) == doctest::Approx(0.5 / r).epsilon(kFd));
        CHECK(s.C(0, 0) == doctest::Approx(0.5 / r).epsilon(kFd));
        CHECK(s.H == doctest::Approx(1.0 / r).epsilon(kFd));
        CHECK(s.tau.norm() <= kFd);
        CHECK(s.B_xi_row <= 1e-12);
        CHECK(s.duality_B <= kFd);
        CHECK(s.duality_C <= kFd);
        CHECK(s.A_N_screen <= kFd);
        CHECK(s.A_star_xi <= kFd);
        CHECK(s.umbilicity <= kFd);
        CHECK(codazzi_residual(jet) <= 1e-4);
        CHECK(nonmetric_residual(jet) <= kFd);
        // Y = W = xi: both sides vanish
        const Vec axi = jet.param_coords(jet.frame().xi);
        CHECK(nonmetric_residual(jet, vec({1, 0}), axi, axi) <= kFd);
    }
}

TEST_CASE("B vanishes on the radical direction") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1, 1);
    const auto imm = de_sitter_graph();
    const auto field = rigged(imm, {"1", "0", "0"});
    for (const Vec& u : imm->grid_points()) {
        const FrameJet jet(field, u);
        const Vec X = jet.frame().J * vec({d(rng), d(rng)});
        CHECK(std::abs(second_fund_B(jet, X, jet.frame().xi)) <= kFd);
        CHECK(std::abs(second_fund_B(jet, X, jet.frame().screen.col(0)) -
                       second_fund_B(jet, jet.frame().screen.col(0), X)) <= 1e-12);
    }
}

TEST_CASE("Codazzi on a de Sitter null graph") {
    const auto imm = de_sitter_graph();
    const auto field = rigged(imm, {"1", "0", "0"});
    for (const Vec& u : imm->grid_points()) {
        const FrameJet jet(field, u);
        CHECK(codazzi_residual(jet) <= 1e-4);
        CHECK(nonmetric_residual(jet) <= kFd);
    }
}

TEST_CASE("one-sided stencils at the boundary agree with the interior") {
    const auto imm = fixtures::light_cone(1.0, 1.5);
    const auto field = rigged(imm, {"1", "0", "0"});
    const double r = std::hypot(1.0, 1.5);
    const ShapeSample s = shape_operators(FrameJet(field, vec({1.0, 1.5})));
    CHECK(s.A_star(0, 0) == doctest::Approx(1.0 / r).epsilon(kFd));
    CHECK(s.A_N(0, 0) == doctest::Approx(0.5 / r).epsilon(kFd));
}

TEST_CASE("closed conformal frames") {
    const auto imm = fixtures::light_cone();
    const auto Z = fixtures::field({"1", "0", "0"}, *imm);
    const NullFrameField cc(imm, ClosedConformalRecipe{Z});
    for (const Vec& u : imm->grid_points()) {
        const FrameJet jet(cc, u);
        CHECK(std::abs(tau_form(jet, jet.frame().screen.col(0))) <= kFd);
        CHECK(components_residual(jet, Z).max() <= kFd);
        CHECK(zperp_residual(jet, Z) <= kFd);
    }
}

TEST_CASE("component residuals") {
    const auto imm = fixtures::light_cone();
    const auto field = rigged(imm, {"1", "0", "0"});
    const auto radial = fixtures::field({"t", "x", "y"}, *imm);
    const auto not_cc = fixtures::field({"t^2", "0", "0"}, *imm);
    for (const Vec& u : imm->grid_points()) {
        const FrameJet jet(field, u);
        const ComponentResiduals r = components_residual(jet, radial);
        CHECK(r.phi == doctest::Approx(1.0));
        CHECK(r.max() <= kFd);
        const ComponentResiduals bad = components_residual(jet, not_cc);
        CHECK(bad.a >= 0.5);
    }
}

TEST_CASE("gauge behaviour") {
    const auto imm = fixtures::light_cone();
    const auto field = rigged(imm, {"1", "0", "0"});
    const Vec u = vec({0.9, 1.4});
    const FrameJet base(field, u);
    const ShapeSample s = shape_operators(base);

    SUBCASE("constant factor") {
        const double c = 2.5;
        const FrameJet jet(field.with_gauge([c](const Vec&, const NullFrame&) { return c; }), u);
        const ShapeSample g = shape_operators(jet);
        CHECK((g.B - c * s.B).norm() <= 1e-9);
        CHECK((g.A_star - c * s.A_star).norm() <= kFd);
        CHECK((g.A_N - s.A_N / c).norm() <= kFd);
        CHECK(g.H == doctest::Approx(c * s.H).epsilon(kFd));
    }
    SUBCASE("tau shifts by minus the log-derivative") {
        const auto f = parse_expression("2 + sin(a1*a2)", {"a1", "a2"});
        const FrameJet jet(field.with_gauge(parameter_gauge(f)), u);
        for (int i = 0; i < 2; ++i) {
            const Vec X = base.frame().J.col(i);
            // X . log f for the coordinate field d/da_i
            const double fv = 2 + std::sin(u(0) * u(1));
            const double dlog = std::cos(u(0) * u(1)) * u(1 - i) / fv;
            CHECK(tau_form(jet, X) == doctest::Approx(tau_form(base, X) - dlog).epsilon(kFd));
        }
    }
}

TEST_CASE("AZperp") {
    const auto imm = fixtures::light_cone();
    const auto field = rigged(imm, {"1", "0", "0"});
    const FrameJet jet(field, vec({1.2, 0.7}));
    const NullFrame& f = jet.frame();
    const Vec X = f.screen.col(0);
    CHECK((shape_AZperp(jet, split_field(f, f.xi), X) - shape_A_star(jet, X)).norm() <= 1e-12);

    const auto plane = fixtures::hyperplane3();
    const FrameJet pj(rigged(plane, {"1", "0", "0"}), vec({0.1, 0.2}));
    CHECK(shape_AZperp(pj, split_field(pj.frame(), vec({1, 0.3, 0.2})), pj.frame().screen.col(0)).norm() <= 1e-9);
}
