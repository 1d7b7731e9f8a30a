#include "nullgeo/shape.hpp"

#include <cmath>

namespace nullgeo {

SplitField split_field(const NullFrame& f, const Vec& Z, double null_floor) {
    SplitField s;
    s.Z_xi_coef = f.inner(Z, f.nt);
    s.Z_N_coef = f.inner(Z, f.xi);
    s.Zstar_ambient = f.screen_part(Z);
    s.Zstar = f.screen_coords(Z);
    const double zz = f.inner(Z, Z);
    s.eps_Z = std::abs(zz) <= null_floor ? 0 : (zz > 0 ? 1 : -1);
    s.normZ = std::sqrt(std::abs(zz));
    const Vec re = f.screen * s.Zstar + s.Z_xi_coef * f.xi + s.Z_N_coef * f.nt;
    s.reassembly = (re - Z).norm();
    s.prods = std::abs(zz - s.Zstar.squaredNorm() - 2.0 * s.Z_N_coef * s.Z_xi_coef);
    return s;
}

FrameJet::FrameJet(const NullFrameField& field, const Vec& u, double step) : field_(field), step_(step) {
    ScreenHint hint;
    points_.push_back({field.at(u, hint), {}, {}});
    const auto& dom = field.immersion().spec().domain;
    const int p = field.immersion().param_dim();
    const double h = step;
    for (int b = 0; b < p; ++b) {
        const auto [lo, hi] = dom[static_cast<std::size_t>(b)];
        const double ub = u(b);
        std::vector<double> offsets, weights;
        if (ub - h >= lo && ub + h <= hi) {
            offsets = {-h, -h / 2, h / 2, h};
            weights = {1.0 / 6.0, -4.0 / 3.0, 4.0 / 3.0, -1.0 / 6.0};
        } else if (ub + 2 * h <= hi) {
            offsets = {0.0, h / 2, h, 2 * h};
            weights = {-3.5, 16.0 / 3.0, -2.0, 1.0 / 6.0};
        } else if (ub - 2 * h >= lo) {
            offsets = {0.0, -h / 2, -h, -2 * h};
            weights = {3.5, -16.0 / 3.0, 2.0, -1.0 / 6.0};
        } else {
            throw GeometryError("finite-difference stencil leaves the parameter domain");
        }
        Axis ax;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            if (offsets[k] == 0.0) {
                ax.samples.push_back(0);
            } else {
                Vec v = u;
                v(b) += offsets[k];
                points_.push_back({field.at(v, hint), {}, {}});
                ax.samples.push_back(points_.size() - 1);
            }
            ax.weights.push_back(weights[k]);
        }
        axes_.push_back(std::move(ax));
    }
}

Vec FrameJet::param_coords(const Vec& X) const { return frame().J.colPivHouseholderQr().solve(X); }

const Christoffel& FrameJet::gamma(std::size_t i) const {
    const Sample& s = points_[i];
    if (!s.gamma) s.gamma = immersion().ambient().christoffel(s.frame.x);
    return *s.gamma;
}

const Embedding& FrameJet::emb2(std::size_t i) const {
    const Sample& s = points_[i];
    if (!s.emb2) s.emb2 = immersion().embed(s.frame.u, true);
    return *s.emb2;
}

double FrameJet::B_param_at(std::size_t i, const Vec& a, const Vec& b) const {
    const NullFrame& f = points_[i].frame;
    const Embedding& e = emb2(i);
    const Vec v = e.second(a, b) + gamma(i).contract(f.J * a, f.J * b);
    return f.inner(v, f.xi);
}

std::size_t FrameJet::index_of(const NullFrame& f) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (&points_[i].frame == &f) return i;
    throw Error("frame is not a stencil sample of this jet");
}

double FrameJet::B_param_on(const NullFrame& f, const Vec& a, const Vec& b) const {
    return B_param_at(index_of(f), a, b);
}

Vec FrameJet::dbar_xi(const Vec& X) const {
    return covariant([](const NullFrame& f) -> Vec { return f.xi; }, X);
}

Vec FrameJet::dbar_nt(const Vec& X) const {
    return covariant([](const NullFrame& f) -> Vec { return f.nt; }, X);
}

Vec FrameJet::dbar_screen(int i, const Vec& X) const {
    return covariant([i](const NullFrame& f) -> Vec { return f.screen.col(i); }, X);
}

double second_fund_B(const FrameJet& jet, const Vec& X, const Vec& Y) {
    return jet.B_param(jet.param_coords(X), jet.param_coords(Y));
}

double screen_fund_C(const FrameJet& jet, const Vec& X, const Vec& Y) {
    const NullFrame& f = jet.frame();
    const Vec c = f.screen_coords(Y);
    double out = 0.0;
    for (int j = 0; j < f.screen_dim(); ++j) out += c(j) * f.inner(jet.dbar_screen(j, X), f.nt);
    return out;
}

double tau_form(const FrameJet& jet, const Vec& X) {
    const NullFrame& f = jet.frame();
    return f.inner(jet.dbar_nt(X), f.xi);
}

Vec shape_A_N(const FrameJet& jet, const Vec& X) {
    const NullFrame& f = jet.frame();
    const Vec d = jet.dbar_nt(X);
    const Vec v = f.inner(d, f.xi) * f.nt - d;
    return v - f.inner(v, f.xi) * f.nt;
}

Vec shape_A_star(const FrameJet& jet, const Vec& X) { return -jet.frame().screen_part(jet.dbar_xi(X)); }

Vec shape_AZperp(const FrameJet& jet, const SplitField& s, const Vec& X) {
    return s.Z_xi_coef * shape_A_star(jet, X) + s.Z_N_coef * shape_A_N(jet, X);
}

ShapeSample shape_operators(const FrameJet& jet) {
    const NullFrame& f = jet.frame();
    const int n = f.screen_dim();
    ShapeSample s;
    s.point = f.u;

    std::vector<Vec> basis, coords;
    for (int i = 0; i < n; ++i) basis.push_back(f.screen.col(i));
    basis.push_back(f.xi);
    for (const Vec& v : basis) coords.push_back(jet.param_coords(v));

    s.B.resize(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) s.B(i, j) = jet.B_param(coords[static_cast<std::size_t>(i)], coords[static_cast<std::size_t>(j)]);

    std::vector<Vec> dN, dxi;
    for (const Vec& v : basis) {
        dN.push_back(jet.dbar_nt(v));
        dxi.push_back(jet.dbar_xi(v));
    }
    s.tau.resize(n + 1);
    for (int i = 0; i <= n; ++i) s.tau(i) = f.inner(dN[static_cast<std::size_t>(i)], f.xi);

    s.C.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.C(i, j) = f.inner(jet.dbar_screen(j, basis[static_cast<std::size_t>(i)]), f.nt);

    s.A_N.resize(n, n);
    s.A_star.resize(n, n);
    for (int j = 0; j < n; ++j) {
        const Vec an = s.tau(j) * f.nt - dN[static_cast<std::size_t>(j)];
        const Vec as = -f.screen_part(dxi[static_cast<std::size_t>(j)]);
        s.A_N_screen = std::max(s.A_N_screen, std::abs(f.inner(an, f.nt)));
        for (int i = 0; i < n; ++i) {
            s.A_N(i, j) = f.inner(f.screen.col(i), an);
            s.A_star(i, j) = f.inner(f.screen.col(i), as);
        }
    }
    s.H = s.A_star.trace();
    s.A_star_xi = f.screen_part(dxi[static_cast<std::size_t>(n)]).norm();

    for (int i = 0; i <= n; ++i) {
        s.B_xi_row = std::max(s.B_xi_row, std::abs(s.B(i, n)));
        for (int j = 0; j <= n; ++j) s.B_symmetry = std::max(s.B_symmetry, std::abs(s.B(i, j) - s.B(j, i)));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s.duality_B = std::max(s.duality_B, std::abs(s.B(i, j) - s.A_star(j, i)));
            s.duality_C = std::max(s.duality_C, std::abs(s.C(i, j) - s.A_N(j, i)));
            s.A_star_symmetry = std::max(s.A_star_symmetry, std::abs(s.A_star(i, j) - s.A_star(j, i)));
            s.C_symmetry = std::max(s.C_symmetry, std::abs(s.C(i, j) - s.C(j, i)));
            s.umbilicity =
                std::max(s.umbilicity, std::abs(s.A_star(i, j) - (i == j ? s.H / n : 0.0)));
        }
    return s;
}

ComponentResiduals components_residual(const FrameJet& jet, const VectorField& Z) {
    const NullFrame& f = jet.frame();
    const AmbientManifold& M = jet.immersion().ambient();
    ComponentResiduals r;
    double cc_residual = 0.0;
    closed_conformal_factor(M, Z, f.x, 1e-9, r.phi, cc_residual);

    const auto zstar = [&Z](const NullFrame& g) -> Vec { return g.screen_part(Z.evaluate(g.x)); };
    const auto z_xi = [&Z](const NullFrame& g) { return g.inner(Z.evaluate(g.x), g.nt); };
    const auto z_n = [&Z](const NullFrame& g) { return g.inner(Z.evaluate(g.x), g.xi); };
    const SplitField s = split_field(f, Z.evaluate(f.x));

    for (int i = 0; i < f.screen_dim(); ++i) {
        const Vec X = f.screen.col(i);
        const Vec a = jet.param_coords(X);
        const Vec dZ = jet.covariant(zstar, X);
        const double tau = tau_form(jet, X);

        const Vec ra = r.phi * X - f.screen_part(dZ) + shape_AZperp(jet, s, X);
        r.a = std::max(r.a, ra.norm());
        const double C = f.inner(dZ, f.nt);
        r.b = std::max(r.b, std::abs(C + jet.derivative(z_xi, a) - s.Z_xi_coef * tau));
        const double B = second_fund_B(jet, X, s.Zstar_ambient);
        r.c = std::max(r.c, std::abs(B + jet.derivative(z_n, a) + s.Z_N_coef * tau));
    }
    return r;
}

namespace {

/// Induced connection nabla_X Y for coordinate fields, in parameter coordinates.
Vec induced_connection(const FrameJet& jet, const Embedding& e2, const Vec& aX, const Vec& aY) {
    const NullFrame& f = jet.frame();
    const Vec X = f.J * aX, Y = f.J * aY;
    const Vec bar = e2.second(aX, aY) + jet.christoffel().contract(X, Y);
    return jet.param_coords(bar - f.inner(bar, f.xi) * f.nt);
}

std::vector<Vec> axes(int p) {
    std::vector<Vec> out;
    for (int i = 0; i < p; ++i) out.push_back(Vec::Unit(p, i));
    return out;
}

}  // namespace

double codazzi_residual(const FrameJet& jet, const Vec& aX, const Vec& aY, const Vec& aW) {
    const NullFrame& f = jet.frame();
    const Embedding e2 = jet.immersion().embed(f.u, true);
    const Vec X = f.J * aX, Y = f.J * aY, W = f.J * aW;
    const double lhs = f.inner(jet.immersion().ambient().riemann(f.x, X, Y, W), f.xi);

    const auto dB = [&](const Vec& a, const Vec& b, const Vec& c) {
        const double xb = jet.derivative([&](const NullFrame& g) { return jet.B_param_on(g, b, c); }, a);
        return xb - jet.B_param(induced_connection(jet, e2, a, b), c) -
               jet.B_param(b, induced_connection(jet, e2, a, c));
    };
    const double tX = tau_form(jet, X), tY = tau_form(jet, Y);
    const double rhs = dB(aX, aY, aW) - dB(aY, aX, aW) + tX * jet.B_param(aY, aW) - tY * jet.B_param(aX, aW);
    return std::abs(lhs - rhs);
}

double codazzi_residual(const FrameJet& jet) {
    const auto ax = axes(jet.immersion().param_dim());
    double r = 0.0;
    for (const Vec& a : ax)
        for (const Vec& b : ax)
            for (const Vec& c : ax) r = std::max(r, codazzi_residual(jet, a, b, c));
    return r;
}

double nonmetric_residual(const FrameJet& jet, const Vec& aX, const Vec& aY, const Vec& aW) {
    const NullFrame& f = jet.frame();
    const Embedding e2 = jet.immersion().embed(f.u, true);
    const auto gram = [&](const NullFrame& g) { return g.inner(g.J * aY, g.J * aW); };
    const Vec Y = f.J * aY, W = f.J * aW;
    const double lhs = jet.derivative(gram, aX) - f.inner(f.J * induced_connection(jet, e2, aX, aY), W) -
                       f.inner(Y, f.J * induced_connection(jet, e2, aX, aW));
    const double rhs = jet.B_param(aX, aY) * f.inner(f.nt, W) + jet.B_param(aX, aW) * f.inner(Y, f.nt);
    return std::abs(lhs - rhs);
}

double nonmetric_residual(const FrameJet& jet) {
    const auto ax = axes(jet.immersion().param_dim());
    double r = 0.0;
    for (const Vec& a : ax)
        for (const Vec& b : ax)
            for (const Vec& c : ax) r = std::max(r, nonmetric_residual(jet, a, b, c));
    return r;
}

double zperp_residual(const FrameJet& jet, const VectorField& Z) {
    const NullFrame& f = jet.frame();
    const SplitField s = split_field(f, Z.evaluate(f.x));
    const auto prod = [&Z](const NullFrame& g) {
        const Vec z = Z.evaluate(g.x);
        return g.inner(z, g.xi) * g.inner(z, g.nt);
    };
    const Vec AZ = shape_AZperp(jet, s, s.Zstar_ambient);
    double r = 0.0;
    for (int i = 0; i < f.screen_dim(); ++i) {
        const Vec X = f.screen.col(i);
        r = std::max(r, std::abs(jet.derivative(prod, jet.param_coords(X)) + f.inner(X, AZ)));
    }
    return r;
}

}  // namespace nullgeo
