#pragma once

#include "nullgeo/frame.hpp"

#include <array>
#include <optional>

namespace nullgeo {

/// Decomposition Z = Z* + g(Z,N) xi + g(Z,xi) N at one point.
struct SplitField {
    Vec Zstar;            // screen components g(Z, e_i)
    Vec Zstar_ambient;    // Z* as an ambient vector
    double Z_xi_coef = 0.0;  // g(Z, N)
    double Z_N_coef = 0.0;   // g(Z, xi)
    int eps_Z = 0;           // sign of g(Z, Z); 0 when Z is null
    double normZ = 0.0;      // sqrt |g(Z, Z)|
    double reassembly = 0.0;
    double prods = 0.0;      // |g(Z,Z) - g(Z*,Z*) - 2 g(Z,xi) g(Z,N)|
};

SplitField split_field(const NullFrame& frame, const Vec& Z, double null_floor = 1e-12);

/// Frame at u together with the samples needed to differentiate it.
///
/// Parameter derivatives use Richardson-extrapolated central differences
/// (one-sided near the domain boundary); all stencil frames share the screen
/// hint of the base frame so the basis stays continuous.
class FrameJet {
public:
    FrameJet(const NullFrameField& field, const Vec& u, double step = 1e-4);

    const NullFrame& frame() const { return points_.front().frame; }
    const NullImmersion& immersion() const { return field_.immersion(); }
    const Christoffel& christoffel() const { return gamma(0); }
    double step() const { return step_; }

    /// Parameter coordinates a with J a = X (least squares).
    Vec param_coords(const Vec& X) const;

    /// Directional derivative along the parameter vector a of a quantity
    /// evaluated on stencil frames.
    template <class F>
    auto derivative(F&& q, const Vec& a) const -> decltype(q(std::declval<const NullFrame&>()));

    /// Ambient covariant derivative along tangent X of a field given on frames.
    template <class F>
    Vec covariant(F&& V, const Vec& X) const;

    Vec dbar_xi(const Vec& X) const;
    Vec dbar_nt(const Vec& X) const;
    Vec dbar_screen(int i, const Vec& X) const;

    /// Exact B(a, b) on parameter vectors at the base point, from the
    /// immersion Hessian: g(d^2x(a,b) + Gamma(Ja, Jb), xi).
    double B_param(const Vec& a, const Vec& b) const { return B_param_at(0, a, b); }

    /// B(a, b) as a function on stencil frames, for derivatives of B.
    double B_param_on(const NullFrame& f, const Vec& a, const Vec& b) const;

private:
    struct Sample {
        NullFrame frame;
        mutable std::optional<Embedding> emb2;
        mutable std::optional<Christoffel> gamma;
    };
    struct Axis {
        std::vector<std::size_t> samples;  // indices into points_
        std::vector<double> weights;       // in units of 1/step
    };

    const Christoffel& gamma(std::size_t i) const;
    const Embedding& emb2(std::size_t i) const;
    double B_param_at(std::size_t i, const Vec& a, const Vec& b) const;
    std::size_t index_of(const NullFrame& f) const;

    NullFrameField field_;
    double step_;
    std::vector<Sample> points_;
    std::vector<Axis> axes_;
};

template <class F>
auto FrameJet::derivative(F&& q, const Vec& a) const -> decltype(q(std::declval<const NullFrame&>())) {
    using R = decltype(q(std::declval<const NullFrame&>()));
    R out = q(points_.front().frame) * 0.0;
    for (std::size_t b = 0; b < axes_.size(); ++b) {
        const double ab = a(static_cast<Eigen::Index>(b));
        if (ab == 0.0) continue;
        const Axis& ax = axes_[b];
        for (std::size_t k = 0; k < ax.samples.size(); ++k)
            out = out + (ab * ax.weights[k] / step_) * q(points_[ax.samples[k]].frame);
    }
    return out;
}

template <class F>
Vec FrameJet::covariant(F&& V, const Vec& X) const {
    const Vec a = param_coords(X);
    return derivative(V, a) + christoffel().contract(X, V(frame()));
}

/// Second-order invariants on the screen basis e_1..e_n (plus xi where noted).
struct ShapeSample {
    Vec point;
    Mat B;        // (n+1)x(n+1) on (e_1..e_n, xi)
    Mat C;        // C(i, j) = C(e_i, e_j)
    Vec tau;      // tau(e_1)..tau(e_n), tau(xi)
    Mat A_N;      // A_N(i, j) = g(e_i, A_N e_j)
    Mat A_star;   // A_star(i, j) = g(e_i, A*_xi e_j)
    double H = 0.0;

    // Diagnostics (all should vanish).
    double B_symmetry = 0.0;
    double B_xi_row = 0.0;
    double duality_B = 0.0;   // max |B(e_i,e_j) - g(e_j, A* e_i)|
    double duality_C = 0.0;   // max |C(e_i,e_j) - g(e_j, A_N e_i)|
    double A_N_screen = 0.0;  // max |g(A_N e_i, N)|
    double A_star_symmetry = 0.0;
    double A_star_xi = 0.0;   // |A*_xi xi|
    double C_symmetry = 0.0;  // integrability residual max |C(e_i,e_j) - C(e_j,e_i)|
    double umbilicity = 0.0;  // max |A* - (H/n) Id|
};

ShapeSample shape_operators(const FrameJet& jet);

/// B(X, Y) for tangent ambient vectors.
double second_fund_B(const FrameJet& jet, const Vec& X, const Vec& Y);
/// C(X, PY) = g(nabla_X PY, N), tensorial in Y.
double screen_fund_C(const FrameJet& jet, const Vec& X, const Vec& Y);
/// tau(X) = g(nabla_X N, xi).
double tau_form(const FrameJet& jet, const Vec& X);

/// A_N X as an ambient vector: tau(X) N - nabla_X N with the N part removed.
Vec shape_A_N(const FrameJet& jet, const Vec& X);
/// A*_xi X = -P(nabla_X xi).
Vec shape_A_star(const FrameJet& jet, const Vec& X);

/// g(Z,N) A*_xi X + g(Z,xi) A_N X.
Vec shape_AZperp(const FrameJet& jet, const SplitField& split, const Vec& X);

struct ComponentResiduals {
    double phi = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double max() const { return std::max({a, b, c}); }
};

/// Residuals of the component equations along each screen basis vector,
/// with phi taken from the ambient closed conformal factor of Z.
ComponentResiduals components_residual(const FrameJet& jet, const VectorField& Z);

/// Codazzi residual for the parameter coordinate fields a_X, a_Y, a_W.
double codazzi_residual(const FrameJet& jet, const Vec& aX, const Vec& aY, const Vec& aW);
/// Largest Codazzi residual over all triples of parameter axes.
double codazzi_residual(const FrameJet& jet);

/// |(nabla_X g)(Y,W) - B(X,Y) g(N,W) - B(X,W) g(Y,N)| for coordinate fields.
double nonmetric_residual(const FrameJet& jet, const Vec& aX, const Vec& aY, const Vec& aW);
double nonmetric_residual(const FrameJet& jet);

/// Screen vector X*Z-perp residual: X.(g(Z,xi) g(Z,N)) + g(X, A_{Z-perp} Z*)
/// for each screen basis X; returns the largest magnitude.
double zperp_residual(const FrameJet& jet, const VectorField& Z);

}  // namespace nullgeo
