#pragma once

#include "nullgeo/immersion.hpp"

#include <functional>
#include <optional>

namespace nullgeo {

/// Null frame {xi, N, e_1..e_n} at one parameter point.
struct NullFrame {
    Vec u;
    Vec x;
    Mat J;
    Mat g;         // ambient metric at x
    Vec xi;
    Vec nt;
    Mat screen;    // columns e_1..e_n
    double theta = 0.0;  // 1/2 g(Z, Z) for closed conformal frames

    double inner(const Vec& a, const Vec& b) const { return a.dot(g * b); }
    int screen_dim() const { return static_cast<int>(screen.cols()); }

    /// Screen part P(Y) = Y - g(Y, N) xi - g(Y, xi) N.
    Vec screen_part(const Vec& Y) const;
    /// Components g(Y, e_i).
    Vec screen_coords(const Vec& Y) const;
};

/// Choices that must stay fixed when a frame is rebuilt at nearby points.
struct ScreenHint {
    std::vector<int> order;   // coordinate axes used for constructed screens
    int transversal = -1;     // axis used to seed N for explicit screens
};

struct RiggingRecipe {
    VectorField zeta;
};

struct ClosedConformalRecipe {
    VectorField Z;
};

struct ExplicitRecipe {
    std::vector<VectorField> fields;
};

using ScreenRecipe = std::variant<RiggingRecipe, ClosedConformalRecipe, ExplicitRecipe>;

/// Nowhere-zero scale factor of the gauge xi -> f xi, N -> N / f.
using GaugeFunction = std::function<double(const Vec& u, const NullFrame& base)>;

NullFrame frame_from_rigging(const NullImmersion& imm, const VectorField& zeta, const Vec& u,
                             ScreenHint* hint = nullptr);
NullFrame frame_from_cc(const NullImmersion& imm, const VectorField& Z, const Vec& u,
                        ScreenHint* hint = nullptr);
NullFrame frame_from_explicit(const NullImmersion& imm, const std::vector<VectorField>& fields,
                              const Vec& u, ScreenHint* hint = nullptr);

/// If hint is non-null and empty it is filled; if filled it is obeyed.
NullFrame build_frame(const NullImmersion& imm, const ScreenRecipe& recipe, const Vec& u,
                      ScreenHint* hint = nullptr);

NullFrame gauge_rescale(const NullFrame& frame, double f);

/// A frame recipe over a whole immersion, optionally followed by a gauge.
class NullFrameField {
public:
    NullFrameField(std::shared_ptr<const NullImmersion> imm, ScreenRecipe recipe);

    const NullImmersion& immersion() const { return *imm_; }
    std::shared_ptr<const NullImmersion> immersion_ptr() const { return imm_; }
    const ScreenRecipe& recipe() const { return recipe_; }
    bool gauged() const { return static_cast<bool>(gauge_); }

    NullFrame at(const Vec& u) const;
    NullFrame at(const Vec& u, ScreenHint& hint) const;

    /// Composes an additional gauge on top of any existing one.
    NullFrameField with_gauge(GaugeFunction f) const;

private:
    std::shared_ptr<const NullImmersion> imm_;
    ScreenRecipe recipe_;
    GaugeFunction gauge_;
};

/// Gauge given by a closed-form expression over the immersion parameters.
GaugeFunction parameter_gauge(const ExpressionField& f);

struct FrameResiduals {
    double xi_null = 0.0;
    double nt_null = 0.0;
    double pairing = 0.0;
    double nt_screen = 0.0;
    double xi_screen = 0.0;
    double screen_orthonormal = 0.0;
    double tangency = 0.0;

    double max() const;
    std::vector<std::pair<std::string, double>> named() const;
};

/// Tangency is measured as max |g(v, xi_rad)| over v in {xi, e_i}, with xi_rad the
/// immersion's normalized radical direction (T_pM is its orthogonal complement).
FrameResiduals validate_frame(const NullImmersion& imm, const NullFrame& frame);

}  // namespace nullgeo
