#pragma once

#include "nullgeo/shape.hpp"

#include <cstdint>
#include <optional>

namespace nullgeo {

enum class Verdict { pass, fail, inapplicable };

const char* verdict_name(Verdict v);

struct Excluded {
    Vec u;
    std::string reason;
};

/// Outcome of a grid check: a verdict, named per-sample series aligned with
/// `points`, and samples that were skipped with the reason.
struct Report {
    std::string check;
    Verdict verdict = Verdict::inapplicable;
    std::string note;
    std::vector<Vec> points;
    std::vector<std::pair<std::string, std::vector<double>>> series;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<Excluded> excluded;

    std::vector<double>& add_series(const std::string& name);
    const std::vector<double>& at(const std::string& name) const;
    void set_scalar(const std::string& name, double v);
    double scalar(const std::string& name) const;
    /// Largest |value|; NaN entries mark undefined samples and are skipped.
    double max_of(const std::string& name) const;
};

/// Product of angles and screen ratio per sample, plus the three
/// gauge-free constancy criteria.
struct AngleReport : Report {
    double q_mean = 0.0;
    double q_spread = 0.0;
    double ratio_spread = 0.0;
    double normalized_spread = 0.0;  // spread of the angles after the normalizing gauge
    bool frame_criterion = false;
    bool product_criterion = false;
    bool ratio_criterion = false;
    bool criteria_agree = false;
    double identity_max = 0.0;  // max |eps_V - 2q - screen_ratio|
};

AngleReport constant_angle_test(const NullFrameField& field, const VectorField& V, const std::vector<Vec>& points,
                                const Tolerances& tol);

/// q under `gauges` random positive gauges f = a + b sin(c.u + d); also checks
/// the unit-angle gauge f = |V| / g(V, xi).
Report gauge_invariance_check(const NullFrameField& field, const VectorField& V, const std::vector<Vec>& points,
                              int gauges, std::uint64_t seed, const Tolerances& tol);

enum class QCClass { quasi_conformal, conformal, neither };
const char* qc_class_name(QCClass c);

/// Least-squares A_N = phi A*_xi + psi P on the screen basis.
struct QCFit {
    double phi = 0.0;
    double psi = 0.0;
    double residual = 0.0;   // operator norm of A_N - phi A* - psi Id
    double condition = 0.0;  // of the normal equations
    bool non_unique = false;
    QCClass classification = QCClass::neither;
};

QCFit quasi_conformal_fit(const ShapeSample& shape, double tol);

/// Grid version; series phi, psi, residual.
Report quasi_conformal_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol);

/// Operator norm of (1/sqrt 2)(A_N - A*) - log_warp_derivative * Id.
double sqc_grw_residual(const ShapeSample& shape, double log_warp_derivative);

/// Transnormal graphs in -dt^2 + warp(t)^2 g_F with xi = (d_t + G)/sqrt 2:
/// fitted pair against (1, sqrt 2 warp'/warp) and the residual of
/// (1/sqrt 2)(A_N - A*) = (warp'/warp) Id. Relative errors use a unit floor.
/// `time_index` is the ambient index of t.
Report grw_pair_check(const NullFrameField& field, const std::vector<Vec>& points, const std::string& warp,
                      const std::string& time, int time_index, const Tolerances& tol);

/// Closed conformal screen theorem: frames from Z, quasi-conformal residual,
/// tau on the screen, theta constant along the screen, and the explicit
/// pair (-1/theta, -phi/theta).
Report cc_screen_theorem_check(std::shared_ptr<const NullImmersion> imm, const VectorField& Z,
                               const std::vector<Vec>& points, const Tolerances& tol);

/// Z* = 0 proposition as printed: pair (-g(Z,N)/g(Z,xi), phi/g(Z,xi)) fits
/// A_N. The residual for psi = -phi/g(Z,xi) is reported as derived_residual.
Report zstar_zero_qc_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                           const Tolerances& tol);

/// Canonical principal direction of Z* under A_{Z-perp}.
///
/// lambda is compared with both the printed prediction 2 eps q phi and the
/// prediction -2 eps q phi that follows from the component lemmas.
struct PrincipalReport : Report {
    bool constant_angle = false;
    double eigen_max = 0.0;
    double printed_max = 0.0;
    double derived_max = 0.0;
    double criterion4_max = 0.0;
    bool criterion4_vacuous = false;
};

PrincipalReport cpd_test(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                         const Tolerances& tol);

/// Principal value as printed: eigen-residual and |lambda - 2 eps q phi|.
/// Inapplicable unless the angle with Z is constant and Z is closed
/// conformal; the sign that follows from the component lemmas is reported
/// as the scalar derived_prediction_max.
Report principal_value_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                             const Tolerances& tol);

/// ||nabla*_T T|| and |lambda - (g(nabla*_T Z*, T) - phi)|; inapplicable
/// unless cpd_test passes.
Report geodesic_direction_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                                const Tolerances& tol);

/// Four screen-connection residuals for T and its unit complement W (n = 2).
Report flat_screen_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                         const Tolerances& tol);

/// CMC theorem: W.k* and the two conditions for f = 1/sqrt|2 k*| (and for
/// sqrt 2 f). Needs dim M = 3, H = 0, a spaceform ambient and T principal for A*.
Report cmc_cc_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                    std::optional<double> spaceform_c, std::uint64_t seed, const Tolerances& tol);

/// ||nabla*|Z| - (eps phi / |Z|) Z*||.
Report screen_gradient_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                             const Tolerances& tol);

enum class UmbilicClass { totally_geodesic, totally_umbilical, screen_umbilical, screen_geodesic, none };
const char* umbilic_name(UmbilicClass c);

struct UmbilicReport : Report {
    UmbilicClass classification = UmbilicClass::none;
    bool totally_geodesic = false;
    bool totally_umbilical = false;
    bool screen_geodesic = false;
    bool screen_umbilical = false;
};

UmbilicReport umbilic_classifier(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol);

/// Grid wrappers of the shape-level residuals.
Report frame_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol);
Report shape_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol);
Report components_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                        const Tolerances& tol);
Report codazzi_check(const NullFrameField& field, const std::vector<Vec>& points, double tol);
Report nonmetric_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol);
Report zperp_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                   const Tolerances& tol);
/// Draws exactly `total_triples` seeded triples: an even subsample of the
/// points when they outnumber the triples, otherwise spread over every point.
Report spaceform_check(const AmbientManifold& M, double c, const std::vector<Vec>& ambient_points, std::uint64_t seed,
                       int total_triples, double tol);
Report cc_field_check(const AmbientManifold& M, const VectorField& Z, const std::vector<Vec>& ambient_points,
                      const Tolerances& tol);

}  // namespace nullgeo
