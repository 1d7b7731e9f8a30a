#include "nullgeo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace nullgeo {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inapplicable: return "inapplicable";
    }
    return "?";
}

const char* qc_class_name(QCClass c) {
    switch (c) {
        case QCClass::quasi_conformal: return "quasi_conformal";
        case QCClass::conformal: return "conformal";
        case QCClass::neither: return "neither";
    }
    return "?";
}

const char* umbilic_name(UmbilicClass c) {
    switch (c) {
        case UmbilicClass::totally_geodesic: return "totally_geodesic";
        case UmbilicClass::totally_umbilical: return "totally_umbilical";
        case UmbilicClass::screen_umbilical: return "screen_umbilical";
        case UmbilicClass::screen_geodesic: return "screen_geodesic";
        case UmbilicClass::none: return "none";
    }
    return "?";
}

std::vector<double>& Report::add_series(const std::string& name) {
    for (auto& [n, v] : series)
        if (n == name) return v;
    series.emplace_back(name, std::vector<double>{});
    return series.back().second;
}

const std::vector<double>& Report::at(const std::string& name) const {
    for (const auto& [n, v] : series)
        if (n == name) return v;
    throw Error("report '" + check + "' has no series '" + name + "'");
}

void Report::set_scalar(const std::string& name, double v) {
    for (auto& [n, s] : scalars)
        if (n == name) {
            s = v;
            return;
        }
    scalars.emplace_back(name, v);
}

double Report::scalar(const std::string& name) const {
    for (const auto& [n, s] : scalars)
        if (n == name) return s;
    throw Error("report '" + check + "' has no scalar '" + name + "'");
}

double Report::max_of(const std::string& name) const {
    double m = 0.0;
    for (double v : at(name))
        if (!std::isnan(v)) m = std::max(m, std::abs(v));
    return m;
}

namespace {

/// Runs `fn` at every point; it returns one value per series name or throws
/// GeometryError to exclude the sample.
template <class Make, class F>
void sweep(Report& r, const std::vector<Vec>& points, const std::vector<std::string>& names, Make&& make, F&& fn) {
    for (const auto& n : names) r.add_series(n);
    for (const Vec& u : points) {
        std::vector<double> vals;
        try {
            auto ctx = make(u);
            vals = fn(ctx);
        } catch (const GeometryError& e) {
            r.excluded.push_back({u, e.what()});
            continue;
        }
        r.points.push_back(u);
        for (std::size_t i = 0; i < names.size(); ++i) r.add_series(names[i]).push_back(vals[i]);
    }
}

auto jets(const NullFrameField& field, const Tolerances& tol) {
    return [&field, step = tol.step](const Vec& u) { return FrameJet(field, u, step); };
}

auto frames(const NullFrameField& field) {
    return [&field](const Vec& u) { return field.at(u); };
}

void finish(Report& r, bool ok, const std::string& note = {}) {
    if (r.points.empty()) {
        r.verdict = Verdict::inapplicable;
        if (r.note.empty()) r.note = note.empty() ? "no usable samples" : note;
        return;
    }
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    if (!note.empty()) r.note = note;
}

bool all_below(const Report& r, const std::vector<std::string>& names, double tol) {
    for (const auto& n : names)
        if (!(r.max_of(n) <= tol)) return false;
    return true;
}

/// Constancy contract: spread <= rel |mean| + floor.
bool constant(const std::vector<double>& v, const Tolerances& tol, double* mean = nullptr, double* spread = nullptr) {
    if (v.empty()) return false;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    if (mean) *mean = m;
    if (spread) *spread = *hi - *lo;
    return *hi - *lo <= tol.rel * std::abs(m) + tol.floor;
}

double op_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

double cc_factor(const NullImmersion& imm, const VectorField& Z, const Vec& x, double* residual = nullptr) {
    double phi = 0.0, res = 0.0;
    if (!closed_conformal_factor(imm.ambient(), Z, x, 1e-12, phi, res))
        throw GeometryError("every coordinate axis is null; conformal factor undefined");
    if (residual) *residual = res;
    return phi;
}

Vec unit_screen(const NullFrame& f, const Vec& v) {
    const double n = std::sqrt(std::max(0.0, f.inner(v, v)));
    if (!(n > 0)) throw GeometryError("screen vector vanishes");
    return v / n;
}

/// T = Z*/|Z*| on a frame.
Vec tangent_T(const NullFrame& f, const VectorField& Z, double floor) {
    const Vec zs = f.screen_part(Z.evaluate(f.x));
    if (std::sqrt(std::max(0.0, f.inner(zs, zs))) <= floor) throw GeometryError("Z* vanishes");
    return unit_screen(f, zs);
}

/// Screen axis least aligned with T at the base frame; W is built from it on
/// every stencil frame so the complement stays continuous.
int complement_axis(const NullFrame& f, const Vec& T) {
    int best = 0;
    double val = 2.0;
    for (int k = 0; k < f.screen_dim(); ++k) {
        const double a = std::abs(f.inner(f.screen.col(k), T));
        if (a < val) {
            val = a;
            best = k;
        }
    }
    return best;
}

Vec complement_W(const NullFrame& f, const Vec& T, int axis) {
    const Vec e = f.screen.col(axis);
    return unit_screen(f, e - f.inner(e, T) * T);
}

double angle_product(const NullFrame& f, const Vec& V) {
    const double vv = std::abs(f.inner(V, V));
    return f.inner(V, f.xi) * f.inner(V, f.nt) / vv;
}

}  // namespace

AngleReport constant_angle_test(const NullFrameField& field, const VectorField& V, const std::vector<Vec>& points,
                                const Tolerances& tol) {
    AngleReport r;
    r.check = "angle";
    sweep(r, points, {"angle_xi", "angle_N", "q", "screen_ratio", "identity"}, frames(field),
          [&](const NullFrame& f) -> std::vector<double> {
              const Vec v = V.evaluate(f.x);
              const double vv = f.inner(v, v);
              if (std::abs(vv) <= tol.floor) throw GeometryError("V is null at this sample");
              const double norm = std::sqrt(std::abs(vv));
              const double eps = vv > 0 ? 1.0 : -1.0;
              const double ax = f.inner(v, f.xi) / norm, an = f.inner(v, f.nt) / norm;
              const Vec vs = f.screen_part(v);
              const double ratio = f.inner(vs, vs) / (norm * norm);
              return {ax, an, ax * an, ratio, std::abs(eps - 2 * ax * an - ratio)};
          });
    r.identity_max = r.max_of("identity");
    r.product_criterion = constant(r.at("q"), tol, &r.q_mean, &r.q_spread);
    r.ratio_criterion = constant(r.at("screen_ratio"), tol, nullptr, &r.ratio_spread);

    // Normalizing gauge f = |V| / g(V, xi) makes angle(V, xi') = 1 and
    // angle(V, N') = q; where g(V, xi) = 0 no gauge changes the angles.
    std::vector<double> gx, gn;
    const auto& ax = r.at("angle_xi");
    const auto& an = r.at("angle_N");
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double f = std::abs(ax[i]) > tol.floor ? 1.0 / ax[i] : 1.0;
        gx.push_back(f * ax[i]);
        gn.push_back(an[i] / f);
    }
    double sx = 0.0, sn = 0.0;
    r.frame_criterion = constant(gx, tol, nullptr, &sx) && constant(gn, tol, nullptr, &sn);
    r.normalized_spread = std::max(sx, sn);
    r.criteria_agree =
        r.frame_criterion == r.product_criterion && r.product_criterion == r.ratio_criterion;
    r.set_scalar("q_mean", r.q_mean);
    r.set_scalar("q_spread", r.q_spread);
    r.set_scalar("screen_ratio_spread", r.ratio_spread);
    r.set_scalar("normalized_spread", r.normalized_spread);
    r.set_scalar("criteria_agree", r.criteria_agree ? 1.0 : 0.0);
    r.set_scalar("identity_max", r.identity_max);
    finish(r, r.product_criterion && r.identity_max <= tol.exact,
           r.criteria_agree ? "" : "constancy criteria disagree");
    return r;
}

Report gauge_invariance_check(const NullFrameField& field, const VectorField& V, const std::vector<Vec>& points,
                              int gauges, std::uint64_t seed, const Tolerances& tol) {
    Report r;
    r.check = "gauge";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    struct G {
        double a, b, d;
        Vec c;
    };
    std::vector<G> gs;
    const int p = field.immersion().param_dim();
    for (int k = 0; k < gauges; ++k) {
        G g{0.5 + unit(rng), 0.0, 2 * M_PI * unit(rng), Vec(p)};
        g.b = 0.9 * g.a * unit(rng);
        for (int i = 0; i < p; ++i) g.c(i) = 4 * unit(rng) - 2;
        gs.push_back(g);
    }
    sweep(r, points, {"q_deviation", "unit_angle_deviation", "unit_gauge_q_deviation"}, frames(field),
          [&](const NullFrame& f) -> std::vector<double> {
              const Vec v = V.evaluate(f.x);
              if (std::abs(f.inner(v, v)) <= tol.floor) throw GeometryError("V is null at this sample");
              const double q = angle_product(f, v);
              double dev = 0.0;
              for (const G& g : gs) {
                  const double s = g.a + g.b * std::sin(g.c.dot(f.u) + g.d);
                  dev = std::max(dev, std::abs(angle_product(gauge_rescale(f, s), v) - q));
              }
              const double norm = std::sqrt(std::abs(f.inner(v, v)));
              const double gx = f.inner(v, f.xi);
              if (std::abs(gx) <= tol.floor) return {dev, 0.0, 0.0};
              const NullFrame u = gauge_rescale(f, norm / gx);
              return {dev, std::abs(u.inner(v, u.xi) / norm - 1.0), std::abs(angle_product(u, v) - q)};
          });
    r.set_scalar("gauges", gauges);
    r.set_scalar("seed", static_cast<double>(seed));
    finish(r, all_below(r, {"q_deviation", "unit_angle_deviation", "unit_gauge_q_deviation"}, tol.exact));
    return r;
}

QCFit quasi_conformal_fit(const ShapeSample& s, double tol) {
    const Eigen::Index n = s.A_N.rows();
    QCFit fit;
    Mat D(n * n, 2);
    Vec b(n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            D(i * n + j, 0) = s.A_star(i, j);
            D(i * n + j, 1) = i == j ? 1.0 : 0.0;
            b(i * n + j) = s.A_N(i, j);
        }
    const Mat G = D.transpose() * D;
    Eigen::SelfAdjointEigenSolver<Mat> es(G);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
    fit.condition = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    Vec x;
    if (fit.condition > 1e8) {
        fit.non_unique = true;
        Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-8);
        x = svd.solve(b);
    } else {
        x = G.ldlt().solve(D.transpose() * b);
    }
    fit.phi = x(0);
    fit.psi = x(1);
    fit.residual = op_norm(s.A_N - fit.phi * s.A_star - fit.psi * Mat::Identity(n, n));
    if (fit.residual <= tol)
        fit.classification = std::abs(fit.psi) <= tol ? QCClass::conformal : QCClass::quasi_conformal;
    return fit;
}

double sqc_grw_residual(const ShapeSample& s, double L) {
    const Eigen::Index n = s.A_N.rows();
    return op_norm((s.A_N - s.A_star) / std::sqrt(2.0) - L * Mat::Identity(n, n));
}

Report quasi_conformal_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol) {
    Report r;
    r.check = "quasi_conformal_fit";
    sweep(r, points, {"phi", "psi", "residual", "condition", "non_unique"}, jets(field, tol),
          [&](const FrameJet& jet) -> std::vector<double> {
              const QCFit f = quasi_conformal_fit(shape_operators(jet), tol.fd);
              return {f.phi, f.psi, f.residual, f.condition, f.non_unique ? 1.0 : 0.0};
          });
    finish(r, all_below(r, {"residual"}, tol.fd));
    return r;
}

Report grw_pair_check(const NullFrameField& field, const std::vector<Vec>& points, const std::string& warp,
                      const std::string& time, int time_index, const Tolerances& tol) {
    Report r;
    r.check = "sqc_grw";
    const ExpressionField rho = parse_expression(warp, {time});
    sweep(r, points,
          {"t", "phi", "psi", "psi_expected", "phi_rel_error", "psi_rel_error", "sqc_residual", "non_unique"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const double t = jet.frame().x(time_index);
              const Jet2 w = rho.evaluate_jet(std::span<const double>(&t, 1));
              const double L = w.gradient()(0) / w.value();
              const ShapeSample s = shape_operators(jet);
              const QCFit f = quasi_conformal_fit(s, tol.fd);
              const double psi = std::sqrt(2.0) * L;
              // A non-unique fit does not determine the pair; the residual alone judges it.
              const double nan = std::numeric_limits<double>::quiet_NaN();
              return {t,
                      f.phi,
                      f.psi,
                      psi,
                      f.non_unique ? nan : std::abs(f.phi - 1.0),
                      f.non_unique ? nan : std::abs(f.psi - psi) / std::max(1.0, std::abs(psi)),
                      sqc_grw_residual(s, L),
                      f.non_unique ? 1.0 : 0.0};
          });
    const auto& nu = r.at("non_unique");
    const auto count = std::count(nu.begin(), nu.end(), 1.0);
    r.set_scalar("non_unique_samples", static_cast<double>(count));
    finish(r, all_below(r, {"phi_rel_error", "psi_rel_error", "sqc_residual"}, tol.fd),
           count ? "fit is non-unique at some samples; there the expected pair is judged by sqc_residual" : "");
    return r;
}

Report cc_screen_theorem_check(std::shared_ptr<const NullImmersion> imm, const VectorField& Z,
                               const std::vector<Vec>& points, const Tolerances& tol) {
    Report r;
    r.check = "qc-screen";
    const NullFrameField field(imm, ClosedConformalRecipe{Z});
    sweep(r, points,
          {"qc_residual", "tau_screen", "theta_screen_derivative", "explicit_pair_residual", "phi_fit", "psi_fit",
           "theta", "cc_phi"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              double cc_res = 0.0;
              const double phi = cc_factor(*imm, Z, f.x, &cc_res);
              if (cc_res > tol.fd) throw GeometryError("Z is not closed conformal at this sample");
              const ShapeSample s = shape_operators(jet);
              const QCFit fit = quasi_conformal_fit(s, tol.fd);
              double tau = 0.0, dtheta = 0.0;
              for (int i = 0; i < f.screen_dim(); ++i) {
                  tau = std::max(tau, std::abs(s.tau(i)));
                  const Vec a = jet.param_coords(f.screen.col(i));
                  dtheta = std::max(dtheta, std::abs(jet.derivative([](const NullFrame& g) { return g.theta; }, a)));
              }
              const Eigen::Index n = s.A_N.rows();
              const double pair = op_norm(s.A_N + s.A_star / f.theta + (phi / f.theta) * Mat::Identity(n, n));
              return {fit.residual, tau, dtheta, pair, fit.phi, fit.psi, f.theta, phi};
          });
    finish(r, all_below(r, {"qc_residual", "tau_screen", "theta_screen_derivative", "explicit_pair_residual"}, tol.fd));
    return r;
}

Report zstar_zero_qc_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                           const Tolerances& tol) {
    Report r;
    r.check = "zstar-zero-qc";
    sweep(r, points, {"residual", "phi_pair", "psi_pair", "derived_residual", "psi_derived"}, jets(field, tol),
          [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              const SplitField sp = split_field(f, Z.evaluate(f.x));
              if (sp.Zstar.norm() > tol.fd * std::max(1.0, sp.normZ)) throw GeometryError("Z* does not vanish");
              if (std::abs(sp.Z_N_coef) <= tol.floor) throw GeometryError("g(Z, xi) vanishes");
              const double phi_cc = cc_factor(field.immersion(), Z, f.x);
              const ShapeSample s = shape_operators(jet);
              const double a = -sp.Z_xi_coef / sp.Z_N_coef, b = phi_cc / sp.Z_N_coef;
              const Eigen::Index n = s.A_N.rows();
              const Mat I = Mat::Identity(n, n);
              // Differentiating Z = g(Z,N) xi + g(Z,xi) N along the screen gives psi = -phi / g(Z, xi).
              return {op_norm(s.A_N - a * s.A_star - b * I), a, b, op_norm(s.A_N - a * s.A_star + b * I), -b};
          });
    std::string note;
    if (!r.points.empty() && r.max_of("residual") > tol.fd && r.max_of("derived_residual") <= tol.fd)
        note = "A_N fits the pair with psi = -phi/g(Z,xi), the opposite sign of the printed value";
    finish(r, all_below(r, {"residual"}, tol.fd), note);
    return r;
}

PrincipalReport cpd_test(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                         const Tolerances& tol) {
    PrincipalReport r;
    r.check = "cpd";
    const NullImmersion& imm = field.immersion();
    r.criterion4_vacuous = imm.screen_dim() < 2;
    sweep(r, points,
          {"lambda", "predicted_printed", "predicted_derived", "eigen_residual", "printed_residual",
           "derived_residual", "criterion4", "geodesic", "geodesic_lambda", "phi", "q", "AZperp_norm"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              const Vec z = Z.evaluate(f.x);
              const SplitField sp = split_field(f, z);
              if (sp.eps_Z == 0) throw GeometryError("Z is null at this sample");
              const Vec T = tangent_T(f, Z, tol.fd * std::max(1.0, sp.normZ));
              const Vec& zs = sp.Zstar_ambient;
              const double zz = f.inner(zs, zs);
              const double phi = cc_factor(imm, Z, f.x);

              const Vec AZ = shape_AZperp(jet, sp, zs);
              const double lambda = f.inner(AZ, zs) / zz;
              const double eig = f.screen_coords(AZ - lambda * zs).norm() / std::sqrt(zz);
              const double q = sp.Z_N_coef * sp.Z_xi_coef / (sp.normZ * sp.normZ);
              const double printed = 2 * sp.eps_Z * q * phi;

              double c4 = 0.0;
              const auto zstar_sq = [&Z](const NullFrame& g) {
                  const Vec s = g.screen_part(Z.evaluate(g.x));
                  return g.inner(s, s);
              };
              for (int k = 0; k < f.screen_dim(); ++k) {
                  const Vec e = f.screen.col(k);
                  const Vec w = e - f.inner(e, T) * T;
                  if (std::sqrt(std::max(0.0, f.inner(w, w))) < 1e-3) continue;
                  c4 = std::max(c4, std::abs(jet.derivative(zstar_sq, jet.param_coords(unit_screen(f, w)))));
              }

              const auto Tfield = [&Z, &tol](const NullFrame& g) -> Vec { return tangent_T(g, Z, tol.floor); };
              const auto Zs = [&Z](const NullFrame& g) -> Vec { return g.screen_part(Z.evaluate(g.x)); };
              const double geo = f.screen_coords(jet.covariant(Tfield, T)).norm();
              const double dz = f.inner(f.screen_part(jet.covariant(Zs, T)), T);
              return {lambda,
                      printed,
                      -printed,
                      eig,
                      std::abs(lambda - printed),
                      std::abs(lambda + printed),
                      c4,
                      geo,
                      std::abs(lambda - (dz - phi)),
                      phi,
                      q,
                      f.screen_coords(AZ).norm()};
          });
    r.constant_angle = constant(r.at("q"), tol);
    r.eigen_max = r.max_of("eigen_residual");
    r.printed_max = r.max_of("printed_residual");
    r.derived_max = r.max_of("derived_residual");
    r.criterion4_max = r.max_of("criterion4");
    r.set_scalar("constant_angle", r.constant_angle ? 1.0 : 0.0);
    r.set_scalar("eigen_max", r.eigen_max);
    r.set_scalar("printed_prediction_max", r.printed_max);
    r.set_scalar("derived_prediction_max", r.derived_max);
    r.set_scalar("criterion4_max", r.criterion4_max);
    r.set_scalar("criterion4_vacuous", r.criterion4_vacuous ? 1.0 : 0.0);
    const bool principal = r.eigen_max <= tol.fd;
    const bool c4 = r.criterion4_vacuous || r.criterion4_max <= tol.fd;
    std::string note;
    if (principal != c4) note = "principal-direction test and gradient criterion disagree";
    finish(r, principal, note);
    return r;
}

namespace {

/// True when Z is closed conformal at every sample within tol.
bool is_cc_on(const NullImmersion& imm, const VectorField& Z, const std::vector<Vec>& points, double tol) {
    for (const Vec& u : points) {
        double res = 0.0;
        try {
            cc_factor(imm, Z, imm.point(u), &res);
        } catch (const GeometryError&) {
            return false;
        }
        if (res > tol) return false;
    }
    return true;
}

}  // namespace

Report principal_value_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                             const Tolerances& tol) {
    const PrincipalReport p = cpd_test(field, Z, points, tol);
    Report r;
    r.check = "principal";
    r.points = p.points;
    r.excluded = p.excluded;
    for (const char* n : {"lambda", "predicted_printed", "predicted_derived", "eigen_residual", "printed_residual",
                          "derived_residual", "AZperp_norm", "phi", "q"})
        r.add_series(n) = p.at(n);
    r.set_scalar("printed_prediction_max", p.printed_max);
    r.set_scalar("derived_prediction_max", p.derived_max);
    if (r.points.empty()) {
        r.note = "Z* vanishes at every sample";
        return r;
    }
    if (!p.constant_angle || !is_cc_on(field.immersion(), Z, r.points, tol.fd)) {
        r.note = "requires a constant angle with a closed conformal Z";
        return r;
    }
    const bool ok = p.eigen_max <= tol.fd && p.printed_max <= tol.fd;
    std::string note;
    if (p.eigen_max <= tol.fd && p.printed_max > tol.fd && p.derived_max <= tol.fd)
        note = "lambda matches -2 eps q phi, the opposite sign of the printed value";
    finish(r, ok, note);
    return r;
}

Report geodesic_direction_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                                const Tolerances& tol) {
    const PrincipalReport p = cpd_test(field, Z, points, tol);
    Report r;
    r.check = "geodesic";
    r.points = p.points;
    r.excluded = p.excluded;
    r.add_series("geodesic") = p.at("geodesic");
    r.add_series("geodesic_lambda") = p.at("geodesic_lambda");
    if (p.verdict != Verdict::pass) {
        r.verdict = Verdict::inapplicable;
        r.note = "Z* is not a canonical principal direction";
        return r;
    }
    finish(r, all_below(r, {"geodesic", "geodesic_lambda"}, tol.fd));
    return r;
}

Report flat_screen_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                         const Tolerances& tol) {
    Report r;
    r.check = "flat-screen";
    const NullImmersion& imm = field.immersion();
    if (imm.screen_dim() != 2) {
        r.note = "screen is not two-dimensional";
        return r;
    }
    sweep(r, points, {"nabla_T_T", "nabla_W_T", "nabla_T_W", "nabla_W_W", "phi", "q", "trace_AZperp", "C_symmetry"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              const SplitField sp = split_field(f, Z.evaluate(f.x));
              if (sp.eps_Z == 0) throw GeometryError("Z is null at this sample");
              const Vec T = tangent_T(f, Z, tol.fd * std::max(1.0, sp.normZ));
              const int axis = complement_axis(f, T);
              const Vec W = complement_W(f, T, axis);
              const ShapeSample s = shape_operators(jet);
              const double trace = sp.Z_xi_coef * s.A_star.trace() + sp.Z_N_coef * s.A_N.trace();

              const auto Tf = [&Z, &tol](const NullFrame& g) -> Vec { return tangent_T(g, Z, tol.floor); };
              const auto Wf = [&Z, &tol, axis](const NullFrame& g) -> Vec {
                  return complement_W(g, tangent_T(g, Z, tol.floor), axis);
              };
              const auto nabla = [&](const auto& V, const Vec& X) {
                  return f.screen_coords(jet.covariant(V, X)).norm();
              };
              return {nabla(Tf, T),
                      nabla(Tf, W),
                      nabla(Wf, T),
                      nabla(Wf, W),
                      cc_factor(imm, Z, f.x),
                      sp.Z_N_coef * sp.Z_xi_coef / (sp.normZ * sp.normZ),
                      trace,
                      s.C_symmetry};
          });
    if (r.points.empty()) {
        finish(r, false);
        return r;
    }
    std::string gate;
    if (r.max_of("phi") > tol.fd) gate = "Z is not parallel";
    else if (!constant(r.at("q"), tol)) gate = "angle with Z is not constant";
    else if (r.max_of("trace_AZperp") > tol.fd) gate = "trace of A_{Z-perp} does not vanish";
    else if (r.max_of("C_symmetry") > tol.fd) gate = "screen is not integrable";
    if (!gate.empty()) {
        r.verdict = Verdict::inapplicable;
        r.note = gate;
        return r;
    }
    finish(r, all_below(r, {"nabla_T_T", "nabla_W_T", "nabla_T_W", "nabla_W_W"}, tol.fd));
    return r;
}

Report cmc_cc_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                    std::optional<double> spaceform_c, std::uint64_t seed, const Tolerances& tol) {
    Report r;
    r.check = "cmc";
    const NullImmersion& imm = field.immersion();
    if (imm.param_dim() != 3) {
        r.note = "hypersurface is not three-dimensional";
        return r;
    }
    if (!spaceform_c) {
        r.note = "no spaceform curvature declared";
        return r;
    }
    std::vector<Vec> xs;
    for (const Vec& u : points) xs.push_back(imm.point(u));
    const SpaceformReport sf = spaceform_residual(imm.ambient(), *spaceform_c, xs, seed);
    r.set_scalar("spaceform_residual", sf.max_residual);
    if (sf.max_residual > 1e-6) {
        r.note = "ambient is not a spaceform of the declared curvature";
        return r;
    }

    // Gate quantities are recorded for every sample before k* is inspected.
    double H_max = 0.0, principal_max = 0.0;
    const auto kstar = [&](const FrameJet& jet, const NullFrame& g) {
        const Vec T = tangent_T(g, Z, tol.floor);
        const Vec a = g.J.colPivHouseholderQr().solve(T);
        return jet.B_param_on(g, a, a);
    };
    sweep(r, points,
          {"k_star", "W_k_star", "cond1", "cond2", "cond1_sqrt2", "cond2_sqrt2", "homogeneity", "h",
           "geodesic_defect"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              const SplitField sp = split_field(f, Z.evaluate(f.x));
              const Vec T = tangent_T(f, Z, tol.fd * std::max(1.0, sp.normZ));
              const ShapeSample s = shape_operators(jet);
              H_max = std::max(H_max, std::abs(s.H));
              const Vec tc = f.screen_coords(T);
              const double k = tc.dot(s.A_star * tc);
              principal_max = std::max(principal_max, (s.A_star * tc - k * tc).norm());
              if (std::abs(k) <= tol.fd) throw GeometryError("k* vanishes; f = 1/sqrt|2k*| is undefined");

              const int axis = complement_axis(f, T);
              const Vec W = complement_W(f, T, axis);
              const Vec aT = jet.param_coords(T), aW = jet.param_coords(W);
              const auto ks = [&](const NullFrame& g) { return kstar(jet, g); };
              const auto Tf = [&Z, &tol](const NullFrame& g) -> Vec { return tangent_T(g, Z, tol.floor); };
              const Vec nTT = f.screen_part(jet.covariant(Tf, T));
              const double h = f.inner(nTT, T);
              const double gWTW = f.inner(f.screen_part(jet.covariant(Tf, W)), W);

              const auto conditions = [&](double scale, double& c1, double& c2) {
                  const auto fn = [&](const NullFrame& g) { return scale / std::sqrt(std::abs(2 * ks(g))); };
                  const double fv = fn(f);
                  c1 = std::abs(jet.derivative(fn, aW));
                  c2 = std::abs(jet.derivative(fn, aT) + h * fv - fv * gWTW);
              };
              double c1, c2, d1, d2;
              conditions(1.0, c1, c2);
              conditions(std::sqrt(2.0), d1, d2);
              const double homog = std::max(std::abs(d1 - std::sqrt(2.0) * c1), std::abs(d2 - std::sqrt(2.0) * c2));
              return {kstar(jet, f),
                      std::abs(jet.derivative(ks, aW)),
                      c1,
                      c2,
                      d1,
                      d2,
                      homog,
                      h,
                      f.screen_coords(nTT - h * T).norm()};
          });
    r.set_scalar("H_max", H_max);
    r.set_scalar("principal_max", principal_max);
    if (H_max > tol.fd) {
        r.verdict = Verdict::inapplicable;
        r.note = "null mean curvature does not vanish";
        return r;
    }
    if (principal_max > tol.fd) {
        r.verdict = Verdict::inapplicable;
        r.note = "T is not a principal direction of A*";
        return r;
    }
    if (r.points.empty()) r.note = "k* vanishes at every sample; the conditions cannot be evaluated";
    finish(r, all_below(r, {"W_k_star", "cond1", "cond2", "cond1_sqrt2", "cond2_sqrt2"}, tol.fd));
    return r;
}

Report screen_gradient_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                             const Tolerances& tol) {
    Report r;
    r.check = "eqgrads";
    const NullImmersion& imm = field.immersion();
    sweep(r, points, {"residual", "gradient_norm", "phi"}, jets(field, tol),
          [&](const FrameJet& jet) -> std::vector<double> {
              const NullFrame& f = jet.frame();
              const SplitField sp = split_field(f, Z.evaluate(f.x));
              if (sp.normZ <= tol.floor) throw GeometryError("|Z| below floor");
              double cc_res = 0.0;
              const double phi = cc_factor(imm, Z, f.x, &cc_res);
              if (cc_res > tol.fd) throw GeometryError("Z is not closed conformal at this sample");
              const auto norm = [&Z](const NullFrame& g) {
                  const Vec z = Z.evaluate(g.x);
                  return std::sqrt(std::abs(g.inner(z, z)));
              };
              Vec grad(f.screen_dim());
              for (int i = 0; i < f.screen_dim(); ++i)
                  grad(i) = jet.derivative(norm, jet.param_coords(f.screen.col(i)));
              const Vec rhs = (sp.eps_Z * phi / sp.normZ) * sp.Zstar;
              return {(grad - rhs).norm(), grad.norm(), phi};
          });
    finish(r, all_below(r, {"residual"}, tol.fd));
    return r;
}

UmbilicReport umbilic_classifier(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol) {
    UmbilicReport r;
    r.check = "umbilic";
    sweep(r, points,
          {"A_star_norm", "A_star_umbilicity", "A_star_lambda", "A_N_norm", "A_N_umbilicity", "A_N_lambda"},
          jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
              const ShapeSample s = shape_operators(jet);
              const Eigen::Index n = s.A_N.rows();
              const Mat I = Mat::Identity(n, n);
              const double ls = s.A_star.trace() / n, ln = s.A_N.trace() / n;
              return {op_norm(s.A_star), op_norm(s.A_star - ls * I), ls,
                      op_norm(s.A_N),    op_norm(s.A_N - ln * I),    ln};
          });
    if (!r.points.empty()) {
        r.totally_geodesic = r.max_of("A_star_norm") <= tol.fd;
        r.totally_umbilical = r.max_of("A_star_umbilicity") <= tol.fd;
        r.screen_geodesic = r.max_of("A_N_norm") <= tol.fd;
        r.screen_umbilical = r.max_of("A_N_umbilicity") <= tol.fd;
        r.classification = r.totally_geodesic    ? UmbilicClass::totally_geodesic
                           : r.totally_umbilical ? UmbilicClass::totally_umbilical
                           : r.screen_geodesic   ? UmbilicClass::screen_geodesic
                           : r.screen_umbilical  ? UmbilicClass::screen_umbilical
                                                 : UmbilicClass::none;
    }
    r.note = umbilic_name(r.classification);
    r.set_scalar("totally_geodesic", r.totally_geodesic);
    r.set_scalar("totally_umbilical", r.totally_umbilical);
    r.set_scalar("screen_geodesic", r.screen_geodesic);
    r.set_scalar("screen_umbilical", r.screen_umbilical);
    if (r.points.empty()) r.verdict = Verdict::inapplicable;
    else r.verdict = Verdict::pass;
    return r;
}

Report frame_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol) {
    Report r;
    r.check = "validate";
    const std::vector<std::string> names = {"xi_null",   "nt_null",           "pairing",  "nt_screen",
                                            "xi_screen", "screen_orthonormal", "tangency"};
    sweep(r, points, names, frames(field), [&](const NullFrame& f) -> std::vector<double> {
        std::vector<double> out;
        for (const auto& [n, v] : validate_frame(field.immersion(), f).named()) out.push_back(v);
        return out;
    });
    finish(r, r.excluded.empty() && all_below(r, names, tol.exact),
           r.excluded.empty() ? "" : "frame construction failed at some samples");
    // A screen that cannot be built is invalid, not out of scope.
    if (!r.excluded.empty()) r.verdict = Verdict::fail;
    return r;
}

Report shape_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol) {
    Report r;
    r.check = "shape";
    const std::vector<std::string> judged = {"B_symmetry", "B_xi_row",        "duality_B", "duality_C",
                                             "A_N_screen", "A_star_symmetry", "A_star_xi"};
    std::vector<std::string> names = judged;
    for (const char* extra : {"H", "C_symmetry", "umbilicity", "tau_screen"}) names.emplace_back(extra);
    sweep(r, points, names, jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
        const ShapeSample s = shape_operators(jet);
        const double tau = s.tau.head(s.tau.size() - 1).cwiseAbs().maxCoeff();
        return {s.B_symmetry, s.B_xi_row,        s.duality_B, s.duality_C, s.A_N_screen, s.A_star_symmetry,
                s.A_star_xi,  s.H,               s.C_symmetry, s.umbilicity, tau};
    });
    finish(r, all_below(r, judged, tol.fd));
    return r;
}

Report components_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                        const Tolerances& tol) {
    Report r;
    r.check = "components";
    sweep(r, points, {"a", "b", "c", "phi"}, jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
        const ComponentResiduals c = components_residual(jet, Z);
        return {c.a, c.b, c.c, c.phi};
    });
    if (!is_cc_on(field.immersion(), Z, r.points, tol.fd)) {
        r.verdict = Verdict::inapplicable;
        r.note = "Z is not closed conformal; residuals are diagnostics";
        return r;
    }
    finish(r, all_below(r, {"a", "b", "c"}, tol.fd));
    return r;
}

Report codazzi_check(const NullFrameField& field, const std::vector<Vec>& points, double tol) {
    Report r;
    r.check = "codazzi";
    const Tolerances t;
    sweep(r, points, {"residual"}, jets(field, t),
          [&](const FrameJet& jet) -> std::vector<double> { return {codazzi_residual(jet)}; });
    finish(r, all_below(r, {"residual"}, tol));
    return r;
}

Report nonmetric_check(const NullFrameField& field, const std::vector<Vec>& points, const Tolerances& tol) {
    Report r;
    r.check = "nonmetric";
    sweep(r, points, {"residual"}, jets(field, tol),
          [&](const FrameJet& jet) -> std::vector<double> { return {nonmetric_residual(jet)}; });
    finish(r, all_below(r, {"residual"}, tol.fd));
    return r;
}

Report zperp_check(const NullFrameField& field, const VectorField& Z, const std::vector<Vec>& points,
                   const Tolerances& tol) {
    Report r;
    r.check = "zperp";
    sweep(r, points, {"residual", "C_symmetry"}, jets(field, tol), [&](const FrameJet& jet) -> std::vector<double> {
        return {zperp_residual(jet, Z), shape_operators(jet).C_symmetry};
    });
    if (!r.points.empty() && (r.max_of("C_symmetry") > tol.fd || !is_cc_on(field.immersion(), Z, r.points, tol.fd))) {
        r.verdict = Verdict::inapplicable;
        r.note = "requires an integrable screen and a closed conformal Z";
        return r;
    }
    finish(r, all_below(r, {"residual"}, tol.fd));
    return r;
}

Report spaceform_check(const AmbientManifold& M, double c, const std::vector<Vec>& xs, std::uint64_t seed,
                       int total_triples, double tol) {
    Report r;
    r.check = "spaceform";
    const std::size_t total = static_cast<std::size_t>(std::max(total_triples, 0));
    std::vector<Vec> chosen;
    std::vector<int> counts;
    if (xs.size() > total) {
        for (std::size_t i = 0; i < total; ++i) chosen.push_back(xs[i * xs.size() / total]);
        counts.assign(total, 1);
    } else {
        chosen = xs;
        for (std::size_t i = 0; i < xs.size(); ++i)
            counts.push_back(static_cast<int>(total / xs.size() + (i < total % xs.size() ? 1 : 0)));
    }
    std::size_t evals = 0, k = 0;
    sweep(r, chosen, {"residual"}, [](const Vec& x) { return x; }, [&](const Vec& x) -> std::vector<double> {
        const SpaceformReport s = spaceform_residual(M, c, {x}, seed + evals, counts[k++]);
        evals += s.evaluations;
        return {s.max_residual};
    });
    r.set_scalar("c", c);
    r.set_scalar("evaluations", static_cast<double>(evals));
    r.set_scalar("seed", static_cast<double>(seed));
    finish(r, all_below(r, {"residual"}, tol));
    return r;
}

Report cc_field_check(const AmbientManifold& M, const VectorField& Z, const std::vector<Vec>& xs,
                      const Tolerances& tol) {
    Report r;
    r.check = "cc";
    sweep(r, xs, {"phi", "residual"}, [](const Vec& x) { return x; }, [&](const Vec& x) -> std::vector<double> {
        double phi = 0.0, res = 0.0;
        if (!closed_conformal_factor(M, Z, x, 1e-12, phi, res)) throw GeometryError("every coordinate axis is null");
        return {phi, res};
    });
    finish(r, all_below(r, {"residual"}, tol.fd));
    return r;
}

}  // namespace nullgeo
