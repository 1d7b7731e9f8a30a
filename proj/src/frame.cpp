#include "nullgeo/frame.hpp"

#include <cmath>

namespace nullgeo {

namespace {

constexpr double kInputTol = 1e-8;
constexpr double kDegenerate = 1e-12;

struct Base {
    Embedding emb;
    Mat g;
};

Base base_at(const NullImmersion& imm, const Vec& u) {
    Base b{imm.embed(u), {}};
    b.g = imm.ambient().metric(b.emb.x);
    return b;
}

NullFrame skeleton(const Vec& u, const Base& b) {
    NullFrame f;
    f.u = u;
    f.x = b.emb.x;
    f.J = b.emb.J;
    f.g = b.g;
    return f;
}

Vec rigged_transversal(const Mat& g, const Vec& xi, const Vec& zeta) {
    const double a = xi.dot(g * zeta);
    return (zeta - (zeta.dot(g * zeta) / (2.0 * a)) * xi) / a;
}

/// Orthonormalizes the columns of `cand` selected by `order` (with one
/// re-orthogonalization pass). Returns false on a degenerate candidate.
bool orthonormalize(const Mat& g, const std::vector<Vec>& cand, const std::vector<int>& order, Mat& out) {
    const Eigen::Index m = g.rows();
    out.resize(m, static_cast<Eigen::Index>(order.size()));
    for (std::size_t j = 0; j < order.size(); ++j) {
        Vec v = cand[static_cast<std::size_t>(order[j])];
        const double scale = std::max(1.0, std::abs(v.dot(g * v)));
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) {
                const auto e = out.col(static_cast<Eigen::Index>(i));
                v -= v.dot(g * e) * e;
            }
        const double n2 = v.dot(g * v);
        if (!(n2 > kDegenerate * scale)) return false;
        out.col(static_cast<Eigen::Index>(j)) = v / std::sqrt(n2);
    }
    return true;
}

/// Screen spanned by projected coordinate axes, pivoting on the largest
/// remaining norm unless an order is supplied.
void construct_screen(NullFrame& f, int n, ScreenHint* hint) {
    const int m = static_cast<int>(f.x.size());
    std::vector<Vec> cand;
    for (int k = 0; k < m; ++k) cand.push_back(f.screen_part(Vec::Unit(m, k)));

    std::vector<int> order;
    if (hint && !hint->order.empty()) {
        order = hint->order;
    } else {
        std::vector<Vec> work = cand;
        std::vector<bool> used(static_cast<std::size_t>(m), false);
        for (int j = 0; j < n; ++j) {
            int best = -1;
            double best_n = -1.0;
            for (int k = 0; k < m; ++k) {
                if (used[static_cast<std::size_t>(k)]) continue;
                const double n2 = f.inner(work[static_cast<std::size_t>(k)], work[static_cast<std::size_t>(k)]);
                if (n2 > best_n * (1.0 + 1e-12)) {
                    best = k;
                    best_n = n2;
                }
            }
            used[static_cast<std::size_t>(best)] = true;
            order.push_back(best);
            if (best_n > 0) {
                const Vec e = work[static_cast<std::size_t>(best)] / std::sqrt(best_n);
                for (int k = 0; k < m; ++k)
                    if (!used[static_cast<std::size_t>(k)])
                        work[static_cast<std::size_t>(k)] -= f.inner(work[static_cast<std::size_t>(k)], e) * e;
            }
        }
        if (hint) hint->order = order;
    }
    if (static_cast<int>(order.size()) != n || !orthonormalize(f.g, cand, order, f.screen))
        throw GeometryError("could not construct a screen from the coordinate axes");
}

}  // namespace

Vec NullFrame::screen_part(const Vec& Y) const {
    const Vec gY = g * Y;
    return Y - gY.dot(nt) * xi - gY.dot(xi) * nt;
}

Vec NullFrame::screen_coords(const Vec& Y) const { return screen.transpose() * (g * Y); }

NullFrame frame_from_rigging(const NullImmersion& imm, const VectorField& zeta, const Vec& u, ScreenHint* hint) {
    const Base b = base_at(imm, u);
    NullFrame f = skeleton(u, b);
    f.xi = radical_direction(imm, b.emb, b.g);
    const Vec z = zeta.evaluate(f.x);
    const double a = f.inner(f.xi, z);
    if (std::abs(a) <= kInputTol * f.xi.norm() * std::max(1.0, z.norm()))
        throw GeometryError("rigging field is tangent to the hypersurface");
    f.nt = rigged_transversal(f.g, f.xi, z);
    construct_screen(f, imm.screen_dim(), hint);
    return f;
}

NullFrame frame_from_cc(const NullImmersion& imm, const VectorField& Z, const Vec& u, ScreenHint* hint) {
    const Base b = base_at(imm, u);
    NullFrame f = skeleton(u, b);
    const Vec z = Z.evaluate(f.x);
    const double zz = f.inner(z, z);
    if (std::abs(zz) <= kInputTol * std::max(1.0, z.squaredNorm())) throw GeometryError("closed conformal field is null");
    const Vec xi0 = radical_direction(imm, b.emb, b.g);
    const double c = f.inner(z, xi0);
    if (std::abs(c) <= kInputTol * xi0.norm() * std::max(1.0, z.norm()))
        throw GeometryError("closed conformal field is tangent to the hypersurface");
    f.theta = 0.5 * zz;
    f.xi = (f.theta / c) * xi0;
    f.nt = (z - f.xi) / f.theta;
    construct_screen(f, imm.screen_dim(), hint);
    return f;
}

NullFrame frame_from_explicit(const NullImmersion& imm, const std::vector<VectorField>& fields, const Vec& u,
                              ScreenHint* hint) {
    const int n = imm.screen_dim();
    if (static_cast<int>(fields.size()) != n)
        throw ConfigError("explicit screen needs " + std::to_string(n) + " fields");
    const Base b = base_at(imm, u);
    NullFrame f = skeleton(u, b);
    f.xi = radical_direction(imm, b.emb, b.g);
    const Vec xi_unit = f.xi / f.xi.norm();

    std::vector<Vec> cand;
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        const Vec s = fields[static_cast<std::size_t>(i)].evaluate(f.x);
        const double sn = std::max(1.0, s.norm());
        const Vec a = f.J.colPivHouseholderQr().solve(s);
        if ((f.J * a - s).norm() > kInputTol * sn)
            throw GeometryError("screen field " + std::to_string(i + 1) + " is not tangent");
        if (std::abs(f.inner(s, xi_unit)) > kInputTol * sn)
            throw GeometryError("screen field " + std::to_string(i + 1) + " is not orthogonal to xi");
        cand.push_back(s);
        order.push_back(i);
    }
    if (!orthonormalize(f.g, cand, order, f.screen))
        throw GeometryError("screen fields are dependent or contain the radical direction");

    const int m = static_cast<int>(f.x.size());
    auto complement = [&](int k) {
        Vec w = Vec::Unit(m, k);
        for (int i = 0; i < n; ++i) w -= f.inner(w, f.screen.col(i)) * f.screen.col(i);
        return w;
    };
    int axis = hint ? hint->transversal : -1;
    if (axis < 0) {
        double best = -1.0;
        for (int k = 0; k < m; ++k) {
            const double v = std::abs(f.inner(complement(k), f.xi));
            if (v > best * (1.0 + 1e-12)) {
                best = v;
                axis = k;
            }
        }
        if (hint) hint->transversal = axis;
    }
    const Vec w = complement(axis);
    if (std::abs(f.inner(w, f.xi)) <= kDegenerate * f.xi.norm())
        throw GeometryError("no transversal direction in the screen complement");
    f.nt = rigged_transversal(f.g, f.xi, w);
    return f;
}

NullFrame build_frame(const NullImmersion& imm, const ScreenRecipe& recipe, const Vec& u, ScreenHint* hint) {
    return std::visit(
        [&](const auto& r) -> NullFrame {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RiggingRecipe>) return frame_from_rigging(imm, r.zeta, u, hint);
            else if constexpr (std::is_same_v<R, ClosedConformalRecipe>) return frame_from_cc(imm, r.Z, u, hint);
            else return frame_from_explicit(imm, r.fields, u, hint);
        },
        recipe);
}

NullFrame gauge_rescale(const NullFrame& frame, double f) {
    if (!(f != 0.0) || !std::isfinite(f)) throw GeometryError("gauge factor vanishes");
    NullFrame out = frame;
    out.xi = f * frame.xi;
    out.nt = frame.nt / f;
    return out;
}

NullFrameField::NullFrameField(std::shared_ptr<const NullImmersion> imm, ScreenRecipe recipe)
    : imm_(std::move(imm)), recipe_(std::move(recipe)) {}

NullFrame NullFrameField::at(const Vec& u) const {
    ScreenHint h;
    return at(u, h);
}

NullFrame NullFrameField::at(const Vec& u, ScreenHint& hint) const {
    NullFrame f = build_frame(*imm_, recipe_, u, &hint);
    if (gauge_) f = gauge_rescale(f, gauge_(u, f));
    return f;
}

NullFrameField NullFrameField::with_gauge(GaugeFunction f) const {
    NullFrameField out = *this;
    if (!gauge_) {
        out.gauge_ = std::move(f);
    } else {
        // The second factor sees the frame produced by the first.
        out.gauge_ = [g1 = gauge_, g2 = std::move(f)](const Vec& u, const NullFrame& base) {
            const double a = g1(u, base);
            return a * g2(u, gauge_rescale(base, a));
        };
    }
    return out;
}

GaugeFunction parameter_gauge(const ExpressionField& f) {
    return [f](const Vec& u, const NullFrame&) {
        return f.evaluate(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
    };
}

double FrameResiduals::max() const {
    double m = 0.0;
    for (const auto& [name, v] : named()) m = std::max(m, v);
    return m;
}

std::vector<std::pair<std::string, double>> FrameResiduals::named() const {
    return {{"xi_null", xi_null},     {"nt_null", nt_null},       {"pairing", pairing},
            {"nt_screen", nt_screen}, {"xi_screen", xi_screen},   {"screen_orthonormal", screen_orthonormal},
            {"tangency", tangency}};
}

FrameResiduals validate_frame(const NullImmersion& imm, const NullFrame& fr) {
    FrameResiduals r;
    r.xi_null = std::abs(fr.inner(fr.xi, fr.xi));
    r.nt_null = std::abs(fr.inner(fr.nt, fr.nt));
    r.pairing = std::abs(fr.inner(fr.xi, fr.nt) - 1.0);
    const int n = fr.screen_dim();
    for (int i = 0; i < n; ++i) {
        const Vec e = fr.screen.col(i);
        r.nt_screen = std::max(r.nt_screen, std::abs(fr.inner(fr.nt, e)));
        r.xi_screen = std::max(r.xi_screen, std::abs(fr.inner(fr.xi, e)));
        for (int j = 0; j < n; ++j)
            r.screen_orthonormal =
                std::max(r.screen_orthonormal, std::abs(fr.inner(e, fr.screen.col(j)) - (i == j ? 1.0 : 0.0)));
    }
    Embedding emb;
    emb.x = fr.x;
    emb.J = fr.J;
    const Vec rad = radical_direction(imm, emb, fr.g);
    r.tangency = std::abs(fr.inner(fr.xi, rad));
    for (int i = 0; i < n; ++i) r.tangency = std::max(r.tangency, std::abs(fr.inner(fr.screen.col(i), rad)));
    return r;
}

}  // namespace nullgeo
