#include "nullgeo/immersion.hpp"

#include <cmath>

namespace nullgeo {

Vec Embedding::second(const Vec& a, const Vec& b) const {
    Vec out(static_cast<Eigen::Index>(hessians.size()));
    for (std::size_t k = 0; k < hessians.size(); ++k) out(static_cast<Eigen::Index>(k)) = a.dot(hessians[k] * b);
    return out;
}

NullImmersion::NullImmersion(std::shared_ptr<const AmbientManifold> ambient, ImmersionSpec spec)
    : ambient_(std::move(ambient)), spec_(std::move(spec)) {
    const int m = ambient_->dim();
    const int p = param_dim();
    if (static_cast<int>(spec_.components.size()) != m)
        throw ConfigError("immersion needs " + std::to_string(m) + " components, got " +
                          std::to_string(spec_.components.size()));
    if (p != m - 1) throw ConfigError("a hypersurface needs " + std::to_string(m - 1) + " parameters");
    if (static_cast<int>(spec_.domain.size()) != p) throw ConfigError("domain must give one interval per parameter");
    if (spec_.grid.empty()) spec_.grid.assign(static_cast<std::size_t>(p), 16);
    if (static_cast<int>(spec_.grid.size()) != p) throw ConfigError("grid must give one count per parameter");
    for (int c : spec_.grid)
        if (c < 0) throw ConfigError("grid counts must be non-negative");
    for (const auto& [lo, hi] : spec_.domain)
        if (!(lo <= hi)) throw ConfigError("domain intervals must satisfy lo <= hi");
    for (const auto& s : spec_.components) components_.push_back(parse_expression(s, spec_.parameters));
    if (spec_.xi_reference.empty()) {
        reference_ = VectorField::constant(Vec::Unit(m, 0), ambient_->coordinates());
        spec_.xi_reference = reference_.sources();
    } else {
        reference_ = VectorField::parse(spec_.xi_reference, ambient_->coordinates());
    }
    if (!(spec_.xi_scale != 0.0)) throw ConfigError("xi_scale must be non-zero");
}

Vec NullImmersion::point(const Vec& u) const {
    Vec x(static_cast<Eigen::Index>(components_.size()));
    const std::span<const double> p(u.data(), static_cast<std::size_t>(u.size()));
    for (std::size_t k = 0; k < components_.size(); ++k) x(static_cast<Eigen::Index>(k)) = components_[k].evaluate(p);
    return x;
}

Embedding NullImmersion::embed(const Vec& u, bool second_order) const {
    const int m = ambient_->dim();
    const int p = param_dim();
    Embedding e;
    e.x.resize(m);
    e.J.resize(m, p);
    const std::span<const double> pt(u.data(), static_cast<std::size_t>(u.size()));
    for (int k = 0; k < m; ++k) {
        const Jet2 j = components_[static_cast<std::size_t>(k)].evaluate_jet(pt);
        e.x(k) = j.value();
        e.J.row(k) = j.gradient().transpose();
        if (second_order) e.hessians.emplace_back(j.hessian());
    }
    return e;
}

std::vector<Vec> NullImmersion::grid_points() const { return grid_points(spec_.grid); }

std::vector<Vec> NullImmersion::grid_points(const std::vector<int>& counts) const {
    const int p = param_dim();
    std::vector<Vec> out;
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(c);
    if (total == 0) return out;
    out.reserve(total);
    std::vector<int> idx(static_cast<std::size_t>(p), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Vec u(p);
        for (int a = 0; a < p; ++a) {
            const auto [lo, hi] = spec_.domain[static_cast<std::size_t>(a)];
            const int c = counts[static_cast<std::size_t>(a)];
            u(a) = c == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[static_cast<std::size_t>(a)] / (c - 1);
        }
        out.push_back(u);
        for (int a = p - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(a)]) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return out;
}

namespace {

GramReport gram_from(const Embedding& e, const Mat& g) {
    Eigen::JacobiSVD<Mat> jsvd(e.J);
    const Vec js = jsvd.singularValues();
    if (js(js.size() - 1) <= 1e-10 * js(0)) throw GeometryError("Jacobian is rank deficient (not an immersion)");

    GramReport r;
    r.gram = e.J.transpose() * g * e.J;
    r.gram = 0.5 * (r.gram + r.gram.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(r.gram);
    const Vec ev = es.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) > std::abs(ev(b)); });
    r.singular_values.resize(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) r.singular_values(i) = std::abs(ev(order[static_cast<std::size_t>(i)]));
    r.null_vector = es.eigenvectors().col(order.back());
    const Eigen::Index k = ev.size();
    r.tol_rad = 1e-8 * r.singular_values(0);
    r.degenerate = r.singular_values(k - 1) <= r.tol_rad && (k < 2 || r.singular_values(k - 2) >= 100.0 * r.tol_rad);
    return r;
}

}  // namespace

GramReport induced_gram(const NullImmersion& imm, const Vec& u) {
    const Embedding e = imm.embed(u);
    return gram_from(e, imm.ambient().metric(e.x));
}

Vec radical_direction(const NullImmersion& imm, const Embedding& emb, const Mat& g) {
    const GramReport r = gram_from(emb, g);
    if (!r.degenerate) {
        const Eigen::Index k = r.singular_values.size();
        const int dim = r.singular_values(k - 1) > r.tol_rad ? 0 : 2;
        throw GeometryError("degeneracy dimension is " + std::string(dim == 0 ? "0" : ">1") +
                            " (induced metric is not null-degenerate)");
    }
    const Vec xi0 = emb.J * r.null_vector;
    const Vec ref = imm.xi_reference().evaluate(emb.x);
    const double s = xi0.dot(g * ref);
    if (std::abs(s) <= 1e-12 * xi0.norm() * std::max(1.0, ref.norm()))
        throw GeometryError("reference field is orthogonal to the radical direction");
    return (imm.spec().xi_scale / s) * xi0;
}

Vec radical_direction(const NullImmersion& imm, const Vec& u) {
    const Embedding e = imm.embed(u);
    return radical_direction(imm, e, imm.ambient().metric(e.x));
}

}  // namespace nullgeo
