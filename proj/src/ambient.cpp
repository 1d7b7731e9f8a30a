#include "nullgeo/ambient.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <regex>

namespace nullgeo {

VectorField::VectorField(std::vector<ExpressionField> components) : components_(std::move(components)) {}

VectorField VectorField::parse(const std::vector<std::string>& sources, const std::vector<std::string>& coordinates) {
    if (sources.size() != coordinates.size())
        throw Error("vector field has " + std::to_string(sources.size()) + " components, expected " +
                    std::to_string(coordinates.size()));
    std::vector<ExpressionField> comps;
    comps.reserve(sources.size());
    for (const auto& s : sources) comps.push_back(parse_expression(s, coordinates));
    return VectorField(std::move(comps));
}

VectorField VectorField::constant(const Vec& components, const std::vector<std::string>& coordinates) {
    std::vector<std::string> sources;
    for (Eigen::Index i = 0; i < components.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", components(i));
        sources.emplace_back(components(i) < 0 ? "(" + std::string(buf) + ")" : std::string(buf));
    }
    return parse(sources, coordinates);
}

std::vector<std::string> VectorField::sources() const {
    std::vector<std::string> out;
    for (const auto& c : components_) out.push_back(c.source());
    return out;
}

Vec VectorField::evaluate(const Vec& x) const {
    Vec v(dim());
    for (int k = 0; k < dim(); ++k) v(k) = components_[static_cast<std::size_t>(k)].evaluate({x.data(), static_cast<std::size_t>(x.size())});
    return v;
}

Mat VectorField::jacobian(const Vec& x) const {
    Mat jac(dim(), x.size());
    for (int k = 0; k < dim(); ++k) {
        const Jet2 j = components_[static_cast<std::size_t>(k)].evaluate_jet({x.data(), static_cast<std::size_t>(x.size())});
        jac.row(k) = j.gradient().transpose();
    }
    return jac;
}

Vec Christoffel::contract(const Vec& X, const Vec& Y) const {
    Vec out = Vec::Zero(dim_);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i) {
            if (X(i) == 0.0) continue;
            for (int j = 0; j < dim_; ++j) out(k) += (*this)(k, i, j) * X(i) * Y(j);
        }
    return out;
}

AmbientManifold::AmbientManifold(std::vector<std::string> coordinates, std::vector<std::string> metric_sources)
    : coordinates_(std::move(coordinates)), sources_(std::move(metric_sources)) {
    const int m = dim();
    if (m < 2 || m > kMaxJetVars) throw GeometryError("ambient dimension must be in [2, " + std::to_string(kMaxJetVars) + "]");
    if (static_cast<int>(sources_.size()) != m * m) throw GeometryError("metric must have dim^2 component sources");
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            components_.push_back(parse_expression(sources_[static_cast<std::size_t>(i * m + j)], coordinates_));
}

int AmbientManifold::component_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    const int m = dim();
    return i * m - i * (i - 1) / 2 + (j - i);
}

const std::string& AmbientManifold::metric_source(int i, int j) const {
    return sources_[static_cast<std::size_t>(i * dim() + j)];
}

Mat AmbientManifold::metric(const Vec& x) const {
    const int m = dim();
    Mat g(m, m);
    const std::span<const double> p(x.data(), static_cast<std::size_t>(x.size()));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            g(i, j) = components_[static_cast<std::size_t>(component_index(i, j))].evaluate(p);
            g(j, i) = g(i, j);
        }
    return g;
}

MetricJet AmbientManifold::metric_jet(const Vec& x) const {
    const int m = dim();
    MetricJet out;
    out.g = Mat::Zero(m, m);
    out.dg.assign(static_cast<std::size_t>(m), Mat::Zero(m, m));
    out.ddg.assign(static_cast<std::size_t>(m), std::vector<Mat>(static_cast<std::size_t>(m), Mat::Zero(m, m)));
    const std::span<const double> p(x.data(), static_cast<std::size_t>(x.size()));
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const Jet2 jet = components_[static_cast<std::size_t>(component_index(i, j))].evaluate_jet(p);
            out.g(i, j) = out.g(j, i) = jet.value();
            for (int c = 0; c < m; ++c) {
                out.dg[static_cast<std::size_t>(c)](i, j) = out.dg[static_cast<std::size_t>(c)](j, i) = jet.gradient()(c);
                for (int d = 0; d < m; ++d)
                    out.ddg[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)](i, j) =
                        out.ddg[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)](j, i) = jet.hessian()(c, d);
            }
        }
    return out;
}

namespace {

Mat checked_inverse(const Mat& g) {
    Eigen::FullPivLU<Mat> lu(g);
    if (!lu.isInvertible()) throw GeometryError("singular metric");
    return lu.inverse();
}

Christoffel christoffel_from_jet(const MetricJet& jet, const Mat& ginv) {
    const int m = static_cast<int>(jet.g.rows());
    Christoffel gamma(m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            Vec s(m);
            for (int l = 0; l < m; ++l)
                s(l) = jet.dg[static_cast<std::size_t>(i)](j, l) + jet.dg[static_cast<std::size_t>(j)](i, l) -
                       jet.dg[static_cast<std::size_t>(l)](i, j);
            const Vec g = 0.5 * ginv * s;
            for (int k = 0; k < m; ++k) gamma(k, i, j) = gamma(k, j, i) = g(k);
        }
    return gamma;
}

}  // namespace

Christoffel AmbientManifold::christoffel(const Vec& x) const {
    const MetricJet jet = metric_jet(x);
    return christoffel_from_jet(jet, checked_inverse(jet.g));
}

Vec AmbientManifold::covariant_derivative(const VectorField& V, const Vec& x, const Vec& X) const {
    return V.jacobian(x) * X + christoffel(x).contract(X, V.evaluate(x));
}

Vec AmbientManifold::riemann(const Vec& x, const Vec& X, const Vec& Y, const Vec& U) const {
    const int m = dim();
    const MetricJet jet = metric_jet(x);
    const Mat ginv = checked_inverse(jet.g);
    const Christoffel gamma = christoffel_from_jet(jet, ginv);

    // dgamma[c](k, i, j) = d_c Gamma^k_ij
    std::vector<Christoffel> dgamma(static_cast<std::size_t>(m), Christoffel(m));
    for (int c = 0; c < m; ++c) {
        const Mat dginv = -ginv * jet.dg[static_cast<std::size_t>(c)] * ginv;
        const auto& dd = jet.ddg[static_cast<std::size_t>(c)];
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                Vec s(m), ds(m);
                for (int l = 0; l < m; ++l) {
                    s(l) = jet.dg[static_cast<std::size_t>(i)](j, l) + jet.dg[static_cast<std::size_t>(j)](i, l) -
                           jet.dg[static_cast<std::size_t>(l)](i, j);
                    ds(l) = dd[static_cast<std::size_t>(i)](j, l) + dd[static_cast<std::size_t>(j)](i, l) -
                            dd[static_cast<std::size_t>(l)](i, j);
                }
                const Vec v = 0.5 * (dginv * s + ginv * ds);
                for (int k = 0; k < m; ++k) dgamma[static_cast<std::size_t>(c)](k, i, j) = dgamma[static_cast<std::size_t>(c)](k, j, i) = v(k);
            }
    }

    Vec out = Vec::Zero(m);
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
            if (U(l) == 0.0) continue;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const double xy = X(i) * Y(j);
                    if (xy == 0.0) continue;
                    double r = dgamma[static_cast<std::size_t>(i)](k, j, l) - dgamma[static_cast<std::size_t>(j)](k, i, l);
                    for (int a = 0; a < m; ++a) r += gamma(k, i, a) * gamma(a, j, l) - gamma(k, j, a) * gamma(a, i, l);
                    out(k) += r * U(l) * xy;
                }
        }
    return out;
}

double AmbientManifold::symmetry_defect(const Vec& x) const {
    const Mat g = metric(x);
    return (g - g.transpose()).cwiseAbs().maxCoeff();
}

void AmbientManifold::check_lorentzian(const Vec& x) const {
    const Mat g = metric(x);
    if (!g.allFinite()) throw GeometryError("metric is not finite at check point");
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const Vec ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    int negative = 0, zero = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) <= 1e-12 * scale) ++zero;
        else if (ev(i) < 0) ++negative;
    }
    if (zero > 0 || negative != 1)
        throw GeometryError("metric is not Lorentzian at check point (" + std::to_string(negative) +
                            " negative, " + std::to_string(zero) + " zero eigenvalues)");
}

namespace {

std::vector<std::string> full_sources(const MetricSpec& spec) {
    const int m = static_cast<int>(spec.coordinates.size());
    if (m < 1 || m > 9) throw ConfigError("metric dimension must be in [1, 9]");
    std::vector<std::string> src(static_cast<std::size_t>(m * m), "0");
    std::vector<bool> seen(static_cast<std::size_t>(m * m), false);
    static const std::regex key_re("g([0-9])([0-9])");
    for (const auto& [key, value] : spec.components) {
        std::smatch match;
        if (!std::regex_match(key, match, key_re))
            throw ConfigError("unknown metric key '" + key + "' (expected gij)");
        int i = std::stoi(match[1].str()), j = std::stoi(match[2].str());
        if (i >= m || j >= m) throw ConfigError("metric key '" + key + "' out of range for dimension " + std::to_string(m));
        if (i > j) std::swap(i, j);
        if (seen[static_cast<std::size_t>(i * m + j)]) throw ConfigError("metric key '" + key + "' given twice");
        seen[static_cast<std::size_t>(i * m + j)] = true;
        src[static_cast<std::size_t>(i * m + j)] = value;
        src[static_cast<std::size_t>(j * m + i)] = value;
    }
    return src;
}

}  // namespace

AmbientManifold assemble_grw(const GRWSpec& spec) {
    if (!(spec.t_min < spec.t_max)) throw ConfigError("GRW interval must satisfy t_min < t_max");
    const ExpressionField warp = parse_expression(spec.warp, {spec.time});
    for (int i = 0; i <= 64; ++i) {
        const double t = spec.t_min + (spec.t_max - spec.t_min) * i / 64.0;
        const double w = warp.evaluate(std::span<const double>(&t, 1));
        if (!(w > 0.0)) throw GeometryError("warping function must be positive on the interval (fails at t=" + std::to_string(t) + ")");
    }

    const auto fiber = full_sources(spec.fiber);
    const int k = static_cast<int>(spec.fiber.coordinates.size());
    const int m = k + 1;
    std::vector<std::string> coords{spec.time};
    coords.insert(coords.end(), spec.fiber.coordinates.begin(), spec.fiber.coordinates.end());
    std::vector<std::string> src(static_cast<std::size_t>(m * m), "0");
    src[0] = "-1";
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const std::string& f = fiber[static_cast<std::size_t>(i * k + j)];
            if (f == "0") continue;
            src[static_cast<std::size_t>((i + 1) * m + (j + 1))] = "(" + spec.warp + ")^2*(" + f + ")";
        }
    return AmbientManifold(std::move(coords), std::move(src));
}

AmbientManifold build_ambient(const AmbientSpec& spec) {
    AmbientManifold M = std::visit(
        [](const auto& form) -> AmbientManifold {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, MetricSpec>) {
                return AmbientManifold(form.coordinates, full_sources(form));
            } else {
                return assemble_grw(form);
            }
        },
        spec.form);
    for (const auto& p : spec.check_points) {
        if (static_cast<int>(p.size()) != M.dim()) throw ConfigError("signature check point has wrong dimension");
        M.check_lorentzian(Eigen::Map<const Vec>(p.data(), static_cast<Eigen::Index>(p.size())));
    }
    return M;
}

bool closed_conformal_factor(const AmbientManifold& M, const VectorField& Z, const Vec& x, double floor,
                             double& phi, double& residual) {
    const int m = M.dim();
    const Mat g = M.metric(x);
    const Christoffel gamma = M.christoffel(x);
    const Mat dZ = Z.jacobian(x);
    const Vec z = Z.evaluate(x);
    int axis = -1;
    for (int i = 0; i < m; ++i)
        if (std::abs(g(i, i)) > floor) {
            axis = i;
            break;
        }
    if (axis < 0) return false;
    auto nabla = [&](int i) {
        const Vec e = Vec::Unit(m, i);
        return Vec(dZ * e + gamma.contract(e, z));
    };
    const Vec e = Vec::Unit(m, axis);
    phi = e.dot(g * nabla(axis)) / g(axis, axis);
    residual = 0.0;
    for (int i = 0; i < m; ++i) residual = std::max(residual, (nabla(i) - phi * Vec::Unit(m, i)).norm());
    return true;
}

CCReport cc_test(const AmbientManifold& M, const VectorField& Z, const std::vector<Vec>& samples, double tol) {
    CCReport rep;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double phi = 0.0, res = 0.0;
        if (!closed_conformal_factor(M, Z, samples[s], 1e-12, phi, res)) {
            rep.skipped.push_back(s);
            continue;
        }
        rep.phi.push_back(phi);
        rep.residual.push_back(res);
        if (!(res <= tol)) rep.is_cc = false;
    }
    return rep;
}

SpaceformReport spaceform_residual(const AmbientManifold& M, double c, const std::vector<Vec>& samples,
                                   std::uint64_t seed, int triples_per_sample) {
    SpaceformReport rep;
    rep.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int m = M.dim();
    auto draw = [&] {
        Vec v(m);
        for (int i = 0; i < m; ++i) v(i) = unit(rng);
        return v;
    };
    for (const auto& x : samples) {
        const Mat g = M.metric(x);
        for (int t = 0; t < triples_per_sample; ++t) {
            const Vec X = draw(), Y = draw(), U = draw();
            const Vec model = c * ((Y.dot(g * U)) * X - (X.dot(g * U)) * Y);
            rep.max_residual = std::max(rep.max_residual, (M.riemann(x, X, Y, U) - model).norm());
            ++rep.evaluations;
        }
    }
    return rep;
}

}  // namespace nullgeo
