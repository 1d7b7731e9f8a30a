#pragma once

#include "nullgeo/frame.hpp"

#include <memory>
#include <string>

namespace fixtures {

using namespace nullgeo;

inline std::shared_ptr<AmbientManifold> minkowski(int m) {
    MetricSpec s;
    const char* names[] = {"t", "x", "y", "z", "w"};
    for (int i = 0; i < m; ++i) s.coordinates.emplace_back(names[i]);
    s.components["g00"] = "-1";
    for (int i = 1; i < m; ++i) s.components["g" + std::to_string(i) + std::to_string(i)] = "1";
    return std::make_shared<AmbientManifold>(build_ambient({s, {}}));
}

/// Null hyperplane t = x in R^3_1 parametrized by (s, v) -> (s, s, v).
inline std::shared_ptr<NullImmersion> hyperplane3(double lo = -1, double hi = 1) {
    ImmersionSpec s;
    s.parameters = {"s", "v"};
    s.components = {"s", "s", "v"};
    s.domain = {{lo, hi}, {lo, hi}};
    s.grid = {5, 5};
    return std::make_shared<NullImmersion>(minkowski(3), s);
}

/// Upper light cone as a graph over (a1, a2).
inline std::shared_ptr<NullImmersion> light_cone(double lo = 0.36, double hi = 2.12) {
    ImmersionSpec s;
    s.parameters = {"a1", "a2"};
    s.components = {"sqrt(a1^2 + a2^2)", "a1", "a2"};
    s.domain = {{lo, hi}, {lo, hi}};
    s.grid = {5, 5};
    return std::make_shared<NullImmersion>(minkowski(3), s);
}

inline VectorField field(const std::vector<std::string>& src, const NullImmersion& imm) {
    return VectorField::parse(src, imm.ambient().coordinates());
}

inline Vec vec(std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) out(i++) = d;
    return out;
}

}  // namespace fixtures
