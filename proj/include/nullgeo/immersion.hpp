#pragma once

#include "nullgeo/ambient.hpp"

#include <memory>
#include <utility>

namespace nullgeo {

struct ImmersionSpec {
    std::vector<std::string> parameters;
    std::vector<std::string> components;  // one expression per ambient coordinate
    std::vector<std::pair<double, double>> domain;
    std::vector<int> grid;
    /// Radical directions are scaled so that g(xi, reference) == xi_scale.
    std::vector<std::string> xi_reference;  // ambient field; empty means e_0
    double xi_scale = 1.0;
};

/// Position, Jacobian and (optionally) second derivatives of the immersion.
struct Embedding {
    Vec x;
    Mat J;                       // m x (n+1)
    std::vector<Mat> hessians;   // per ambient component, (n+1) x (n+1)

    /// Second derivative of the immersion contracted with parameter vectors.
    Vec second(const Vec& a, const Vec& b) const;
};

/// Degenerate hypersurface given by a parametrization into an ambient manifold.
class NullImmersion {
public:
    NullImmersion(std::shared_ptr<const AmbientManifold> ambient, ImmersionSpec spec);

    const AmbientManifold& ambient() const { return *ambient_; }
    std::shared_ptr<const AmbientManifold> ambient_ptr() const { return ambient_; }
    const ImmersionSpec& spec() const { return spec_; }
    const VectorField& xi_reference() const { return reference_; }

    int param_dim() const { return static_cast<int>(spec_.parameters.size()); }
    int screen_dim() const { return param_dim() - 1; }

    Vec point(const Vec& u) const;
    Embedding embed(const Vec& u, bool second_order = false) const;

    /// Grid points in row-major order (first parameter slowest).
    std::vector<Vec> grid_points() const;
    std::vector<Vec> grid_points(const std::vector<int>& counts) const;

private:
    std::shared_ptr<const AmbientManifold> ambient_;
    ImmersionSpec spec_;
    std::vector<ExpressionField> components_;
    VectorField reference_;
};

struct GramReport {
    Mat gram;                // J^T g J
    Vec singular_values;     // descending
    Vec null_vector;         // parameter-space eigenvector of the smallest singular value
    double tol_rad = 0.0;
    bool degenerate = false;  // exactly one-dimensional radical
};

/// Throws GeometryError if the Jacobian is rank deficient.
GramReport induced_gram(const NullImmersion& imm, const Vec& u);

/// Radical direction pushed forward to the ambient space, scaled so that
/// g(xi, reference) equals the immersion's xi_scale. Throws GeometryError
/// when the radical is not one-dimensional or the reference is orthogonal.
Vec radical_direction(const NullImmersion& imm, const Vec& u);

/// Same, reusing an already computed embedding and metric.
Vec radical_direction(const NullImmersion& imm, const Embedding& emb, const Mat& g);

}  // namespace nullgeo
