#pragma once

#include "nullgeo/expression.hpp"
#include "nullgeo/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nullgeo {

/// Vector field with closed-form components over the ambient coordinates.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(std::vector<ExpressionField> components);

    static VectorField parse(const std::vector<std::string>& sources,
                             const std::vector<std::string>& coordinates);

    /// Constant field with the given components.
    static VectorField constant(const Vec& components, const std::vector<std::string>& coordinates);

    int dim() const { return static_cast<int>(components_.size()); }
    bool empty() const { return components_.empty(); }
    std::vector<std::string> sources() const;

    Vec evaluate(const Vec& x) const;

    /// jac(k, i) = d_i V^k.
    Mat jacobian(const Vec& x) const;

private:
    std::vector<ExpressionField> components_;
};

/// Christoffel symbols of the second kind, indexed (k, i, j) for Gamma^k_ij.
class Christoffel {
public:
    explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

    /// Gamma^k_ij X^i Y^j.
    Vec contract(const Vec& X, const Vec& Y) const;

private:
    std::size_t index(int k, int i, int j) const {
        return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
    }
    int dim_;
    std::vector<double> data_;
};

/// Metric components with first and second coordinate derivatives at a point.
struct MetricJet {
    Mat g;
    std::vector<Mat> dg;                // dg[c](i, j) = d_c g_ij
    std::vector<std::vector<Mat>> ddg;  // ddg[c][d](i, j) = d_c d_d g_ij
};

/// Explicit metric: coordinate names and components keyed "gij" (i <= j).
/// Missing components are zero.
struct MetricSpec {
    std::vector<std::string> coordinates;
    std::map<std::string, std::string> components;
};

/// Generalized Robertson-Walker warped product -dt^2 + warp(t)^2 g_F.
struct GRWSpec {
    std::string time = "t";
    double t_min = 0.0;
    double t_max = 1.0;
    std::string warp = "1";
    MetricSpec fiber;
};

struct AmbientSpec {
    std::variant<MetricSpec, GRWSpec> form;
    std::vector<std::vector<double>> check_points;
};

class AmbientManifold {
public:
    AmbientManifold(std::vector<std::string> coordinates, std::vector<std::string> metric_sources);

    int dim() const { return static_cast<int>(coordinates_.size()); }
    const std::vector<std::string>& coordinates() const { return coordinates_; }

    /// Source text of g_ij, row-major full matrix.
    const std::string& metric_source(int i, int j) const;

    Mat metric(const Vec& x) const;
    MetricJet metric_jet(const Vec& x) const;
    double inner(const Vec& x, const Vec& X, const Vec& Y) const { return X.dot(metric(x) * Y); }

    Christoffel christoffel(const Vec& x) const;

    /// Levi-Civita derivative of V along X at x: dV(X) + Gamma(X, V).
    Vec covariant_derivative(const VectorField& V, const Vec& x, const Vec& X) const;

    /// R(X,Y)U = nabla_X nabla_Y U - nabla_Y nabla_X U - nabla_[X,Y] U.
    Vec riemann(const Vec& x, const Vec& X, const Vec& Y, const Vec& U) const;

    /// Throws GeometryError unless the metric at x has exactly one negative
    /// eigenvalue and is symmetric.
    void check_lorentzian(const Vec& x) const;

    /// Largest |g - g^T| entry over the given points.
    double symmetry_defect(const Vec& x) const;

private:
    std::vector<std::string> coordinates_;
    std::vector<std::string> sources_;
    std::vector<ExpressionField> components_;  // upper triangle, row-major
    int component_index(int i, int j) const;
};

AmbientManifold build_ambient(const AmbientSpec& spec);

/// Assembles the warped-product metric; checks warp > 0 on the interval.
AmbientManifold assemble_grw(const GRWSpec& spec);

struct CCReport {
    bool is_cc = true;
    std::vector<double> phi;
    std::vector<double> residual;
    std::vector<std::size_t> skipped;  // samples with every basis vector null
};

/// Conformal factor of Z at x from the first non-null coordinate axis.
/// Returns false when every axis is null.
bool closed_conformal_factor(const AmbientManifold& M, const VectorField& Z, const Vec& x, double floor,
                             double& phi, double& residual);

CCReport cc_test(const AmbientManifold& M, const VectorField& Z, const std::vector<Vec>& samples,
                 double tol);

struct SpaceformReport {
    double max_residual = 0.0;
    std::uint64_t seed = 0;
    std::size_t evaluations = 0;
};

/// max |R(X,Y)U - c (g(Y,U) X - g(X,U) Y)| over seeded random triples from the
/// unit box at each sample.
SpaceformReport spaceform_residual(const AmbientManifold& M, double c, const std::vector<Vec>& samples,
                                   std::uint64_t seed, int triples_per_sample = 1);

}  // namespace nullgeo
