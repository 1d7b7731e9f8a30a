#pragma once

#include "nullgeo/config.hpp"

namespace nullgeo {

/// Names of the shipped entries, in a fixed order.
const std::vector<std::string>& catalog_names();

/// A ready-to-run configuration with its expected verdicts. Throws ConfigError
/// for unknown names.
RunConfig entry(const std::string& name);

/// Warp, fiber metric and a function f on the fiber with |grad f| = warp(f).
struct Transnormal {
    std::string warp;  // in the variable t
    MetricSpec fiber;
    std::string f;
    std::vector<std::pair<double, double>> domain;  // fiber chart box
};

/// Shipped transnormal functions for warp "1", "id", "cosh" and "cos".
Transnormal transnormal_defaults(const std::string& warp);

/// max ||grad f| - warp(f)| over a `per_axis`^dim grid of the fiber box.
double transnormal_residual(const Transnormal& t, int per_axis = 6);

}  // namespace nullgeo
