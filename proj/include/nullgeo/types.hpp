#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nullgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Numerical contract shared by every check.
struct Tolerances {
    double exact = 1e-9;  // quantities computed from jets only
    double fd = 1e-5;     // quantities contaminated by finite differences
    double rel = 1e-6;    // relative spread used for "constant"
    double floor = 1e-9;  // absolute floor for spreads and non-null tests
    double step = 1e-4;   // finite-difference step in parameter space
};

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nullgeo
