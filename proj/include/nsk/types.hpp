#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace nsk {

/// Nodal values of a scalar field on a uniform grid.
using Field = Eigen::ArrayXd;

/// Invalid pointwise input (non-positive volume, out-of-range constant).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Runtime numerical failure (positivity loss, non-finite values).
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iteration did not reach its target (shooting, root finding).
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nsk
