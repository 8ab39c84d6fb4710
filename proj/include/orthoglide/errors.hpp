#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace orthoglide {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad argument values, out-of-range parameters, malformed requests.
struct DomainError : Error {
    using Error::Error;
};

/// Model-file / design-file parse failures; carries a location string.
struct ParseError : Error {
    std::string location;
    ParseError(std::string loc, const std::string& what)
        : Error(loc.empty() ? what : loc + ": " + what), location(std::move(loc)) {}
};

/// Base for position-kinematics failures (CLI maps these to exit code 2).
struct KinematicError : Error {
    using Error::Error;
};

/// Inverse kinematics: some leg cannot reach the requested point.
struct UnreachableError : KinematicError {
    /// Per leg: w_i - L^2 when positive (squared reach excess), else 0.
    std::array<double, 3> reach_excess{};
    UnreachableError(const std::string& what, std::array<double, 3> excess)
        : KinematicError(what), reach_excess(excess) {}
};

/// Forward kinematics: the three spheres have no common point.
struct NoAssemblyError : KinematicError {
    using KinematicError::KinematicError;
};

/// Forward kinematics: two roots exist and neither is acceptable.
struct AmbiguousAssemblyError : KinematicError {
    using KinematicError::KinematicError;
};

/// Requested quantity is unavailable at a singular configuration.
struct SingularError : Error {
    using Error::Error;
};

}  // namespace orthoglide
