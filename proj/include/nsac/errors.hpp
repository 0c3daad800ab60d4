#pragma once

#include <stdexcept>
#include <string>

namespace nsac {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range run configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operands live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// A geometric query that needs the orthogonal projection was made outside
/// the tubular neighbourhood where the projection is defined.
class OutOfTubeError : public Error {
public:
    using Error::Error;
};

class UnsupportedScenarioError : public Error {
public:
    using Error::Error;
};

/// Linear solver failed to reach its tolerance; carries the final residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Simulation state left the physically admissible set (e.g. rho <= 0).
class StateCorruptionError : public Error {
public:
    using Error::Error;
};

class CflViolationError : public Error {
public:
    using Error::Error;
};

}  // namespace nsac
