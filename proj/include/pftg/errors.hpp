#ifndef PFTG_ERRORS_HPP
#define PFTG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pftg {

// Scalar resolvent iteration failed to converge.
struct ResolventDivergence : std::runtime_error {
    explicit ResolventDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation asked of a potential kind that does not support it.
struct UnsupportedPotential : std::runtime_error {
    explicit UnsupportedPotential(const std::string& msg) : std::runtime_error(msg) {}
};

// Proliferation law paired with a potential it is not defined for.
struct IncompatiblePotential : std::runtime_error {
    explicit IncompatiblePotential(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinear solve did not reach tolerance within the iteration cap.
struct NewtonDivergence : std::runtime_error {
    explicit NewtonDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear system is singular for the given data, or the linear solver failed.
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& msg) : std::runtime_error(msg) {}
};

// Trajectory history too short for the requested reduction.
struct InsufficientHistory : std::runtime_error {
    explicit InsufficientHistory(const std::string& msg) : std::runtime_error(msg) {}
};

// Initial data violate the admissibility requirements of the model.
struct InvalidInitialData : std::runtime_error {
    explicit InvalidInitialData(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed snapshot or time-series file.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Snapshot grid does not match the grid it is being loaded into.
struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

// Config text could not be parsed; carries a 1-based line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Parsed config violates an invariant; the message names it.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pftg

#endif
