#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jointphase {

/// Raised when a computation produces non-finite or otherwise unusable numbers.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The overlap between two states fell below the orthogonality floor, so
/// their relative phase is undefined.
class OrthogonalStates : public NumericalError {
public:
    OrthogonalStates(double overlap, double floor);

    double overlap() const noexcept { return overlap_; }

private:
    double overlap_;
};

/// Malformed configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, std::string field, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace jointphase
