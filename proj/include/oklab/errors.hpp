#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace oklab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: files, CLI arguments, inconsistent dimensions. CLI exit code 2.
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

/// A numeric routine failed to reach its tolerance or found no admissible
/// parameter. CLI exit code 3.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Raised by elimination when the input basis is linearly dependent.
/// `index` names the offending basis element (0-based input position).
struct DependentBasisError : Error {
    std::size_t index;
    DependentBasisError(std::size_t index_, const std::string& what)
        : Error(what), index(index_) {}
};

/// A precondition on a region failed; carries the offending point
/// (in gradient/moment coordinates) for diagnostics.
struct RegionError : Error {
    std::vector<double> point;
    RegionError(std::vector<double> point_, const std::string& what)
        : Error(what), point(std::move(point_)) {}
};

} // namespace oklab
