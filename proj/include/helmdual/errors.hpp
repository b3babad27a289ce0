#pragma once

#include <stdexcept>
#include <string>

namespace helmdual {

/// Base class for every error the library throws on contract violation.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Exponent pair outside the admissible region. `code` is machine-readable:
/// below-lower-p, below-lower-q, hyperbola-low, hyperbola-high.
struct RegionViolation : Error {
    std::string code;
    RegionViolation(std::string c, const std::string& what)
        : Error(what), code(std::move(c)) {}
};

struct DegenerateScaling : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct BadResolution : Error { using Error::Error; };
struct NonLatticeShift : Error { using Error::Error; };
struct FloorViolation : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct SingularGrid : Error { using Error::Error; };
struct ZeroState : Error { using Error::Error; };
struct NotInPositiveCone : Error { using Error::Error; };
struct NoDescentDirection : Error { using Error::Error; };
struct SeedOutsideCone : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace helmdual
