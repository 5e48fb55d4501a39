#pragma once

#include <stdexcept>
#include <string>

namespace hpoisson {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live on different charts.
class ChartMismatch : public Error {
public:
    explicit ChartMismatch(const std::string& where)
        : Error("chart mismatch in " + where) {}
};

/// A value has the wrong degree, or is inhomogeneous where a homogeneous value is required.
class DegreeError : public Error {
public:
    using Error::Error;
};

/// Raised when an intermediate polynomial exceeds the active degree limit.
class DegreeLimitExceeded : public Error {
public:
    DegreeLimitExceeded(int degree, int limit)
        : Error("intermediate polynomial degree " + std::to_string(degree) +
                " exceeds --max-degree " + std::to_string(limit)),
          degree_(degree), limit_(limit) {}

    int degree() const noexcept { return degree_; }
    int limit() const noexcept { return limit_; }

private:
    int degree_;
    int limit_;
};

} // namespace hpoisson
