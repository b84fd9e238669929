#pragma once

#include <stdexcept>
#include <string>

namespace todkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error { using Error::Error; };
struct SingularPointError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct AxisEvaluationError : Error { using Error::Error; };
struct DegenerateMetricError : Error { using Error::Error; };
struct DegenerateCaseError : Error { using Error::Error; };

struct InversionFailure : Error {
    InversionFailure(const std::string& msg, double residual)
        : Error(msg), last_residual(residual) {}
    double last_residual;
};

}  // namespace todkit
