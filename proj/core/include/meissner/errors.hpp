#pragma once

#include <stdexcept>
#include <string>

namespace meissner {

enum class ErrorKind {
    OutOfDomain,
    InvalidSpec,
    PlacementMismatch,
    GridMismatch,
    SolverFailure,
    NonPositiveCoefficient,
    NotConverged,
    OutOfK,
    NeverEntersK,
    UnboundedThreshold,
    BudgetExceeded,
    ZeroDatum,
    NonGradientData,
    NonzeroMean,
    NonzeroFlux,
    Incompatible,
    SamplingMismatch,
    AboveThreshold,
    MissingColumn,
    NonPositiveLogData,
    ConfigInvalid,
    IoFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace meissner
