#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace phasebound {

/// Shortest readable form of a real for messages and labels (%.6g).
inline std::string format_real(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

/// Base of every error raised by the library. Carries the name of the module
/// that raised it so that front ends can report provenance.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

#define PHASEBOUND_ERROR(Name)          \
    class Name : public Error {         \
    public:                             \
        using Error::Error;             \
    }

PHASEBOUND_ERROR(DomainError);
PHASEBOUND_ERROR(TruncationError);
PHASEBOUND_ERROR(SpaceMismatch);
PHASEBOUND_ERROR(NumericalError);
PHASEBOUND_ERROR(DegenerateState);
PHASEBOUND_ERROR(WeightError);
PHASEBOUND_ERROR(PovmBoundError);
PHASEBOUND_ERROR(ConvergenceError);
PHASEBOUND_ERROR(QuadratureError);
PHASEBOUND_ERROR(SingularP);
PHASEBOUND_ERROR(InfiniteTrace);
PHASEBOUND_ERROR(NotGaussian);
PHASEBOUND_ERROR(DensityUnsupported);
PHASEBOUND_ERROR(TailError);
PHASEBOUND_ERROR(UnsupportedJ);
PHASEBOUND_ERROR(ConfigError);
PHASEBOUND_ERROR(IoError);

#undef PHASEBOUND_ERROR

}  // namespace phasebound
