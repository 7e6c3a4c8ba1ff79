#pragma once

#include <stdexcept>
#include <string>

namespace movavg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientPrefixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UncertifiableParametersError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RationalRotationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnachievableCoverageError : std::runtime_error {
    UnachievableCoverageError(const std::string& msg, double achieved_)
        : std::runtime_error(msg), achieved(achieved_) {}
    double achieved;
};

struct WrapViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoWitnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TowerDoesNotFitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace movavg
