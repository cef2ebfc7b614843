#pragma once

#include <stdexcept>
#include <string>

namespace mag {

/// Base class of all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data: bad distance matrices, bad domain specs, bad files.
struct InvalidInput : Error {
    using Error::Error;
};

/// The similarity kernel failed to factorize, or its estimated condition
/// number is past the refusal threshold. Carries the estimate when known.
struct NotPositiveDefinite : Error {
    double condition_estimate;
    explicit NotPositiveDefinite(const std::string& what, double cond = 0.0)
        : Error(what), condition_estimate(cond) {}
};

struct DegenerateMesh : Error {
    using Error::Error;
};

struct NonConvexSpec : Error {
    using Error::Error;
};

struct MissingLambda : Error {
    using Error::Error;
};

struct CalibrationUnstable : Error {
    using Error::Error;
};

struct RankDeficient : Error {
    using Error::Error;
};

namespace sym {

struct CutoffTooLow : Error {
    using Error::Error;
};

struct NotElliptic : Error {
    using Error::Error;
};

struct UnboundScalar : Error {
    using Error::Error;
};

struct JetTooShallow : Error {
    using Error::Error;
};

} // namespace sym
} // namespace mag
