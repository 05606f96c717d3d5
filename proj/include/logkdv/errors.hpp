#pragma once

#include <stdexcept>
#include <string>

namespace logkdv {

// Base class for all numerical failures raised by the library.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model
struct RegionP2Error : NumericalError {
    using NumericalError::NumericalError;
};
struct ConvergenceFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct NoBracketError : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularSystemError : NumericalError {
    using NumericalError::NumericalError;
};
struct InconsistentMatchError : NumericalError {
    using NumericalError::NumericalError;
};

// numerics
struct StepUnderflow : NumericalError {
    using NumericalError::NumericalError;
};
struct NonFiniteRhs : NumericalError {
    using NumericalError::NumericalError;
};
struct EventNotFound : NumericalError {
    using NumericalError::NumericalError;
};
struct NoConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};
struct OddGridError : NumericalError {
    using NumericalError::NumericalError;
};

// waves
struct OutsideAdmissibleRange : NumericalError {
    using NumericalError::NumericalError;
};
struct PeriodDetectionFailed : NumericalError {
    using NumericalError::NumericalError;
};
struct SignChangeError : NumericalError {
    using NumericalError::NumericalError;
};
struct DenominatorBlowup : NumericalError {
    using NumericalError::NumericalError;
};
struct MonotonicityViolation : NumericalError {
    using NumericalError::NumericalError;
};

// spectral
struct DegenerateCurvature : NumericalError {
    using NumericalError::NumericalError;
};
struct IntegrationFailure : NumericalError {
    using NumericalError::NumericalError;
};
struct InconsistentClassification : NumericalError {
    using NumericalError::NumericalError;
};

// stability
struct StencilFailure : NumericalError {
    using NumericalError::NumericalError;
};

// evolution
struct BlowupDetected : NumericalError {
    using NumericalError::NumericalError;
};

// cli
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace logkdv
