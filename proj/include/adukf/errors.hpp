#pragma once

#include <stdexcept>
#include <string>

namespace adukf {

/// Base class for every failure raised by a numerical routine.
/// The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ADUKF_DEFINE_ERROR(Name)                     \
    class Name : public NumericalError {             \
    public:                                          \
        using NumericalError::NumericalError;        \
    }

ADUKF_DEFINE_ERROR(IndefiniteMatrix);
ADUKF_DEFINE_ERROR(DowndateBreaksPD);
ADUKF_DEFINE_ERROR(NegativeRadicand);
ADUKF_DEFINE_ERROR(DegenerateWeights);
ADUKF_DEFINE_ERROR(SingularInnovation);
ADUKF_DEFINE_ERROR(IntegrationFailure);
ADUKF_DEFINE_ERROR(MaxIterations);
ADUKF_DEFINE_ERROR(LineSearchFailure);
ADUKF_DEFINE_ERROR(InfeasibleStart);
ADUKF_DEFINE_ERROR(ZeroNormalizer);

#undef ADUKF_DEFINE_ERROR

/// Invalid user input (config file, CLI flag, CSV schema). Exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace adukf
