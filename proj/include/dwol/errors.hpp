#pragma once

#include <stdexcept>
#include <string>

namespace dwol {

// Base class for all numerical and contract failures raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DWOL_DEFINE_ERROR(Name)          \
    class Name : public Error {          \
    public:                              \
        using Error::Error;              \
    }

DWOL_DEFINE_ERROR(InvalidParameters);
DWOL_DEFINE_ERROR(NonConfining);
DWOL_DEFINE_ERROR(AxisMismatch);
DWOL_DEFINE_ERROR(IndexTooLarge);
DWOL_DEFINE_ERROR(QuadratureFailure);
DWOL_DEFINE_ERROR(DegenerateCorrection);
DWOL_DEFINE_ERROR(SingularSystem);
DWOL_DEFINE_ERROR(FrameMismatch);
DWOL_DEFINE_ERROR(GridMismatch);
DWOL_DEFINE_ERROR(NonFiniteAmplitude);
DWOL_DEFINE_ERROR(StepUnderflow);
DWOL_DEFINE_ERROR(NoConvergence);
DWOL_DEFINE_ERROR(BoundaryContamination);

#undef DWOL_DEFINE_ERROR

}  // namespace dwol
