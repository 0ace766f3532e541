#pragma once

#include <stdexcept>
#include <string>

namespace distobs {

// Base of every error raised by the library. Callers that only care about
// "something in the pipeline failed" catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define DISTOBS_DEFINE_ERROR(Name)              \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

DISTOBS_DEFINE_ERROR(InvalidArgument);
DISTOBS_DEFINE_ERROR(NotObservable);
DISTOBS_DEFINE_ERROR(NotJointlyObservable);
DISTOBS_DEFINE_ERROR(AssignmentFailed);
DISTOBS_DEFINE_ERROR(ResidualTooLarge);
DISTOBS_DEFINE_ERROR(NotInvariant);
DISTOBS_DEFINE_ERROR(NotDoublyStochastic);
DISTOBS_DEFINE_ERROR(OutOfHorizon);
DISTOBS_DEFINE_ERROR(GenerationFailed);
DISTOBS_DEFINE_ERROR(NotHurwitz);
DISTOBS_DEFINE_ERROR(StepTooLarge);
DISTOBS_DEFINE_ERROR(DegenerateFit);
DISTOBS_DEFINE_ERROR(ParseError);
DISTOBS_DEFINE_ERROR(ValidationError);

#undef DISTOBS_DEFINE_ERROR

}  // namespace distobs
