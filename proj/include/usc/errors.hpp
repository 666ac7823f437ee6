// errors.hpp: exception types shared by every module.

#pragma once

#include <stdexcept>
#include <string>

namespace usc {

// Base of everything this library throws. kind() is a stable identifier used
// in sweep output flag columns and validation reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define USC_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

USC_DEFINE_ERROR(InvalidParameter);
USC_DEFINE_ERROR(BeyondThreshold);
USC_DEFINE_ERROR(NotResonant);
USC_DEFINE_ERROR(DimensionCap);
USC_DEFINE_ERROR(DimensionMismatch);
USC_DEFINE_ERROR(ConvergenceError);
USC_DEFINE_ERROR(SolverFailure);
USC_DEFINE_ERROR(StepTooSmall);
USC_DEFINE_ERROR(SingularDrift);
USC_DEFINE_ERROR(NoRootInBracket);
USC_DEFINE_ERROR(GridTooCoarse);
USC_DEFINE_ERROR(InvalidSpec);
USC_DEFINE_ERROR(IoError);

#undef USC_DEFINE_ERROR

}  // namespace usc
