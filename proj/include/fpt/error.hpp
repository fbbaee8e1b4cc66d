#pragma once

#include <stdexcept>
#include <string>

namespace fpt {

/// Base of every library error. `name()` is the stable identifier printed by
/// the CLI on the diagnostic stream.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

    /// Invalid input (exit code 2 at the CLI) as opposed to a numerical failure.
    virtual bool is_input_error() const noexcept { return false; }

private:
    std::string name_;
};

#define FPT_DEFINE_ERROR(Type, input)                                        \
    class Type : public Error {                                              \
    public:                                                                  \
        explicit Type(const std::string& what) : Error(#Type, what) {}      \
        bool is_input_error() const noexcept override { return input; }     \
    };

FPT_DEFINE_ERROR(NonConvexBoundary, true)
FPT_DEFINE_ERROR(NonPositiveGap, true)
FPT_DEFINE_ERROR(InvalidBoundary, true)
FPT_DEFINE_ERROR(OutOfTabulatedRange, true)
FPT_DEFINE_ERROR(DomainError, true)
FPT_DEFINE_ERROR(DegenerateBoundary, true)
FPT_DEFINE_ERROR(InvalidArgument, true)
FPT_DEFINE_ERROR(GridTooCoarse, true)
FPT_DEFINE_ERROR(QuadratureFailure, false)
FPT_DEFINE_ERROR(NonConvergence, false)
FPT_DEFINE_ERROR(DeltaApproximationError, false)
FPT_DEFINE_ERROR(NonPositiveField, false)

#undef FPT_DEFINE_ERROR

}  // namespace fpt
