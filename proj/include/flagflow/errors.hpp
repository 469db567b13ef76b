#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flagflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violated a documented precondition (wrong shape, not symmetric, not tangent, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two operands belong to different algebra contexts.
class ContextMismatchError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A column of a flag basis became (numerically) dependent on the previous ones.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, std::size_t column)
        : Error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// An eigenvalue gap sits too close to the grouping tolerance to decide block membership.
class GroupingAmbiguityError : public Error {
public:
    using Error::Error;
};

/// A height function whose matrix has (nearly) repeated eigenvalues.
class GenericityError : public Error {
public:
    using Error::Error;
};

/// The adaptive integrator could not make progress.
class StiffnessError : public Error {
public:
    StiffnessError(const std::string& what, double t, double dt, double state_norm)
        : Error(what), t_(t), dt_(dt), state_norm_(state_norm) {}

    double time() const noexcept { return t_; }
    double step() const noexcept { return dt_; }
    double state_norm() const noexcept { return state_norm_; }

private:
    double t_;
    double dt_;
    double state_norm_;
};

}  // namespace flagflow
