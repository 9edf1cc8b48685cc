#ifndef TRACELAB_ERRORS_HPP
#define TRACELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tracelab {

// Error taxonomy mirrors the CLI exit-code contract:
//   input/precondition problems -> exit 2
//   budget refusals             -> exit 3
//   failed verifications        -> exit 1
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input (rationals, configurations, edge lists).
struct ParseError : Error {
    using Error::Error;
};

// A call violated a documented precondition.
struct PreconditionError : Error {
    using Error::Error;
};

// encode() was asked for a value with no terminating digit expansion.
struct NonTerminating : PreconditionError {
    using PreconditionError::PreconditionError;
};

// decode() on a configuration whose left tail is nonzero (value diverges).
struct LeftTailNonzero : PreconditionError {
    using PreconditionError::PreconditionError;
};

// A reconstruction rule was queried outside its realizable domain.
struct UndefinedTriple : PreconditionError {
    using PreconditionError::PreconditionError;
};

// An enumeration would exceed the configured work cap.
struct BudgetExceeded : Error {
    using Error::Error;
};

// A verification found something that should be impossible.  Any of these
// surfacing means either a transcription bug or a genuine counterexample.
struct VerificationFailure : Error {
    using Error::Error;
};

struct ConsistencyViolation : VerificationFailure {
    using VerificationFailure::VerificationFailure;
};

struct ShapeViolation : VerificationFailure {
    using VerificationFailure::VerificationFailure;
};

struct CounterexampleFound : VerificationFailure {
    using VerificationFailure::VerificationFailure;
};

struct NoChoiceExists : VerificationFailure {
    using VerificationFailure::VerificationFailure;
};

struct NonIntegral : VerificationFailure {
    using VerificationFailure::VerificationFailure;
};

} // namespace tracelab

#endif
