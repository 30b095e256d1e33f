#pragma once

#include <stdexcept>
#include <string>

namespace stablab {

/// Base class for all domain errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitianError : Error {
    using Error::Error;
};
struct SpaceMismatchError : Error {
    using Error::Error;
};
struct ActionShapeMismatchError : Error {
    using Error::Error;
};
struct NotUnimodularError : Error {
    using Error::Error;
};
struct GridMismatchError : Error {
    using Error::Error;
};
struct DepthExhaustedError : Error {
    using Error::Error;
};
struct PEqualsOneError : Error {
    using Error::Error;
};
struct AlphaNotAllowedError : Error {
    using Error::Error;
};
struct OutOfRangeError : Error {
    using Error::Error;
};
struct OverflowError : Error {
    using Error::Error;
};
struct RateUndefinedError : Error {
    using Error::Error;
};
struct NotConvergedError : Error {
    using Error::Error;
};
struct HypothesisViolatedError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace stablab
