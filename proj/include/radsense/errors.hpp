#pragma once

#include <stdexcept>

namespace radsense {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The radar lies on (or numerically too close to) the aircraft body z axis,
/// so the RCS azimuth angle is undefined.
class NadirSingularity : public Error {
public:
    using Error::Error;
};

/// A range of zero or less was passed where a positive range is required.
class ZeroRange : public Error {
public:
    using Error::Error;
};

/// False-alarm probability outside the open interval (0, 1).
class InvalidPfa : public Error {
public:
    using Error::Error;
};

/// An RCS model evaluated to a degenerate denominator.
class DegenerateModel : public Error {
public:
    using Error::Error;
};

/// A pose covariance failed its symmetry or positive-semidefiniteness check.
class InvalidCovariance : public Error {
public:
    using Error::Error;
};

/// Array arguments that must be aligned have different lengths.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A configuration file could not be read or tokenized.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A value violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A sweep or array index is out of bounds.
class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace radsense
