#pragma once

#include <stdexcept>
#include <string>

namespace arborwalk {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: unknown letters, non-bijective permutations,
/// parameters out of range, invalid manifests.
class InputError : public Error {
public:
    using Error::Error;
};

/// A configured resource bound (ball size, block dimension, path cap,
/// sparse state size) would be exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// A power of U was requested beyond what the truncation can represent
/// exactly.
class HorizonError : public Error {
public:
    using Error::Error;
};

/// Linear solve requested too close to the unit circle.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Eigensolver or linear algebra failure.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Orbit closure did not close within the dimension bound.
class NotLocalizingError : public Error {
public:
    using Error::Error;
};

/// Transfer matrix denominators vanish.
class SingularParameterError : public Error {
public:
    using Error::Error;
};

/// Returns the block-dimension cap, honouring ARBORWALK_CAP_DIM.
std::size_t block_dimension_cap();

}  // namespace arborwalk
