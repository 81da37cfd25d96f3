// errors.hpp — exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace tga {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical parameters or configuration (CLI exit code 1).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Failure of a numerical procedure on otherwise valid input (CLI exit code 2).
class NumericalError : public Error {
public:
    using Error::Error;
};

class OutOfBand : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Scattering system is rank deficient at this k (bound state / BIC degeneracy).
class SingularSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DivisionNearZero : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class LatticeTooSmall : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class GapClosed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegratorToleranceExceeded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonPositiveData : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EmptyGrid : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

}  // namespace tga
