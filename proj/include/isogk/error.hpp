#pragma once

#include <stdexcept>
#include <string>

namespace isogk {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (shapes, dimensions, ranges).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A parameter point lies outside the unit square.
class DomainError : public ContractError {
public:
    using ContractError::ContractError;
};

class UnsupportedOrderError : public ContractError {
public:
    using ContractError::ContractError;
};

/// Malformed or unsupported input file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Failures of the numerics rather than of the caller.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularityError : public NumericalError {
public:
    SingularityError(const std::string& what, double abs_det)
        : NumericalError(what), abs_det_(abs_det) {}
    double abs_det() const noexcept { return abs_det_; }

private:
    double abs_det_;
};

class InversionError : public NumericalError {
public:
    InversionError(const std::string& what, double residual)
        : NumericalError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class FoldError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverlapError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateSpaceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class LinearAlgebraError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SamplingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace isogk
