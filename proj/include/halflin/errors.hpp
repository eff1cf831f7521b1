#pragma once

#include <stdexcept>
#include <string>

namespace halflin {

/// Base class for every failure raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid usage: mismatched arguments, bad spans, bad configs.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Parameter outside the numerically supported range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Geometry the library does not model (positive-curvature space forms).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to converge; carries the achieved estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double value, double achieved_error)
        : Error(what), value_(value), achieved_error_(achieved_error) {}
    double value() const noexcept { return value_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double value_;
    double achieved_error_;
};

/// Time stepping failed (step underflow, step budget exhausted).
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t_fail)
        : Error(what), t_fail_(t_fail) {}
    double failure_time() const noexcept { return t_fail_; }

private:
    double t_fail_;
};

/// State or coefficient left the representable floating-point range.
class OverflowError : public Error {
public:
    OverflowError(const std::string& what, double t_fail)
        : Error(what), t_fail_(t_fail) {}
    double failure_time() const noexcept { return t_fail_; }

private:
    double t_fail_;
};

/// A hypothesis required by a criterion does not hold; names the hypothesis.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(const std::string& what, std::string hypothesis)
        : Error(what), hypothesis_(std::move(hypothesis)) {}
    const std::string& hypothesis() const noexcept { return hypothesis_; }

private:
    std::string hypothesis_;
};

/// Root or eigenvalue bracketing failed.
class BracketError : public Error {
public:
    using Error::Error;
};

}  // namespace halflin
