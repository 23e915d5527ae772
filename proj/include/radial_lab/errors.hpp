#pragma once

#include <stdexcept>
#include <string>

namespace radial {

/// Invalid argument to a public operation (bad sizes, out-of-range options).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A structural hypothesis on the data (weight, drift, nonlinearity) fails.
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Singular or otherwise unusable linear algebra.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Derived quantity came out non-finite or otherwise inadmissible.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal consistency check tripped (should not happen for valid inputs).
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace radial
