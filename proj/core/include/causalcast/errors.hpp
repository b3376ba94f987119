#ifndef CAUSALCAST_ERRORS_HPP
#define CAUSALCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace causalcast {

// Base for all library errors. exit_code() maps onto the CLI convention:
// 1 for malformed/unusable input, 2 for capacity and consistency failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
};

// Malformed arguments: indices out of range, bad tuples, invalid parameters.
class InputError : public Error {
public:
    using Error::Error;
};

// Query does not match the operation (wrong kind, wrong arity, i == j).
class QueryError : public InputError {
public:
    using InputError::InputError;
};

// Invalid or unsupported configuration value.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

// Data cannot support the estimator: zero variance, singular design,
// correlation below the sign-test floor.
class DegenerateDataError : public InputError {
public:
    using InputError::InputError;
};

// Sample too small for the requested test.
class InsufficientDataError : public InputError {
public:
    using InputError::InputError;
};

// The model cannot answer the query (e.g. no directed path in either
// direction for a directionality query).
class ModelOutsideClassError : public InputError {
public:
    using InputError::InputError;
};

// Mean of an empty collection requested.
class UndefinedMeanError : public InputError {
public:
    using InputError::InputError;
};

// Requested size exceeds an enumeration / search cap.
class CapacityError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

// Inputs contradict each other (e.g. marginals of two distributions to be
// merged disagree beyond tolerance).
class InconsistencyError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

}  // namespace causalcast

#endif
