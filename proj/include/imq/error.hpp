#pragma once

#include <stdexcept>
#include <string>

namespace imq {

// Base for every failure raised by the library. Messages are prefixed with
// the originating module, e.g. "collocation: ...".
class Error : public std::runtime_error {
public:
    Error(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what) {}
};

// Input outside an operation's preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Factorization or spectral estimation failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Not enough usable points for a log-log fit.
class FitError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace imq
