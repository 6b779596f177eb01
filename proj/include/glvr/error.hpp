#pragma once

#include <stdexcept>
#include <string>

namespace glvr {

// Base class for every error raised by the library. The subclasses map onto
// the CLI exit-code contract (usage/config 2, I/O 1, domain 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Numerical policy failure (e.g. a root finder that did not converge).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace glvr
