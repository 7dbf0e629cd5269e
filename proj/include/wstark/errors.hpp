#pragma once

#include <stdexcept>
#include <string>

namespace wstark {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (parameters, grids, step sizes).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A requested Wannier-Stark state could not be isolated.
class BasisError : public Error {
public:
    BasisError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

/// Ladder or translation symmetry violated beyond tolerance.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// Amplitude reached the edge of a truncated site window.
class WindowOverflowError : public Error {
public:
    using Error::Error;
};

/// A numerical integration run had to be aborted.
class IntegrationError : public Error {
public:
    using Error::Error;
};

}  // namespace wstark
