#pragma once

#include <stdexcept>
#include <string>

namespace ragseed {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad configuration: invalid rule pattern, provider/store mismatch, unknown format.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Remote provider failure. `retryable` distinguishes transport faults from
/// permanent rejections (bad request, auth).
class ProviderError : public Error {
public:
    ProviderError(const std::string& msg, bool retryable)
        : Error(msg), retryable(retryable) {}
    bool retryable;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ragseed
