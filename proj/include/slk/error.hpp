#pragma once

#include <stdexcept>
#include <string>

namespace slk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameters, mismatched domains, degenerate states.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration. `field()` is the dotted path of the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Failure during a run: non-finite amplitudes, eigensolver residual too large, IO errors.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

}  // namespace slk
