// errors.hpp
// Exception types shared by all primehit modules.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primehit {

// Invalid parameters or parameter combinations. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A prime table is too small for the requested computation.
class SizingError : public std::runtime_error {
public:
    SizingError(const std::string& what, std::uint64_t required_limit)
        : std::runtime_error(what + " (required sieve limit: " +
                             std::to_string(required_limit) + ")"),
          required_limit_(required_limit) {}

    std::uint64_t required_limit() const noexcept { return required_limit_; }

private:
    std::uint64_t required_limit_;
};

// A request would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tail certification only exists for the prime target set.
class CertificationUnavailable : public std::runtime_error {
public:
    CertificationUnavailable()
        : std::runtime_error("tail certification unavailable for custom targets") {}
};

} // namespace primehit
