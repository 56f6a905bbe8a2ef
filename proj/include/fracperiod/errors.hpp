#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracperiod {

/// Argument outside the region where an evaluation is defined or certified.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result would exceed the double exponent range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// lambda^alpha coincides with an eigenvalue; carries the mode label.
class SingularityError : public DomainError {
public:
    SingularityError(int mode, const std::string& what) : DomainError(what), mode_(mode) {}
    int mode() const noexcept { return mode_; }

private:
    int mode_;
};

class UnsupportedOperatorError : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A shift by one time unit does not land on grid points.
class OffGridShiftError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid scenario configuration; path() names the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace fracperiod
