#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adsense {

/// Invalid scenario or run configuration. `key()` names the offending
/// configuration entry (e.g. "bounds.tx_max") when one is known.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg, std::string key = {})
        : std::invalid_argument(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Query beyond the time range covered by a precomputed table.
class HorizonError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A policy column whose actions are not ordered Idle* Sense* Transmit*.
class StructuralViolation : public std::runtime_error {
public:
    StructuralViolation(const std::string& msg, std::size_t column)
        : std::runtime_error(msg), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace adsense
