#pragma once

#include <stdexcept>
#include <string>

namespace mibayes {

/// Argument outside the mathematical domain of an operation
/// (non-positive digamma argument, zero-total table, q outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Moment matching failed for the requested family.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (CSV layout, unknown column, unsupported missingness).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mibayes
