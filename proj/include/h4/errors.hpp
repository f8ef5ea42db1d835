#pragma once

#include <stdexcept>
#include <string>

namespace h4 {

/// Invalid or inconsistent input data (bad schema, failed table validation,
/// violated precondition). CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A deduction reached mutually exclusive facts. CLI exit code 2.
class ContradictionError : public std::runtime_error {
public:
    explicit ContradictionError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal invariant failed. CLI exit code 3.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace h4
