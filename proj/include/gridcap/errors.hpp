#pragma once

#include <stdexcept>
#include <string>

namespace gridcap {

/// Bad input data or an inconsistent configuration. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model registry that cannot be turned into a consistent LP.
class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gridcap
