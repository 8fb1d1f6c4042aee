#pragma once

#include <stdexcept>
#include <string>

namespace dlr {

/// Input data failed validation (schema, grid, ranges, file contents).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed: bracket not found, non-finite values, divergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dlr
