#pragma once

#include <stdexcept>
#include <string>

namespace ubcov {

/// Shapes or partitions that do not line up.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A coordinate matrix (A or Delta) is numerically singular.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A positive-definiteness precondition failed. Carries the smallest
/// eigenvalue that was observed so callers can report it.
class NotPositiveDefiniteError : public std::runtime_error {
public:
    NotPositiveDefiniteError(const std::string& what, double min_eigenvalue)
        : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}

    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

/// A multiplication whose result leaves the symmetric uniform-block family.
class NonSymmetricProductError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ubcov
