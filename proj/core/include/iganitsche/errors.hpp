#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace iga {

/// A knot span of zero parametric length was used where an element is required.
class DegenerateElementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Newton inversion of the geometry map did not converge (or hit a
/// singular Jacobian). Carries the residual of the last iterate.
class InversionError : public std::runtime_error {
public:
    InversionError(const std::string& what, double last_residual, bool singular)
        : std::runtime_error(what), last_residual(last_residual), singular(singular) {}

    double last_residual = 0.0;
    bool singular = false;
};

/// Non-positive Jacobian determinant inside an element.
class InvertedElementError : public std::runtime_error {
public:
    InvertedElementError(const std::string& what, Eigen::Index element)
        : std::runtime_error(what), element(element) {}

    Eigen::Index element = -1;
};

/// Boundary projection failed (degenerate face Gram matrix).
class ProjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Factorization failure: singular or indefinite global matrix. `pivot`
/// is the index of the first non-positive pivot when known.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, Eigen::Index pivot)
        : std::runtime_error(what), pivot(pivot) {}

    Eigen::Index pivot = -1;
};

/// Model-file schema or validation failure; message carries path and field.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A coupling quadrature point could not be matched on the partner patch.
class InterfaceMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace iga
