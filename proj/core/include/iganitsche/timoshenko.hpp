#pragma once

#include <Eigen/Core>

namespace iga {

/// Cantilever of length L and depth D (unit thickness) under an
/// end shear P, clamped by its exact displacement at x = 0.
struct TimoshenkoParams {
    double length = 48.0;
    double depth = 6.0;
    double shear_force = 1000.0;
    double youngs_modulus = 3.0e7;
    double poisson_ratio = 0.3;

    double inertia() const { return depth * depth * depth / 12.0; }
};

/// Parabolic end traction t_y(y) = -P/(2I) (D^2/4 - y^2).
double timoshenko_traction_y(const TimoshenkoParams& params, double y);

struct TimoshenkoField {
    Eigen::Vector2d displacement;
    Eigen::Vector3d stress;  ///< Voigt (xx, yy, xy)
};

/// Exact displacement and stress of the cantilever at (x, y).
TimoshenkoField timoshenko_exact(const TimoshenkoParams& params, double x, double y);

}  // namespace iga
