#pragma once

#include <Eigen/Core>

namespace iga {

/// Gauss-Legendre rule on the parent interval [-1, 1].
struct GaussRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;

    Eigen::Index size() const { return points.size(); }
};

/// Nodes and weights for an n-point Gauss-Legendre rule, exact for
/// polynomials of degree 2n-1. Computed by Newton iteration on the
/// Legendre polynomial; results are cached per n.
const GaussRule& gauss_legendre(int num_points);

}  // namespace iga
