#pragma once

#include "iganitsche/knot_vector.hpp"
#include "iganitsche/nurbs_patch.hpp"
#include "iganitsche/patch_builders.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace iga::test {

/// The paper's running example knot vector {0,0,0,1,2,3,4,4,5,5,5}, p=2.
inline KnotVector open_quadratic_knots() {
    return KnotVector(2, {0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5});
}

/// Exact quarter circle of radius 1: p=2, weights (1, sqrt(2)/2, 1).
inline NurbsPatch quarter_circle_arc() {
    Eigen::MatrixXd points(3, 2);
    points << 1.0, 0.0,
              1.0, 1.0,
              0.0, 1.0;
    Eigen::VectorXd weights(3);
    weights << 1.0, std::sqrt(2.0) / 2.0, 1.0;
    return NurbsPatch({KnotVector(2, {0, 0, 0, 1, 1, 1})}, points, weights);
}

/// Quarter annulus between radii r_in and r_out; rational in the angular
/// direction. Direction 0 is radial so the Jacobian is positive.
inline NurbsPatch quarter_annulus(double r_in = 1.0, double r_out = 2.0) {
    const double s = std::sqrt(2.0) / 2.0;
    Eigen::MatrixXd points(6, 2);
    points << r_in, 0.0,
              r_out, 0.0,
              r_in, r_in,
              r_out, r_out,
              0.0, r_in,
              0.0, r_out;
    Eigen::VectorXd weights(6);
    weights << 1.0, 1.0, s, s, 1.0, 1.0;
    return NurbsPatch({KnotVector(1, {0, 0, 1, 1}), KnotVector(2, {0, 0, 0, 1, 1, 1})}, points,
                      weights);
}

/// Unit-square / unit-cube patch whose geometry map is the identity.
inline NurbsPatch identity_patch(int dim, int degree, int num_elements) {
    const Eigen::VectorXd lo = Eigen::VectorXd::Zero(dim);
    const Eigen::VectorXd hi = Eigen::VectorXd::Ones(dim);
    return make_box_patch(std::vector<int>(static_cast<std::size_t>(dim), degree),
                          std::vector<int>(static_cast<std::size_t>(dim), num_elements), lo, hi);
}

inline std::mt19937& rng() {
    static std::mt19937 engine(987654321);
    return engine;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng());
}

inline ParamPoint random_point(const NurbsPatch& patch, double margin = 0.0) {
    ParamPoint pt;
    pt.dim = patch.dim_param();
    for (int d = 0; d < pt.dim; ++d) {
        const auto& kv = patch.knot_vector(d);
        const double pad = margin * (kv.range_max() - kv.range_min());
        pt[d] = uniform(kv.range_min() + pad, kv.range_max() - pad);
    }
    return pt;
}

/// Central finite difference of a scalar-to-vector map.
template <typename F>
Eigen::VectorXd central_difference(F&& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

}  // namespace iga::test
