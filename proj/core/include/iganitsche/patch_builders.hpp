#pragma once

#include "iganitsche/knot_vector.hpp"
#include "iganitsche/nurbs_patch.hpp"

#include <Eigen/Core>

#include <vector>

namespace iga {

/// Open uniform knot vector of `num_elements` equal spans on [lo, hi].
KnotVector make_uniform_knots(int degree, int num_elements, double lo = 0.0, double hi = 1.0);

/// Axis-aligned box patch with unit weights and control points on the
/// Greville lattice, so the geometry map is exactly affine for any
/// degree. One degree/element count per direction; lo/hi are the
/// physical corners (dim_param == dim_space).
NurbsPatch make_box_patch(const std::vector<int>& degrees, const std::vector<int>& num_elements,
                          const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Straight line segment from a to b embedded in the plane or space.
NurbsPatch make_line_patch(int degree, int num_elements, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b);

/// Rebuild a patch at a different degree on the same parameter ranges
/// (Greville lattice). Exact only for affine geometry; throws ModelError
/// when the rebuilt patch deviates from the original by more than
/// 1e-8 of the geometry scale at sampled points.
NurbsPatch rebuild_at_degree(const NurbsPatch& patch, int degree);

}  // namespace iga
