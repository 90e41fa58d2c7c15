#pragma once

#include "iganitsche/knot_vector.hpp"
#include "iganitsche/types.hpp"

#include <Eigen/Core>

#include <array>
#include <utility>
#include <vector>

namespace iga {

/// A tensor-product NURBS patch: one knot vector per parametric
/// direction, a weighted control net, and a mapping into physical space.
/// Control points are stored row-wise in lattice order, first direction
/// fastest: A = (n*m)*k + n*j + i (0-based).
///
/// Immutable after construction; evaluation is thread-safe.
class NurbsPatch {
public:
    /// `control_points` is (total points) x dim_space, `weights` strictly
    /// positive with matching size.
    NurbsPatch(std::vector<KnotVector> knot_vectors,
               Eigen::MatrixXd control_points,
               Eigen::VectorXd weights);

    int dim_param() const { return static_cast<int>(knot_vectors_.size()); }
    int dim_space() const { return static_cast<int>(control_points_.cols()); }

    const KnotVector& knot_vector(int direction) const {
        return knot_vectors_[static_cast<std::size_t>(direction)];
    }
    int num_basis(int direction) const {
        return knot_vectors_[static_cast<std::size_t>(direction)].num_basis();
    }
    Index num_control_points() const { return control_points_.rows(); }
    const Eigen::MatrixXd& control_points() const { return control_points_; }
    const Eigen::VectorXd& weights() const { return weights_; }

    /// Lattice index -> global index A (absent directions pass 0).
    Index global_index(int i, int j = 0, int k = 0) const;

    /// Number of basis functions supported on one element: prod(degree+1).
    int num_element_basis() const;

    struct BasisEval {
        std::vector<Index> indices;   ///< global indices of the non-zero functions
        Eigen::VectorXd values;       ///< rational basis values R_A
        Eigen::MatrixXd derivatives;  ///< dR_A/dxi_d, one column per direction
    };

    /// Rational basis values and first parametric derivatives of the
    /// functions that are non-zero at `pt`. Values sum to one.
    BasisEval rational_basis(const ParamPoint& pt) const;

    /// Physical image x(pt).
    Eigen::VectorXd evaluate(const ParamPoint& pt) const;

    /// Physical image plus parametric Jacobian dx/dxi (dim_space x dim_param).
    std::pair<Eigen::VectorXd, Eigen::MatrixXd> evaluate_with_jacobian(const ParamPoint& pt) const;

    /// Center of the parametric box; default Newton seed for inversion.
    ParamPoint param_center() const;

    /// Clamp a point into the parametric box.
    ParamPoint clamp_to_range(ParamPoint pt) const;

    /// Diagonal of the control-net bounding box (bounds the geometry).
    double bounding_box_diagonal() const;

private:
    std::vector<KnotVector> knot_vectors_;
    Eigen::MatrixXd control_points_;
    Eigen::VectorXd weights_;
};

/// Affine map of Eq.-style parent coordinates in [-1,1]^d onto a span
/// box, together with the mapping Jacobian prod((b_d - a_d) / 2).
/// Throws DegenerateElementError on a zero-length span.
std::pair<ParamPoint, double> parent_to_param(
    const std::array<std::pair<double, double>, 3>& span_bounds, int dim,
    const ParamPoint& parent);

}  // namespace iga
