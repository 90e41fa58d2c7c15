#include "iganitsche/nurbs_patch.hpp"

#include "iganitsche/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iga {

std::string face_name(const Face& face) {
    static const char* names[3][2] = {{"xi_min", "xi_max"}, {"eta_min", "eta_max"}, {"zeta_min", "zeta_max"}};
    return names[face.direction][face.at_max ? 1 : 0];
}

Face face_from_name(const std::string& name) {
    for (int d = 0; d < 3; ++d) {
        for (int s = 0; s < 2; ++s) {
            Face face{d, s == 1};
            if (face_name(face) == name) {
                return face;
            }
        }
    }
    throw std::invalid_argument("unknown face name '" + name + "'");
}

NurbsPatch::NurbsPatch(std::vector<KnotVector> knot_vectors,
                       Eigen::MatrixXd control_points,
                       Eigen::VectorXd weights)
    : knot_vectors_(std::move(knot_vectors)),
      control_points_(std::move(control_points)),
      weights_(std::move(weights)) {
    const int dp = dim_param();
    const int ds = dim_space();
    if (dp < 1 || dp > 3) {
        throw std::invalid_argument("NurbsPatch: dim_param must be 1, 2 or 3");
    }
    if (ds < 2 || ds > 3) {
        throw std::invalid_argument("NurbsPatch: dim_space must be 2 or 3");
    }
    Index expected = 1;
    for (const auto& kv : knot_vectors_) {
        expected *= kv.num_basis();
    }
    if (control_points_.rows() != expected) {
        throw std::invalid_argument("NurbsPatch: control net has " +
                                    std::to_string(control_points_.rows()) + " points, expected " +
                                    std::to_string(expected));
    }
    if (weights_.size() != expected) {
        throw std::invalid_argument("NurbsPatch: weight count does not match control net");
    }
    for (Index a = 0; a < weights_.size(); ++a) {
        if (!(weights_[a] > 0.0)) {
            throw std::invalid_argument("NurbsPatch: weight of control point " + std::to_string(a) +
                                        " is not strictly positive");
        }
    }
}

Index NurbsPatch::global_index(int i, int j, int k) const {
    const Index n = num_basis(0);
    const Index m = dim_param() >= 2 ? num_basis(1) : 1;
    return n * m * k + n * j + i;
}

int NurbsPatch::num_element_basis() const {
    int n = 1;
    for (const auto& kv : knot_vectors_) {
        n *= kv.degree() + 1;
    }
    return n;
}

NurbsPatch::BasisEval NurbsPatch::rational_basis(const ParamPoint& pt) const {
    const int dp = dim_param();
    if (pt.dim != dp) {
        throw std::invalid_argument("rational_basis: point dimension does not match patch");
    }

    std::array<Eigen::MatrixXd, 3> dirs;  // per-direction values and first derivatives
    std::array<int, 3> first{};           // first non-zero basis index per direction
    std::array<int, 3> count{1, 1, 1};
    for (int d = 0; d < dp; ++d) {
        const KnotVector& kv = knot_vectors_[static_cast<std::size_t>(d)];
        const int span = kv.find_span(pt[d]);
        dirs[static_cast<std::size_t>(d)] = kv.basis_derivatives_at_span(span, pt[d], 1);
        first[static_cast<std::size_t>(d)] = span - kv.degree();
        count[static_cast<std::size_t>(d)] = kv.degree() + 1;
    }

    const int n_en = num_element_basis();
    BasisEval eval;
    eval.indices.resize(static_cast<std::size_t>(n_en));
    eval.values.resize(n_en);
    eval.derivatives.resize(n_en, dp);

    // Tensor products of the B-spline values, weighted; then the rational
    // quotient rule with W and its gradient.
    Eigen::VectorXd weighted(n_en);
    Eigen::MatrixXd weighted_deriv(n_en, dp);
    double w_sum = 0.0;
    Eigen::VectorXd w_grad = Eigen::VectorXd::Zero(dp);

    int a = 0;
    for (int k = 0; k < count[2]; ++k) {
        for (int j = 0; j < count[1]; ++j) {
            for (int i = 0; i < count[0]; ++i, ++a) {
                const Index A = global_index(first[0] + i, dp >= 2 ? first[1] + j : 0,
                                             dp >= 3 ? first[2] + k : 0);
                double value = dirs[0](0, i);
                if (dp >= 2) value *= dirs[1](0, j);
                if (dp >= 3) value *= dirs[2](0, k);

                eval.indices[static_cast<std::size_t>(a)] = A;
                const double wa = weights_[A];
                weighted[a] = value * wa;
                w_sum += weighted[a];

                for (int d = 0; d < dp; ++d) {
                    double deriv = (d == 0) ? dirs[0](1, i) : dirs[0](0, i);
                    if (dp >= 2) deriv *= (d == 1) ? dirs[1](1, j) : dirs[1](0, j);
                    if (dp >= 3) deriv *= (d == 2) ? dirs[2](1, k) : dirs[2](0, k);
                    weighted_deriv(a, d) = deriv * wa;
                    w_grad[d] += weighted_deriv(a, d);
                }
            }
        }
    }

    eval.values = weighted / w_sum;
    for (int d = 0; d < dp; ++d) {
        eval.derivatives.col(d) =
            (weighted_deriv.col(d) - eval.values * w_grad[d]) / w_sum;
    }
    return eval;
}

Eigen::VectorXd NurbsPatch::evaluate(const ParamPoint& pt) const {
    const BasisEval eval = rational_basis(pt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_space());
    for (std::size_t a = 0; a < eval.indices.size(); ++a) {
        x += eval.values[static_cast<Index>(a)] * control_points_.row(eval.indices[a]).transpose();
    }
    return x;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> NurbsPatch::evaluate_with_jacobian(const ParamPoint& pt) const {
    const BasisEval eval = rational_basis(pt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_space());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim_space(), dim_param());
    for (std::size_t a = 0; a < eval.indices.size(); ++a) {
        const auto point = control_points_.row(eval.indices[a]).transpose();
        x += eval.values[static_cast<Index>(a)] * point;
        for (int d = 0; d < dim_param(); ++d) {
            jac.col(d) += eval.derivatives(static_cast<Index>(a), d) * point;
        }
    }
    return {x, jac};
}

ParamPoint NurbsPatch::param_center() const {
    ParamPoint pt;
    pt.dim = dim_param();
    for (int d = 0; d < pt.dim; ++d) {
        const auto& kv = knot_vectors_[static_cast<std::size_t>(d)];
        pt[d] = 0.5 * (kv.range_min() + kv.range_max());
    }
    return pt;
}

ParamPoint NurbsPatch::clamp_to_range(ParamPoint pt) const {
    for (int d = 0; d < pt.dim; ++d) {
        const auto& kv = knot_vectors_[static_cast<std::size_t>(d)];
        pt[d] = std::min(std::max(pt[d], kv.range_min()), kv.range_max());
    }
    return pt;
}

double NurbsPatch::bounding_box_diagonal() const {
    const Eigen::VectorXd lo = control_points_.colwise().minCoeff();
    const Eigen::VectorXd hi = control_points_.colwise().maxCoeff();
    return (hi - lo).norm();
}

std::pair<ParamPoint, double> parent_to_param(
    const std::array<std::pair<double, double>, 3>& span_bounds, int dim,
    const ParamPoint& parent) {
    ParamPoint pt;
    pt.dim = dim;
    double jacobian = 1.0;
    for (int d = 0; d < dim; ++d) {
        const auto [a, b] = span_bounds[static_cast<std::size_t>(d)];
        if (!(b > a)) {
            throw DegenerateElementError("parent_to_param: zero-length span in direction " +
                                         std::to_string(d));
        }
        pt[d] = 0.5 * ((b - a) * parent[d] + (b + a));
        jacobian *= 0.5 * (b - a);
    }
    return {pt, jacobian};
}

}  // namespace iga
