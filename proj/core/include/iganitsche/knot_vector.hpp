#pragma once

#include <Eigen/Core>

#include <vector>

namespace iga {

/// An open (clamped) knot vector with its degree. Immutable after
/// construction; all evaluation routines are pure.
class KnotVector {
public:
    /// Validates: non-decreasing knots, open form (end knots repeated
    /// exactly degree+1 times), interior multiplicity <= degree+1.
    KnotVector(int degree, std::vector<double> knots);

    int degree() const { return degree_; }
    int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    const std::vector<double>& knots() const { return knots_; }

    double range_min() const { return knots_.front(); }
    double range_max() const { return knots_.back(); }

    /// Index i with knots[i] <= xi < knots[i+1]; evaluation at the last
    /// knot maps into the final non-degenerate span. Throws
    /// std::domain_error for xi outside the knot range.
    int find_span(double xi) const;

    /// Values and derivatives of the degree+1 basis functions that are
    /// non-zero on the span containing xi. Row k holds the k-th
    /// derivative; local column j corresponds to basis index
    /// find_span(xi) - degree + j. max_order may exceed the degree
    /// (extra rows are zero); negative max_order throws.
    Eigen::MatrixXd basis_derivatives(double xi, int max_order) const;

    /// Same, but with the span forced. Evaluating at a knot with the
    /// span on its left gives the one-sided limit from below.
    Eigen::MatrixXd basis_derivatives_at_span(int span, double xi, int max_order) const;

    /// Span indices with positive parametric length, in ascending order.
    std::vector<int> nonempty_spans() const;

    /// Multiplicity of a value among the knots (exact comparison).
    int multiplicity(double knot) const;

    /// Greville abscissa of basis function i: mean of knots i+1..i+degree.
    double greville(int i) const;

private:
    int degree_ = 0;
    std::vector<double> knots_;
};

}  // namespace iga
