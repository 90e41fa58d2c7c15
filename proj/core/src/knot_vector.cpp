#include "iganitsche/knot_vector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iga {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 0) {
        throw std::invalid_argument("KnotVector: degree must be non-negative");
    }
    if (static_cast<int>(knots_.size()) < 2 * (degree_ + 1)) {
        throw std::invalid_argument("KnotVector: too few knots for degree " +
                                    std::to_string(degree_));
    }
    if (!std::is_sorted(knots_.begin(), knots_.end())) {
        throw std::invalid_argument("KnotVector: knots must be non-decreasing");
    }
    // Open form: end knots repeated exactly degree+1 times.
    const double first = knots_.front();
    const double last = knots_.back();
    if (first == last) {
        throw std::invalid_argument("KnotVector: empty parameter range");
    }
    if (multiplicity(first) != degree_ + 1 || multiplicity(last) != degree_ + 1) {
        throw std::invalid_argument("KnotVector: not in open form (end knots must repeat degree+1 times)");
    }
    for (std::size_t i = degree_ + 1; i + degree_ + 1 < knots_.size(); ++i) {
        if (multiplicity(knots_[i]) > degree_ + 1) {
            throw std::invalid_argument("KnotVector: interior knot multiplicity exceeds degree+1");
        }
    }
}

int KnotVector::find_span(double xi) const {
    const int n = num_basis();
    if (xi < knots_.front() || xi > knots_.back()) {
        throw std::domain_error("find_span: parameter " + std::to_string(xi) +
                                " outside knot range [" + std::to_string(knots_.front()) + ", " +
                                std::to_string(knots_.back()) + "]");
    }
    // Last-knot closure: map into the final non-degenerate span.
    if (xi >= knots_[static_cast<std::size_t>(n)]) {
        int span = n - 1;
        while (span > degree_ && knots_[static_cast<std::size_t>(span)] == knots_[static_cast<std::size_t>(span) + 1]) {
            --span;
        }
        return span;
    }
    int low = degree_;
    int high = n;
    int mid = (low + high) / 2;
    while (xi < knots_[static_cast<std::size_t>(mid)] || xi >= knots_[static_cast<std::size_t>(mid) + 1]) {
        if (xi < knots_[static_cast<std::size_t>(mid)]) {
            high = mid;
        } else {
            low = mid;
        }
        mid = (low + high) / 2;
    }
    return mid;
}

Eigen::MatrixXd KnotVector::basis_derivatives(double xi, int max_order) const {
    return basis_derivatives_at_span(find_span(xi), xi, max_order);
}

// DersBasisFuns of Piegl & Tiller (A2.3), 0-based; ratios 0/0 are zero by
// construction of the inverted-triangle table.
Eigen::MatrixXd KnotVector::basis_derivatives_at_span(int span, double xi, int max_order) const {
    if (max_order < 0) {
        throw std::invalid_argument("basis_derivatives: max_order must be non-negative");
    }
    const int p = degree_;
    const auto& U = knots_;
    const int n = std::min(max_order, p);  // orders beyond p are identically zero

    Eigen::MatrixXd ndu = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd left = Eigen::VectorXd::Zero(p + 1);
    Eigen::VectorXd right = Eigen::VectorXd::Zero(p + 1);

    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = xi - U[static_cast<std::size_t>(span + 1 - j)];
        right[j] = U[static_cast<std::size_t>(span + j)] - xi;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }

    Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(max_order + 1, p + 1);
    for (int j = 0; j <= p; ++j) {
        ders(0, j) = ndu(j, p);
    }

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? (k - 1) : (p - r);
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }

    double factor = p;
    for (int k = 1; k <= n; ++k) {
        ders.row(k) *= factor;
        factor *= (p - k);
    }
    return ders;
}

std::vector<int> KnotVector::nonempty_spans() const {
    std::vector<int> spans;
    const int n = num_basis();
    for (int i = degree_; i < n; ++i) {
        if (knots_[static_cast<std::size_t>(i) + 1] > knots_[static_cast<std::size_t>(i)]) {
            spans.push_back(i);
        }
    }
    return spans;
}

int KnotVector::multiplicity(double knot) const {
    return static_cast<int>(std::count(knots_.begin(), knots_.end(), knot));
}

double KnotVector::greville(int i) const {
    if (degree_ == 0) {
        return 0.5 * (knots_[static_cast<std::size_t>(i)] + knots_[static_cast<std::size_t>(i) + 1]);
    }
    double sum = 0.0;
    for (int k = 1; k <= degree_; ++k) {
        sum += knots_[static_cast<std::size_t>(i + k)];
    }
    return sum / degree_;
}

}  // namespace iga
