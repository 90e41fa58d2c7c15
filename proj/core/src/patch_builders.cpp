#include "iganitsche/patch_builders.hpp"

#include "iganitsche/errors.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace iga {

KnotVector make_uniform_knots(int degree, int num_elements, double lo, double hi) {
    if (num_elements < 1) {
        throw std::invalid_argument("make_uniform_knots: need at least one element");
    }
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(num_elements) + 2 * degree + 1);
    for (int i = 0; i <= degree; ++i) {
        knots.push_back(lo);
    }
    for (int i = 1; i < num_elements; ++i) {
        knots.push_back(lo + (hi - lo) * i / num_elements);
    }
    for (int i = 0; i <= degree; ++i) {
        knots.push_back(hi);
    }
    return KnotVector(degree, std::move(knots));
}

NurbsPatch make_box_patch(const std::vector<int>& degrees, const std::vector<int>& num_elements,
                          const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const int dp = static_cast<int>(degrees.size());
    if (num_elements.size() != degrees.size() || lo.size() != dp || hi.size() != dp) {
        throw std::invalid_argument("make_box_patch: inconsistent dimensions");
    }
    std::vector<KnotVector> kvs;
    std::vector<std::vector<double>> coords(static_cast<std::size_t>(dp));
    for (int d = 0; d < dp; ++d) {
        kvs.push_back(make_uniform_knots(degrees[static_cast<std::size_t>(d)],
                                         num_elements[static_cast<std::size_t>(d)]));
        const KnotVector& kv = kvs.back();
        for (int i = 0; i < kv.num_basis(); ++i) {
            coords[static_cast<std::size_t>(d)].push_back(lo[d] + (hi[d] - lo[d]) * kv.greville(i));
        }
    }

    Index total = 1;
    for (int d = 0; d < dp; ++d) {
        total *= kvs[static_cast<std::size_t>(d)].num_basis();
    }
    Eigen::MatrixXd points(total, dp);
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(total);
    Index a = 0;
    const int n0 = kvs[0].num_basis();
    const int n1 = dp >= 2 ? kvs[1].num_basis() : 1;
    const int n2 = dp >= 3 ? kvs[2].num_basis() : 1;
    for (int k = 0; k < n2; ++k) {
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i, ++a) {
                points(a, 0) = coords[0][static_cast<std::size_t>(i)];
                if (dp >= 2) points(a, 1) = coords[1][static_cast<std::size_t>(j)];
                if (dp >= 3) points(a, 2) = coords[2][static_cast<std::size_t>(k)];
            }
        }
    }
    return NurbsPatch(std::move(kvs), std::move(points), std::move(weights));
}

NurbsPatch make_line_patch(int degree, int num_elements, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
    std::vector<KnotVector> kvs{make_uniform_knots(degree, num_elements)};
    const int n = kvs[0].num_basis();
    Eigen::MatrixXd points(n, a.size());
    for (int i = 0; i < n; ++i) {
        const double t = kvs[0].greville(i);
        points.row(i) = ((1.0 - t) * a + t * b).transpose();
    }
    return NurbsPatch(std::move(kvs), std::move(points), Eigen::VectorXd::Ones(n));
}

NurbsPatch rebuild_at_degree(const NurbsPatch& patch, int degree) {
    const int dp = patch.dim_param();
    std::vector<KnotVector> kvs;
    for (int d = 0; d < dp; ++d) {
        const KnotVector& kv = patch.knot_vector(d);
        kvs.push_back(make_uniform_knots(degree, static_cast<int>(kv.nonempty_spans().size()),
                                         kv.range_min(), kv.range_max()));
    }

    Index total = 1;
    for (const auto& kv : kvs) {
        total *= kv.num_basis();
    }
    Eigen::MatrixXd points(total, patch.dim_space());
    Index a = 0;
    const int n0 = kvs[0].num_basis();
    const int n1 = dp >= 2 ? kvs[1].num_basis() : 1;
    const int n2 = dp >= 3 ? kvs[2].num_basis() : 1;
    for (int k = 0; k < n2; ++k) {
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i, ++a) {
                ParamPoint pt;
                pt.dim = dp;
                pt[0] = kvs[0].greville(i);
                if (dp >= 2) pt[1] = kvs[1].greville(j);
                if (dp >= 3) pt[2] = kvs[2].greville(k);
                points.row(a) = patch.evaluate(pt).transpose();
            }
        }
    }
    NurbsPatch rebuilt(std::move(kvs), std::move(points), Eigen::VectorXd::Ones(total));

    // Greville sampling reproduces affine geometry exactly and nothing
    // else; verify before handing the patch out.
    std::mt19937 rng(20240229);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double tol = 1e-8 * std::max(1.0, patch.bounding_box_diagonal());
    for (int sample = 0; sample < 50; ++sample) {
        ParamPoint pt;
        pt.dim = dp;
        for (int d = 0; d < dp; ++d) {
            const KnotVector& kv = patch.knot_vector(d);
            pt[d] = kv.range_min() + (kv.range_max() - kv.range_min()) * unit(rng);
        }
        if ((rebuilt.evaluate(pt) - patch.evaluate(pt)).norm() > tol) {
            throw ModelError("rebuild_at_degree: patch geometry is not affine; degree change "
                             "would alter the geometry");
        }
    }
    return rebuilt;
}

}  // namespace iga
