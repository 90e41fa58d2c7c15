#include "iganitsche/assembly.hpp"

#include "iganitsche/errors.hpp"
#include "iganitsche/gauss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace iga {

DofMap::DofMap(const std::vector<NurbsPatch>& patches) {
    dim_ = patches.empty() ? 0 : patches.front().dim_space();
    offsets_.resize(patches.size() + 1, 0);
    for (std::size_t m = 0; m < patches.size(); ++m) {
        offsets_[m + 1] = offsets_[m] + patches[m].num_control_points() * dim_;
    }
}

namespace {

/// Static chunking over [0, count): deterministic regardless of timing.
void parallel_for(Index count, int threads, const std::function<void(Index, Index)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || count < 2 * threads) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    const Index chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const Index begin = t * chunk;
        const Index end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& worker : pool) {
        worker.join();
    }
}

struct ElementQuadrature {
    // Per-direction Gauss rules, (degree+1) points each.
    std::array<const GaussRule*, 3> rules{};
    std::array<int, 3> counts{1, 1, 1};
    int dim = 0;

    explicit ElementQuadrature(const NurbsPatch& patch) : dim(patch.dim_param()) {
        for (int d = 0; d < dim; ++d) {
            rules[static_cast<std::size_t>(d)] = &gauss_legendre(patch.knot_vector(d).degree() + 1);
            counts[static_cast<std::size_t>(d)] = static_cast<int>(rules[static_cast<std::size_t>(d)]->size());
        }
    }

    template <typename Visitor>
    void for_each(const Element& element, Visitor&& visit) const {
        const int n0 = counts[0];
        const int n1 = dim >= 2 ? counts[1] : 1;
        const int n2 = dim >= 3 ? counts[2] : 1;
        for (int q2 = 0; q2 < n2; ++q2) {
            for (int q1 = 0; q1 < n1; ++q1) {
                for (int q0 = 0; q0 < n0; ++q0) {
                    ParamPoint parent;
                    parent.dim = dim;
                    parent[0] = rules[0]->points[q0];
                    double w = rules[0]->weights[q0];
                    if (dim >= 2) {
                        parent[1] = rules[1]->points[q1];
                        w *= rules[1]->weights[q1];
                    }
                    if (dim >= 3) {
                        parent[2] = rules[2]->points[q2];
                        w *= rules[2]->weights[q2];
                    }
                    const auto [pt, jac] = parent_to_param(element.bounds, dim, parent);
                    visit(pt, w * jac);
                }
            }
        }
    }
};

}  // namespace

void assemble_bulk(const NurbsPatch& patch, const PatchMesh& mesh, const Material& material,
                   const DofMap& dofs, Index patch_id, int threads, TripletList& triplets,
                   Eigen::VectorXd& rhs, const FieldFunction* body_force) {
    const int dim = patch.dim_space();
    const Eigen::MatrixXd c_matrix = constitutive_matrix(material);
    const ElementQuadrature quadrature(patch);
    const Index num_elements = mesh.num_elements();
    const Index offset = dofs.patch_offset(patch_id);

    struct ElementResult {
        Eigen::MatrixXd stiffness;
        Eigen::VectorXd load;
    };
    std::vector<ElementResult> results(static_cast<std::size_t>(num_elements));
    std::exception_ptr failure;
    std::mutex failure_mutex;

    parallel_for(num_elements, threads, [&](Index begin, Index end) {
        try {
            for (Index e = begin; e < end; ++e) {
                const Element& element = mesh.element(e);
                const Index n_dofs = static_cast<Index>(element.ien.size()) * dim;
                Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(n_dofs, n_dofs);
                Eigen::VectorXd fe = Eigen::VectorXd::Zero(n_dofs);
                quadrature.for_each(element, [&](const ParamPoint& pt, double weight) {
                    const ElementMatrices em = element_matrices(patch, element, pt);
                    const double w = weight * em.det_jacobian;
                    const Eigen::MatrixXd stress_op = c_matrix * em.strain_displacement;
                    ke.noalias() += w * em.strain_displacement.transpose() * stress_op;
                    if (body_force != nullptr) {
                        fe.noalias() += w * em.shape.transpose() * (*body_force)(em.x);
                    }
                });
                results[static_cast<std::size_t>(e)] = {std::move(ke), std::move(fe)};
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    });
    if (failure) {
        std::rethrow_exception(failure);
    }

    for (Index e = 0; e < num_elements; ++e) {
        const Element& element = mesh.element(e);
        const auto& result = results[static_cast<std::size_t>(e)];
        const Index n_en = static_cast<Index>(element.ien.size());
        for (Index b = 0; b < n_en; ++b) {
            const Index col_base = offset + element.ien[static_cast<std::size_t>(b)] * dim;
            for (Index a = 0; a < n_en; ++a) {
                const Index row_base = offset + element.ien[static_cast<std::size_t>(a)] * dim;
                for (int cb = 0; cb < dim; ++cb) {
                    for (int ca = 0; ca < dim; ++ca) {
                        triplets.emplace_back(row_base + ca, col_base + cb,
                                              result.stiffness(a * dim + ca, b * dim + cb));
                    }
                }
            }
            if (body_force != nullptr) {
                for (int cb = 0; cb < dim; ++cb) {
                    rhs[col_base + cb] += result.load(b * dim + cb);
                }
            }
        }
    }
}

void assemble_neumann(const NurbsPatch& patch, const PatchMesh& mesh, const NeumannSpec& spec,
                      const DofMap& dofs, Eigen::VectorXd& rhs) {
    const int dim = patch.dim_space();
    const TraceMesh trace = trace_of_face(patch, mesh, spec.face);
    int max_degree = 0;
    for (int d = 0; d < trace.dim; ++d) {
        max_degree = std::max(max_degree, patch.knot_vector(trace.free_dirs[static_cast<std::size_t>(d)]).degree());
    }
    const auto points = face_quadrature(patch, trace, max_degree + 1);
    const Index offset = dofs.patch_offset(spec.patch);

    for (const FaceQuadraturePoint& qp : points) {
        const Eigen::VectorXd traction = spec.traction(qp.x);
        const NurbsPatch::BasisEval basis = patch.rational_basis(qp.point);
        for (std::size_t a = 0; a < basis.indices.size(); ++a) {
            const Index base = offset + basis.indices[a] * dim;
            for (int c = 0; c < dim; ++c) {
                rhs[base + c] += qp.weight * basis.values[static_cast<Index>(a)] * traction[c];
            }
        }
    }
}

namespace {

/// Global indices of the control layer supported on a face, in lattice
/// order of the free directions.
std::vector<Index> face_layer_indices(const NurbsPatch& patch, const Face& face) {
    const int dp = patch.dim_param();
    std::array<int, 3> counts{patch.num_basis(0), dp >= 2 ? patch.num_basis(1) : 1,
                              dp >= 3 ? patch.num_basis(2) : 1};
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi = counts;
    const int fixed = face.at_max ? counts[static_cast<std::size_t>(face.direction)] - 1 : 0;
    lo[static_cast<std::size_t>(face.direction)] = fixed;
    hi[static_cast<std::size_t>(face.direction)] = fixed + 1;

    std::vector<Index> indices;
    for (int k = lo[2]; k < hi[2]; ++k) {
        for (int j = lo[1]; j < hi[1]; ++j) {
            for (int i = lo[0]; i < hi[0]; ++i) {
                indices.push_back(patch.global_index(i, j, k));
            }
        }
    }
    return indices;
}

}  // namespace

std::vector<std::pair<Index, Eigen::VectorXd>> dirichlet_projection(const NurbsPatch& patch,
                                                                    const PatchMesh& mesh,
                                                                    const Face& face,
                                                                    const FieldFunction& value) {
    const int dp = patch.dim_param();
    const int dim = patch.dim_space();
    if (face.direction < 0 || face.direction >= dp) {
        throw std::invalid_argument("dirichlet_projection: face not a parametric boundary");
    }

    const std::vector<Index> layer = face_layer_indices(patch, face);
    std::vector<std::pair<Index, Eigen::VectorXd>> out;
    out.reserve(layer.size());

    std::array<int, 2> free_dirs{};
    int num_free = 0;
    for (int d = 0; d < dp; ++d) {
        if (d != face.direction) {
            free_dirs[static_cast<std::size_t>(num_free++)] = d;
        }
    }

    bool interpolatory = true;
    for (int d = 0; d < num_free; ++d) {
        if (patch.knot_vector(free_dirs[static_cast<std::size_t>(d)]).degree() != 1) {
            interpolatory = false;
        }
    }

    const auto& fixed_kv = patch.knot_vector(face.direction);
    const double face_value = face.at_max ? fixed_kv.range_max() : fixed_kv.range_min();

    if (num_free == 0 || interpolatory) {
        // Interpolatory face basis: values of g at the face nodes
        // (Greville abscissae coincide with the knots for degree 1).
        std::size_t a = 0;
        const int n0 = num_free >= 1 ? patch.num_basis(free_dirs[0]) : 1;
        const int n1 = num_free >= 2 ? patch.num_basis(free_dirs[1]) : 1;
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i, ++a) {
                ParamPoint pt;
                pt.dim = dp;
                pt[face.direction] = face_value;
                if (num_free >= 1) pt[free_dirs[0]] = patch.knot_vector(free_dirs[0]).greville(i);
                if (num_free >= 2) pt[free_dirs[1]] = patch.knot_vector(free_dirs[1]).greville(j);
                out.emplace_back(layer[a], value(patch.evaluate(pt)));
            }
        }
        return out;
    }

    // Least-squares projection: normal equations over the face with the
    // physical surface measure.
    const Index n_face = static_cast<Index>(layer.size());
    std::vector<Index> local_of(static_cast<std::size_t>(patch.num_control_points()), -1);
    for (Index a = 0; a < n_face; ++a) {
        local_of[static_cast<std::size_t>(layer[static_cast<std::size_t>(a)])] = a;
    }

    const TraceMesh trace = trace_of_face(patch, mesh, face);
    int max_degree = 0;
    for (int d = 0; d < num_free; ++d) {
        max_degree = std::max(max_degree, patch.knot_vector(free_dirs[static_cast<std::size_t>(d)]).degree());
    }
    const auto points = face_quadrature(patch, trace, max_degree + 2);

    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_face, n_face);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_face, dim);
    for (const FaceQuadraturePoint& qp : points) {
        const NurbsPatch::BasisEval basis = patch.rational_basis(qp.point);
        const Eigen::VectorXd g = value(qp.x);
        for (std::size_t a = 0; a < basis.indices.size(); ++a) {
            const Index la = local_of[static_cast<std::size_t>(basis.indices[a])];
            if (la < 0) {
                continue;  // interior-layer function, identically zero on the face
            }
            const double va = basis.values[static_cast<Index>(a)];
            rhs.row(la) += qp.weight * va * g.transpose();
            for (std::size_t b = 0; b < basis.indices.size(); ++b) {
                const Index lb = local_of[static_cast<std::size_t>(basis.indices[b])];
                if (lb >= 0) {
                    gram(la, lb) += qp.weight * va * basis.values[static_cast<Index>(b)];
                }
            }
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const double d_max = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(d_max > 0.0) ||
        ldlt.vectorD().minCoeff() < 1e-12 * d_max) {
        throw ProjectionError("dirichlet_projection: singular face Gram matrix (degenerate face " +
                              face_name(face) + ")");
    }
    const Eigen::MatrixXd coeffs = ldlt.solve(rhs);
    for (Index a = 0; a < n_face; ++a) {
        out.emplace_back(layer[static_cast<std::size_t>(a)], coeffs.row(a).transpose());
    }
    return out;
}

}  // namespace iga
