#include "iganitsche/mesh.hpp"

#include "iganitsche/errors.hpp"
#include "iganitsche/gauss.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iga {

PatchMesh::PatchMesh(const NurbsPatch& patch, Index patch_id) {
    const int dp = patch.dim_param();
    for (int d = 0; d < dp; ++d) {
        spans_[static_cast<std::size_t>(d)] = patch.knot_vector(d).nonempty_spans();
        grid_[static_cast<std::size_t>(d)] = static_cast<int>(spans_[static_cast<std::size_t>(d)].size());
    }

    const int count0 = grid_[0];
    const int count1 = dp >= 2 ? grid_[1] : 1;
    const int count2 = dp >= 3 ? grid_[2] : 1;
    elements_.reserve(static_cast<std::size_t>(count0) * count1 * count2);

    for (int g2 = 0; g2 < count2; ++g2) {
        for (int g1 = 0; g1 < count1; ++g1) {
            for (int g0 = 0; g0 < count0; ++g0) {
                Element el;
                el.patch = patch_id;
                const std::array<int, 3> grid_index{g0, g1, g2};
                for (int d = 0; d < dp; ++d) {
                    const int span = spans_[static_cast<std::size_t>(d)][static_cast<std::size_t>(grid_index[static_cast<std::size_t>(d)])];
                    el.span[static_cast<std::size_t>(d)] = span;
                    const auto& knots = patch.knot_vector(d).knots();
                    el.bounds[static_cast<std::size_t>(d)] = {knots[static_cast<std::size_t>(span)],
                                                              knots[static_cast<std::size_t>(span) + 1]};
                }

                // IEN in lattice order, first direction fastest; matches
                // the tensor order of NurbsPatch::rational_basis.
                const int p0 = patch.knot_vector(0).degree();
                const int p1 = dp >= 2 ? patch.knot_vector(1).degree() : 0;
                const int p2 = dp >= 3 ? patch.knot_vector(2).degree() : 0;
                el.ien.reserve(static_cast<std::size_t>(patch.num_element_basis()));
                for (int k = 0; k <= p2; ++k) {
                    for (int j = 0; j <= p1; ++j) {
                        for (int i = 0; i <= p0; ++i) {
                            const int bi = el.span[0] - p0 + i;
                            const int bj = dp >= 2 ? el.span[1] - p1 + j : 0;
                            const int bk = dp >= 3 ? el.span[2] - p2 + k : 0;
                            el.ien.push_back(patch.global_index(bi, bj, bk));
                        }
                    }
                }
                elements_.push_back(std::move(el));
            }
        }
    }
}

PatchMesh build_elements(const NurbsPatch& patch, Index patch_id) {
    return PatchMesh(patch, patch_id);
}

Index PatchMesh::locate_element(const NurbsPatch& patch, const ParamPoint& pt) const {
    const int dp = patch.dim_param();
    std::array<int, 3> grid_index{0, 0, 0};
    for (int d = 0; d < dp; ++d) {
        const int span = patch.knot_vector(d).find_span(pt[d]);
        const auto& spans = spans_[static_cast<std::size_t>(d)];
        const auto it = std::lower_bound(spans.begin(), spans.end(), span);
        if (it == spans.end() || *it != span) {
            throw std::logic_error("locate_element: span not in element grid");
        }
        grid_index[static_cast<std::size_t>(d)] = static_cast<int>(it - spans.begin());
    }
    Index e = grid_index[2];
    if (dp >= 2) {
        e = e * grid_[1] + grid_index[1];
    }
    e = e * grid_[0] + grid_index[0];
    return e;
}

ParamPoint TraceMesh::lift(const std::array<double, 2>& face_coords, int dim_param) const {
    ParamPoint pt;
    pt.dim = dim_param;
    pt[face.direction] = face_value;
    for (int d = 0; d < dim; ++d) {
        pt[free_dirs[static_cast<std::size_t>(d)]] = face_coords[static_cast<std::size_t>(d)];
    }
    return pt;
}

TraceMesh trace_of_face(const NurbsPatch& patch, const PatchMesh& mesh, const Face& face) {
    const int dp = patch.dim_param();
    if (face.direction < 0 || face.direction >= dp) {
        throw std::invalid_argument("trace_of_face: face direction " + std::to_string(face.direction) +
                                    " not a parametric boundary of a " + std::to_string(dp) +
                                    "D patch");
    }

    TraceMesh trace;
    trace.patch = mesh.elements().empty() ? 0 : mesh.elements().front().patch;
    trace.face = face;
    const auto& kv = patch.knot_vector(face.direction);
    trace.face_value = face.at_max ? kv.range_max() : kv.range_min();
    trace.dim = 0;
    for (int d = 0; d < dp; ++d) {
        if (d != face.direction) {
            trace.free_dirs[static_cast<std::size_t>(trace.dim++)] = d;
        }
    }

    const auto& grid = mesh.spans_per_direction();
    const int fixed_count = static_cast<int>(grid[static_cast<std::size_t>(face.direction)].size());
    const int fixed_index = face.at_max ? fixed_count - 1 : 0;

    const int count0 = trace.dim >= 1 ? static_cast<int>(grid[static_cast<std::size_t>(trace.free_dirs[0])].size()) : 1;
    const int count1 = trace.dim >= 2 ? static_cast<int>(grid[static_cast<std::size_t>(trace.free_dirs[1])].size()) : 1;

    for (int g1 = 0; g1 < count1; ++g1) {
        for (int g0 = 0; g0 < count0; ++g0) {
            std::array<int, 3> grid_index{0, 0, 0};
            grid_index[static_cast<std::size_t>(face.direction)] = fixed_index;
            if (trace.dim >= 1) grid_index[static_cast<std::size_t>(trace.free_dirs[0])] = g0;
            if (trace.dim >= 2) grid_index[static_cast<std::size_t>(trace.free_dirs[1])] = g1;

            Index e = grid_index[2];
            const auto& spans = mesh.spans_per_direction();
            if (dp >= 2) {
                e = e * static_cast<Index>(spans[1].size()) + grid_index[1];
            }
            e = e * static_cast<Index>(spans[0].size()) + grid_index[0];

            TraceElement tel;
            tel.volume_element = e;
            const Element& vol = mesh.element(e);
            for (int d = 0; d < trace.dim; ++d) {
                tel.bounds[static_cast<std::size_t>(d)] =
                    vol.bounds[static_cast<std::size_t>(trace.free_dirs[static_cast<std::size_t>(d)])];
            }
            trace.elements.push_back(tel);
        }
    }
    return trace;
}

namespace {

Eigen::VectorXd newton_step(const Eigen::MatrixXd& jac, const Eigen::VectorXd& residual, bool& singular) {
    // Least-squares step; handles curves/surfaces embedded in higher
    // dimension as well as the square d_p == d_s case.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    singular = sv.size() == 0 || sv(sv.size() - 1) < 1e-12 * sv(0);
    return svd.solve(residual);
}

}  // namespace

ParamPoint inverse_map(const NurbsPatch& patch, const Eigen::VectorXd& x, const ParamPoint& seed) {
    const double tol = 1e-10 * patch.bounding_box_diagonal();
    ParamPoint pt = patch.clamp_to_range(seed);
    double residual_norm = 0.0;

    for (int iter = 0; iter < 30; ++iter) {
        const auto [x_eval, jac] = patch.evaluate_with_jacobian(pt);
        const Eigen::VectorXd residual = x - x_eval;
        residual_norm = residual.norm();
        if (residual_norm < tol) {
            return pt;
        }
        bool singular = false;
        const Eigen::VectorXd delta = newton_step(jac, residual, singular);
        if (singular) {
            throw InversionError("inverse_map: singular Jacobian at iteration " + std::to_string(iter) +
                                     ", residual " + std::to_string(residual_norm),
                                 residual_norm, true);
        }
        for (int d = 0; d < pt.dim; ++d) {
            pt[d] += delta[d];
        }
        pt = patch.clamp_to_range(pt);
    }
    throw InversionError("inverse_map: no convergence in 30 iterations, residual " +
                             std::to_string(residual_norm),
                         residual_norm, false);
}

ParamPoint inverse_map(const NurbsPatch& patch, const Eigen::VectorXd& x) {
    return inverse_map(patch, x, patch.param_center());
}

NurbsPatch insert_knot(const NurbsPatch& patch, int direction, double knot) {
    const int dp = patch.dim_param();
    const int ds = patch.dim_space();
    const KnotVector& kv = patch.knot_vector(direction);
    const int p = kv.degree();
    const auto& U = kv.knots();
    const int span = kv.find_span(knot);

    std::vector<double> new_knots(U.begin(), U.end());
    new_knots.insert(new_knots.begin() + span + 1, knot);

    const int n_old = kv.num_basis();
    const int n_new = n_old + 1;

    std::array<int, 3> counts{patch.num_basis(0), dp >= 2 ? patch.num_basis(1) : 1,
                              dp >= 3 ? patch.num_basis(2) : 1};
    std::array<int, 3> new_counts = counts;
    new_counts[static_cast<std::size_t>(direction)] = n_new;

    const Index total_new = static_cast<Index>(new_counts[0]) * new_counts[1] * new_counts[2];
    Eigen::MatrixXd points(total_new, ds);
    Eigen::VectorXd weights(total_new);

    const auto new_global = [&](int i, int j, int k) {
        return static_cast<Index>(new_counts[0]) * new_counts[1] * k +
               static_cast<Index>(new_counts[0]) * j + i;
    };

    // Boehm insertion applied line by line on the homogeneous net (w*x, w).
    std::array<int, 3> other{};
    int num_other = 0;
    for (int d = 0; d < 3; ++d) {
        if (d != direction) {
            other[static_cast<std::size_t>(num_other++)] = d;
        }
    }
    for (int b = 0; b < counts[static_cast<std::size_t>(other[1])]; ++b) {
        for (int a = 0; a < counts[static_cast<std::size_t>(other[0])]; ++a) {
            const auto line_index = [&](int along, const auto& global) {
                std::array<int, 3> idx{};
                idx[static_cast<std::size_t>(direction)] = along;
                idx[static_cast<std::size_t>(other[0])] = a;
                idx[static_cast<std::size_t>(other[1])] = b;
                return global(idx[0], idx[1], idx[2]);
            };
            const auto old_at = [&](int along) {
                const Index A = line_index(along, [&](int i, int j, int k) { return patch.global_index(i, j, k); });
                Eigen::VectorXd h(ds + 1);
                h.head(ds) = patch.control_points().row(A).transpose() * patch.weights()[A];
                h[ds] = patch.weights()[A];
                return h;
            };
            for (int i = 0; i < n_new; ++i) {
                Eigen::VectorXd h;
                if (i <= span - p) {
                    h = old_at(i);
                } else if (i <= span) {
                    const double denom = U[static_cast<std::size_t>(i + p)] - U[static_cast<std::size_t>(i)];
                    const double alpha = (knot - U[static_cast<std::size_t>(i)]) / denom;
                    h = alpha * old_at(i) + (1.0 - alpha) * old_at(i - 1);
                } else {
                    h = old_at(i - 1);
                }
                const Index A = line_index(i, new_global);
                weights[A] = h[ds];
                points.row(A) = (h.head(ds) / h[ds]).transpose();
            }
        }
    }

    std::vector<KnotVector> kvs;
    for (int d = 0; d < dp; ++d) {
        if (d == direction) {
            kvs.emplace_back(p, new_knots);
        } else {
            kvs.push_back(patch.knot_vector(d));
        }
    }
    return NurbsPatch(std::move(kvs), std::move(points), std::move(weights));
}

NurbsPatch refine_bisect(const NurbsPatch& patch, int times) {
    if (times < 0) {
        throw std::invalid_argument("refine_bisect: times must be non-negative");
    }
    NurbsPatch result = patch;
    for (int round = 0; round < times; ++round) {
        for (int d = 0; d < result.dim_param(); ++d) {
            const KnotVector& kv = result.knot_vector(d);
            std::vector<double> midpoints;
            for (int span : kv.nonempty_spans()) {
                const auto& knots = kv.knots();
                midpoints.push_back(0.5 * (knots[static_cast<std::size_t>(span)] +
                                           knots[static_cast<std::size_t>(span) + 1]));
            }
            for (double mid : midpoints) {
                result = insert_knot(result, d, mid);
            }
        }
    }
    return result;
}

std::vector<FaceQuadraturePoint> face_quadrature(const NurbsPatch& patch, const TraceMesh& trace,
                                                 int num_points) {
    if (trace.dim < 1) {
        throw std::invalid_argument("face_quadrature: face has no extent");
    }
    const GaussRule& rule = gauss_legendre(num_points);
    std::vector<FaceQuadraturePoint> result;

    const int n0 = num_points;
    const int n1 = trace.dim >= 2 ? num_points : 1;

    for (std::size_t te = 0; te < trace.elements.size(); ++te) {
        const TraceElement& tel = trace.elements[te];
        // Interior offset used for orienting the normal outward.
        for (int q1 = 0; q1 < n1; ++q1) {
            for (int q0 = 0; q0 < n0; ++q0) {
                std::array<double, 2> face_coords{};
                double parent_weight = rule.weights[q0];
                double parent_jacobian = 1.0;
                {
                    const auto [a, b] = tel.bounds[0];
                    face_coords[0] = 0.5 * ((b - a) * rule.points[q0] + (b + a));
                    parent_jacobian *= 0.5 * (b - a);
                }
                if (trace.dim >= 2) {
                    const auto [a, b] = tel.bounds[1];
                    face_coords[1] = 0.5 * ((b - a) * rule.points[q1] + (b + a));
                    parent_weight *= rule.weights[q1];
                    parent_jacobian *= 0.5 * (b - a);
                }

                FaceQuadraturePoint qp;
                qp.point = trace.lift(face_coords, patch.dim_param());
                qp.element = tel.volume_element;
                const auto [x, jac] = patch.evaluate_with_jacobian(qp.point);
                qp.x = x;

                double measure = 0.0;
                if (trace.dim == 1) {
                    const Eigen::VectorXd tangent = jac.col(trace.free_dirs[0]);
                    measure = tangent.norm();
                    if (patch.dim_space() == 2) {
                        qp.normal = Eigen::Vector2d(tangent[1], -tangent[0]) / measure;
                    } else {
                        throw std::invalid_argument("face_quadrature: 1D trace in 3D has no unique normal");
                    }
                } else {
                    const Eigen::Vector3d a1 = jac.col(trace.free_dirs[0]);
                    const Eigen::Vector3d a2 = jac.col(trace.free_dirs[1]);
                    const Eigen::Vector3d cross = a1.cross(a2);
                    measure = cross.norm();
                    qp.normal = cross / measure;
                }
                qp.weight = parent_weight * parent_jacobian * measure;

                // Orient outward: compare against a point nudged into the
                // patch along the fixed direction.
                ParamPoint inside = qp.point;
                const auto& kv = patch.knot_vector(trace.face.direction);
                const double nudge = 1e-3 * (kv.range_max() - kv.range_min());
                inside[trace.face.direction] += trace.face.at_max ? -nudge : nudge;
                const Eigen::VectorXd x_in = patch.evaluate(inside);
                if (qp.normal.dot(qp.x - x_in) < 0.0) {
                    qp.normal = -qp.normal;
                }
                result.push_back(std::move(qp));
            }
        }
    }
    return result;
}

double trace_element_diameter(const NurbsPatch& patch, const TraceMesh& trace, Index trace_element) {
    const TraceElement& tel = trace.elements[static_cast<std::size_t>(trace_element)];
    std::vector<Eigen::VectorXd> corners;
    const int nc0 = 2;
    const int nc1 = trace.dim >= 2 ? 2 : 1;
    for (int c1 = 0; c1 < nc1; ++c1) {
        for (int c0 = 0; c0 < nc0; ++c0) {
            std::array<double, 2> face_coords{};
            face_coords[0] = c0 == 0 ? tel.bounds[0].first : tel.bounds[0].second;
            if (trace.dim >= 2) {
                face_coords[1] = c1 == 0 ? tel.bounds[1].first : tel.bounds[1].second;
            }
            corners.push_back(patch.evaluate(trace.lift(face_coords, patch.dim_param())));
        }
    }
    double diameter = 0.0;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        for (std::size_t j = i + 1; j < corners.size(); ++j) {
            diameter = std::max(diameter, (corners[i] - corners[j]).norm());
        }
    }
    return diameter;
}

}  // namespace iga
