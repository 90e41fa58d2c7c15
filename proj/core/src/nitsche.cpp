#include "iganitsche/nitsche.hpp"

#include "iganitsche/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iga {

double stabilization_theta(int degree) {
    if (degree == 1) {
        return 12.0;
    }
    if (degree == 2) {
        return 36.0;
    }
    return 12.0 * degree * degree;
}

double estimate_alpha(const Material& material, int degree, double element_size) {
    if (!(element_size > 0.0)) {
        throw std::invalid_argument("estimate_alpha: element size must be positive");
    }
    const LameConstants lame = lame_constants(material);
    return 0.5 * (lame.lambda + lame.mu) * stabilization_theta(degree) / element_size;
}

Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& normal) {
    if (normal.size() == 2) {
        Eigen::MatrixXd n(2, 3);
        n << normal[0], 0.0, normal[1],
             0.0, normal[1], normal[0];
        return n;
    }
    Eigen::MatrixXd n(3, 6);
    n << normal[0], 0.0, 0.0, normal[1], 0.0, normal[2],
         0.0, normal[1], 0.0, normal[0], normal[2], 0.0,
         0.0, 0.0, normal[2], 0.0, normal[1], normal[0];
    return n;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> jump_average(const Eigen::VectorXd& u1,
                                                         const Eigen::VectorXd& u2,
                                                         const Eigen::VectorXd& s1,
                                                         const Eigen::VectorXd& s2, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("jump_average: gamma must lie in [0, 1]");
    }
    return {u1 - u2, gamma * s1 + (1.0 - gamma) * s2};
}

std::vector<GaussPointPair> generate_interface_gps(const NurbsPatch& patch1, const PatchMesh& mesh1,
                                                   const Face& face1, const NurbsPatch& patch2,
                                                   const PatchMesh& mesh2, int num_points) {
    const TraceMesh trace = trace_of_face(patch1, mesh1, face1);
    const auto face_points = face_quadrature(patch1, trace, num_points);

    // face_quadrature emits trace elements in order, a fixed number of
    // points each; recover the trace element id from the running index.
    const int points_per_element =
        trace.dim >= 2 ? num_points * num_points : num_points;

    std::vector<double> diameters(trace.elements.size());
    for (std::size_t te = 0; te < trace.elements.size(); ++te) {
        diameters[te] = trace_element_diameter(patch1, trace, static_cast<Index>(te));
    }

    std::vector<GaussPointPair> pairs;
    pairs.reserve(face_points.size());
    for (std::size_t i = 0; i < face_points.size(); ++i) {
        const FaceQuadraturePoint& qp = face_points[i];
        GaussPointPair pair;
        pair.xi1 = qp.point;
        pair.element1 = qp.element;
        pair.x = qp.x;
        pair.normal = qp.normal;
        pair.weight = qp.weight;
        pair.trace_diameter = diameters[i / static_cast<std::size_t>(points_per_element)];
        try {
            pair.xi2 = inverse_map(patch2, qp.x);
        } catch (const InversionError& err) {
            std::ostringstream os;
            os << "interface quadrature point (";
            for (Index c = 0; c < qp.x.size(); ++c) {
                os << (c ? ", " : "") << qp.x[c];
            }
            os << ") could not be located on the partner patch: " << err.what();
            throw InterfaceMismatchError(os.str());
        }
        pair.element2 = mesh2.locate_element(patch2, pair.xi2);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

CouplingBlocks coupling_blocks(const ElementMatrices& side1, const ElementMatrices& side2,
                               const Eigen::VectorXd& normal, const Eigen::MatrixXd& c1,
                               const Eigen::MatrixXd& c2, double gamma, double alpha,
                               double weight) {
    const Eigen::MatrixXd n_mat = normal_matrix(normal);
    const Eigen::MatrixXd flux1 = n_mat * (c1 * side1.strain_displacement);
    const Eigen::MatrixXd flux2 = n_mat * (c2 * side2.strain_displacement);

    CouplingBlocks blocks;
    blocks.kn11 = -gamma * weight * side1.shape.transpose() * flux1;
    blocks.kn12 = -(1.0 - gamma) * weight * side1.shape.transpose() * flux2;
    blocks.kn21 = gamma * weight * side2.shape.transpose() * flux1;
    blocks.kn22 = (1.0 - gamma) * weight * side2.shape.transpose() * flux2;
    blocks.ks11 = alpha * weight * side1.shape.transpose() * side1.shape;
    blocks.ks12 = -alpha * weight * side1.shape.transpose() * side2.shape;
    blocks.ks22 = alpha * weight * side2.shape.transpose() * side2.shape;
    return blocks;
}

namespace {

void append_block(TripletList& triplets, const Eigen::MatrixXd& block,
                  const std::vector<Index>& row_dofs, const std::vector<Index>& col_dofs) {
    for (std::size_t b = 0; b < col_dofs.size(); ++b) {
        for (std::size_t a = 0; a < row_dofs.size(); ++a) {
            triplets.emplace_back(row_dofs[a], col_dofs[b],
                                  block(static_cast<Index>(a), static_cast<Index>(b)));
        }
    }
}

std::vector<Index> element_dofs(const Element& element, const DofMap& dofs, Index patch_id, int dim) {
    std::vector<Index> out;
    out.reserve(element.ien.size() * static_cast<std::size_t>(dim));
    for (const Index a : element.ien) {
        for (int c = 0; c < dim; ++c) {
            out.push_back(dofs.dof(patch_id, a, c));
        }
    }
    return out;
}

}  // namespace

void assemble_coupling(const NurbsPatch& patch1, const PatchMesh& mesh1, const Material& material1,
                       Index patch1_id, const NurbsPatch& patch2, const PatchMesh& mesh2,
                       const Material& material2, Index patch2_id,
                       const std::vector<GaussPointPair>& gps, double gamma,
                       const AlphaPolicy& alpha, const DofMap& dofs, TripletList& triplets) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("assemble_coupling: gamma must lie in [0, 1]");
    }
    const int dim = patch1.dim_space();
    const Eigen::MatrixXd c1 = constitutive_matrix(material1);
    const Eigen::MatrixXd c2 = constitutive_matrix(material2);

    // Estimated alpha uses the stiffer side and the larger degree.
    int max_degree = 0;
    for (int d = 0; d < patch1.dim_param(); ++d) {
        max_degree = std::max(max_degree, patch1.knot_vector(d).degree());
    }
    for (int d = 0; d < patch2.dim_param(); ++d) {
        max_degree = std::max(max_degree, patch2.knot_vector(d).degree());
    }
    const LameConstants lame1 = lame_constants(material1);
    const LameConstants lame2 = lame_constants(material2);
    const Material& stiffer =
        (lame1.lambda + lame1.mu) >= (lame2.lambda + lame2.mu) ? material1 : material2;

    for (const GaussPointPair& gp : gps) {
        const Element& e1 = mesh1.element(gp.element1);
        const Element& e2 = mesh2.element(gp.element2);
        const ElementMatrices em1 = element_matrices(patch1, e1, gp.xi1);
        const ElementMatrices em2 = element_matrices(patch2, e2, gp.xi2);

        const double alpha_value = alpha.estimate
                                       ? estimate_alpha(stiffer, max_degree, gp.trace_diameter)
                                       : alpha.value;

        const std::vector<Index> dofs1 = element_dofs(e1, dofs, patch1_id, dim);
        const std::vector<Index> dofs2 = element_dofs(e2, dofs, patch2_id, dim);

        const CouplingBlocks blocks =
            coupling_blocks(em1, em2, gp.normal, c1, c2, gamma, alpha_value, gp.weight);

        // K^n, its transpose (adjoint consistency), and K^s.
        append_block(triplets, blocks.kn11, dofs1, dofs1);
        append_block(triplets, blocks.kn12, dofs1, dofs2);
        append_block(triplets, blocks.kn21, dofs2, dofs1);
        append_block(triplets, blocks.kn22, dofs2, dofs2);
        append_block(triplets, blocks.kn11.transpose(), dofs1, dofs1);
        append_block(triplets, blocks.kn12.transpose(), dofs2, dofs1);
        append_block(triplets, blocks.kn21.transpose(), dofs1, dofs2);
        append_block(triplets, blocks.kn22.transpose(), dofs2, dofs2);
        append_block(triplets, blocks.ks11, dofs1, dofs1);
        append_block(triplets, blocks.ks12, dofs1, dofs2);
        append_block(triplets, blocks.ks12.transpose(), dofs2, dofs1);
        append_block(triplets, blocks.ks22, dofs2, dofs2);
    }
}

}  // namespace iga
