#pragma once

#include "iganitsche/assembly.hpp"
#include "iganitsche/elasticity.hpp"
#include "iganitsche/mesh.hpp"
#include "iganitsche/model.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace iga {

/// One interface quadrature point expressed in both patches' parameter
/// spaces. The normal is the outward unit normal of patch 1; the weight
/// carries the physical surface measure.
struct GaussPointPair {
    ParamPoint xi1;
    Index element1 = 0;
    ParamPoint xi2;
    Index element2 = 0;
    Eigen::VectorXd x;
    Eigen::VectorXd normal;
    double weight = 0.0;
    double trace_diameter = 0.0;  ///< physical diameter of the generating trace element
};

/// theta(1) = 12 and theta(2) = 36; other degrees extrapolate as 12 p^2.
double stabilization_theta(int degree);

/// Closed-form stabilization estimate alpha = (lambda + mu)/2 * theta(p) / h_e.
double estimate_alpha(const Material& material, int degree, double element_size);

/// Voigt-contraction matrix built from a unit normal: maps a Voigt
/// stress vector to the traction sigma . n.
Eigen::MatrixXd normal_matrix(const Eigen::VectorXd& normal);

/// Interface operators: jump u1 - u2 and average gamma*s1 + (1-gamma)*s2.
/// Throws std::invalid_argument for gamma outside [0, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> jump_average(const Eigen::VectorXd& u1,
                                                         const Eigen::VectorXd& u2,
                                                         const Eigen::VectorXd& s1,
                                                         const Eigen::VectorXd& s2, double gamma);

/// Pointwise contributions of one interface quadrature point. The
/// consistency blocks carry the (gamma, 1-gamma) average weights; the
/// ks21 block is the transpose of ks12.
struct CouplingBlocks {
    Eigen::MatrixXd kn11, kn12, kn21, kn22;  ///< rows test side, cols stress side
    Eigen::MatrixXd ks11, ks12, ks22;        ///< stabilization alpha N^T N
};

CouplingBlocks coupling_blocks(const ElementMatrices& side1, const ElementMatrices& side2,
                               const Eigen::VectorXd& normal, const Eigen::MatrixXd& c1,
                               const Eigen::MatrixXd& c2, double gamma, double alpha,
                               double weight);

/// Distribute Gauss points on the trace mesh of patch 1's face
/// (`num_points` per direction), map each to physical space, and invert
/// on patch 2. Throws InterfaceMismatchError when a point cannot be
/// matched on patch 2.
std::vector<GaussPointPair> generate_interface_gps(const NurbsPatch& patch1, const PatchMesh& mesh1,
                                                   const Face& face1, const NurbsPatch& patch2,
                                                   const PatchMesh& mesh2, int num_points);

/// Consistency blocks K^n, their transpose, and the stabilization K^s of
/// one interface, appended as global triplets. The alpha policy resolves
/// per quadrature point from the trace-element size when estimating.
void assemble_coupling(const NurbsPatch& patch1, const PatchMesh& mesh1, const Material& material1,
                       Index patch1_id, const NurbsPatch& patch2, const PatchMesh& mesh2,
                       const Material& material2, Index patch2_id,
                       const std::vector<GaussPointPair>& gps, double gamma,
                       const AlphaPolicy& alpha, const DofMap& dofs, TripletList& triplets);

}  // namespace iga
