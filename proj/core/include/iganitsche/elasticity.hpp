#pragma once

#include "iganitsche/mesh.hpp"
#include "iganitsche/nurbs_patch.hpp"

#include <Eigen/Core>

namespace iga {

enum class Formulation { PlaneStress, PlaneStrain, Solid3D };

struct Material {
    double youngs_modulus = 1.0;
    double poisson_ratio = 0.0;
    Formulation formulation = Formulation::PlaneStress;

    /// Throws std::invalid_argument unless E > 0 and -1 < nu < 0.5.
    void validate() const;
};

struct LameConstants {
    double lambda = 0.0;
    double mu = 0.0;
    /// Effective lambda* = 2*lambda*mu/(lambda+2*mu), reported for plane stress.
    double lambda_plane_stress = 0.0;
};

/// lambda = E*nu/((1+nu)(1-2nu)), mu = E/(2(1+nu)). Throws for nu = 0.5.
LameConstants lame_constants(const Material& material);

/// Voigt vector length: 3 in 2D (xx, yy, xy), 6 in 3D (xx, yy, zz, xy, yz, xz).
/// Strain vectors carry engineering (doubled) shear components.
int voigt_size(Formulation formulation);
int voigt_size_for_dim(int dim_space);

/// Symmetric positive-definite material matrix in Voigt form.
Eigen::MatrixXd constitutive_matrix(const Material& material);

/// Von Mises stress from a Voigt stress vector. In 2D, sigma_zz = 0 for
/// plane stress and nu*(sxx+syy) for plane strain.
double von_mises(const Eigen::VectorXd& stress, const Material& material);

/// Pointwise kinematic matrices of one element at a parameter point.
struct ElementMatrices {
    Eigen::MatrixXd strain_displacement;  ///< B, voigt x (dim*n_en)
    Eigen::MatrixXd shape;                ///< N, dim x (dim*n_en), interleaved blocks
    double det_jacobian = 0.0;
    Eigen::VectorXd x;                    ///< physical position
    NurbsPatch::BasisEval basis;          ///< underlying rational basis data
};

/// Shape derivatives pushed to physical space through the inverse
/// parametric Jacobian. Throws InvertedElementError when det J <= 0.
ElementMatrices element_matrices(const NurbsPatch& patch, const Element& element,
                                 const ParamPoint& pt);

}  // namespace iga
