#include "iganitsche/elasticity.hpp"

#include "iganitsche/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace iga {

void Material::validate() const {
    if (!(youngs_modulus > 0.0)) {
        throw std::invalid_argument("Material: Young's modulus must be positive");
    }
    if (!(poisson_ratio > -1.0) || !(poisson_ratio < 0.5)) {
        throw std::invalid_argument("Material: Poisson ratio must lie in (-1, 0.5)");
    }
}

LameConstants lame_constants(const Material& material) {
    const double E = material.youngs_modulus;
    const double nu = material.poisson_ratio;
    if (nu >= 0.5) {
        throw std::invalid_argument("lame_constants: incompressible material (nu = 0.5)");
    }
    material.validate();
    LameConstants lame;
    lame.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    lame.mu = E / (2.0 * (1.0 + nu));
    lame.lambda_plane_stress =
        2.0 * lame.lambda * lame.mu / (lame.lambda + 2.0 * lame.mu);
    return lame;
}

int voigt_size(Formulation formulation) {
    return formulation == Formulation::Solid3D ? 6 : 3;
}

int voigt_size_for_dim(int dim_space) {
    return dim_space == 3 ? 6 : 3;
}

Eigen::MatrixXd constitutive_matrix(const Material& material) {
    const double E = material.youngs_modulus;
    const double nu = material.poisson_ratio;
    const LameConstants lame = lame_constants(material);

    switch (material.formulation) {
        case Formulation::PlaneStress: {
            Eigen::Matrix3d c;
            const double f = E / (1.0 - nu * nu);
            c << f, f * nu, 0.0,
                 f * nu, f, 0.0,
                 0.0, 0.0, f * (1.0 - nu) / 2.0;
            return c;
        }
        case Formulation::PlaneStrain: {
            Eigen::Matrix3d c;
            c << lame.lambda + 2.0 * lame.mu, lame.lambda, 0.0,
                 lame.lambda, lame.lambda + 2.0 * lame.mu, 0.0,
                 0.0, 0.0, lame.mu;
            return c;
        }
        case Formulation::Solid3D: {
            Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 6);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    c(i, j) = lame.lambda;
                }
                c(i, i) = lame.lambda + 2.0 * lame.mu;
                c(3 + i, 3 + i) = lame.mu;
            }
            return c;
        }
    }
    throw std::logic_error("constitutive_matrix: unknown formulation");
}

double von_mises(const Eigen::VectorXd& stress, const Material& material) {
    double sxx, syy, szz, sxy, syz, sxz;
    if (stress.size() == 3) {
        sxx = stress[0];
        syy = stress[1];
        sxy = stress[2];
        szz = material.formulation == Formulation::PlaneStrain
                  ? material.poisson_ratio * (sxx + syy)
                  : 0.0;
        syz = sxz = 0.0;
    } else {
        sxx = stress[0];
        syy = stress[1];
        szz = stress[2];
        sxy = stress[3];
        syz = stress[4];
        sxz = stress[5];
    }
    const double d1 = sxx - syy;
    const double d2 = syy - szz;
    const double d3 = szz - sxx;
    return std::sqrt(0.5 * (d1 * d1 + d2 * d2 + d3 * d3) +
                     3.0 * (sxy * sxy + syz * syz + sxz * sxz));
}

ElementMatrices element_matrices(const NurbsPatch& patch, const Element& element,
                                 const ParamPoint& pt) {
    const int dim = patch.dim_space();

    ElementMatrices out;
    out.basis = patch.rational_basis(pt);
    const Index n_en = out.basis.values.size();

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
    out.x = Eigen::VectorXd::Zero(dim);
    for (Index a = 0; a < n_en; ++a) {
        const auto point = patch.control_points().row(out.basis.indices[static_cast<std::size_t>(a)]).transpose();
        out.x += out.basis.values[a] * point;
        for (int d = 0; d < dim; ++d) {
            jac.col(d) += out.basis.derivatives(a, d) * point;
        }
    }

    out.det_jacobian = jac.determinant();
    if (!(out.det_jacobian > 0.0)) {
        throw InvertedElementError("element_matrices: non-positive Jacobian determinant " +
                                       std::to_string(out.det_jacobian) + " in element of patch " +
                                       std::to_string(element.patch),
                                   element.patch);
    }

    // dR/dx = dR/dxi * J^{-1}
    const Eigen::MatrixXd grad = out.basis.derivatives * jac.inverse();

    const int nv = voigt_size_for_dim(dim);
    out.strain_displacement = Eigen::MatrixXd::Zero(nv, dim * n_en);
    out.shape = Eigen::MatrixXd::Zero(dim, dim * n_en);

    for (Index a = 0; a < n_en; ++a) {
        const Index col = dim * a;
        for (int c = 0; c < dim; ++c) {
            out.shape(c, col + c) = out.basis.values[a];
        }
        if (dim == 2) {
            out.strain_displacement(0, col + 0) = grad(a, 0);
            out.strain_displacement(1, col + 1) = grad(a, 1);
            out.strain_displacement(2, col + 0) = grad(a, 1);
            out.strain_displacement(2, col + 1) = grad(a, 0);
        } else {
            out.strain_displacement(0, col + 0) = grad(a, 0);
            out.strain_displacement(1, col + 1) = grad(a, 1);
            out.strain_displacement(2, col + 2) = grad(a, 2);
            // xy
            out.strain_displacement(3, col + 0) = grad(a, 1);
            out.strain_displacement(3, col + 1) = grad(a, 0);
            // yz
            out.strain_displacement(4, col + 1) = grad(a, 2);
            out.strain_displacement(4, col + 2) = grad(a, 1);
            // xz
            out.strain_displacement(5, col + 0) = grad(a, 2);
            out.strain_displacement(5, col + 2) = grad(a, 0);
        }
    }
    return out;
}

}  // namespace iga
