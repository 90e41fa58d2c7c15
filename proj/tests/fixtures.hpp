#pragma once

#include "iganitsche/model.hpp"
#include "iganitsche/patch_builders.hpp"

#include <Eigen/Dense>

#include <array>

namespace iga::test {

/// 3D cantilever [0,L]x[0,W]x[0,H] split at x = L/2, clamped at x = 0
/// with a unit z-displacement imposed on the x = L face.
inline MultiPatchModel cantilever3d_two_patch(double youngs_modulus, double poisson_ratio,
                                              double length, double width, double height,
                                              int degree, std::array<int, 3> left_elements,
                                              std::array<int, 3> right_elements,
                                              const AlphaPolicy& alpha) {
    MultiPatchModel model;
    const double half = length / 2.0;
    model.patches.push_back(make_box_patch(
        {degree, degree, degree}, {left_elements[0], left_elements[1], left_elements[2]},
        Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(half, width, height)));
    model.patches.push_back(make_box_patch(
        {degree, degree, degree}, {right_elements[0], right_elements[1], right_elements[2]},
        Eigen::Vector3d(half, 0, 0), Eigen::Vector3d(length, width, height)));
    model.materials.push_back(Material{youngs_modulus, poisson_ratio, Formulation::Solid3D});
    model.patch_material = {0, 0};
    model.dirichlet.push_back(
        {0, Face{0, false}, FieldFunction::constant(Eigen::Vector3d(0, 0, 0))});
    model.dirichlet.push_back(
        {1, Face{0, true}, FieldFunction::constant(Eigen::Vector3d(0, 0, 1))});
    InterfaceSpec iface;
    iface.patch1 = 0;
    iface.patch2 = 1;
    iface.face1 = Face{0, true};
    iface.face2 = Face{0, false};
    iface.alpha = alpha;
    model.interfaces.push_back(iface);
    return model;
}

inline MultiPatchModel cantilever3d_monolithic(double youngs_modulus, double poisson_ratio,
                                               double length, double width, double height,
                                               int degree, std::array<int, 3> num_elements) {
    MultiPatchModel model;
    model.patches.push_back(make_box_patch(
        {degree, degree, degree}, {num_elements[0], num_elements[1], num_elements[2]},
        Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(length, width, height)));
    model.materials.push_back(Material{youngs_modulus, poisson_ratio, Formulation::Solid3D});
    model.patch_material = {0};
    model.dirichlet.push_back(
        {0, Face{0, false}, FieldFunction::constant(Eigen::Vector3d(0, 0, 0))});
    model.dirichlet.push_back(
        {0, Face{0, true}, FieldFunction::constant(Eigen::Vector3d(0, 0, 1))});
    return model;
}

/// Two-patch model under a global linear displacement field applied on
/// every outer boundary face; the interface stays weakly coupled.
/// dim = 2: [0,1]^2 and [1,2]x[0,1]; dim = 3: unit cubes side by side.
inline MultiPatchModel cross_interface_patch_test(int dim, int degree,
                                                  std::array<int, 3> left_elements,
                                                  std::array<int, 3> right_elements,
                                                  double gamma = 0.5) {
    MultiPatchModel model;
    using M = FieldFunction::Monomial;
    if (dim == 2) {
        model.patches.push_back(make_box_patch({degree, degree},
                                               {left_elements[0], left_elements[1]},
                                               Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)));
        model.patches.push_back(make_box_patch({degree, degree},
                                               {right_elements[0], right_elements[1]},
                                               Eigen::Vector2d(1, 0), Eigen::Vector2d(2, 1)));
        model.materials.push_back(Material{3.0e7, 0.3, Formulation::PlaneStress});
    } else {
        model.patches.push_back(
            make_box_patch({degree, degree, degree},
                           {left_elements[0], left_elements[1], left_elements[2]},
                           Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)));
        model.patches.push_back(
            make_box_patch({degree, degree, degree},
                           {right_elements[0], right_elements[1], right_elements[2]},
                           Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(2, 1, 1)));
        model.materials.push_back(Material{3.0e7, 0.3, Formulation::Solid3D});
    }
    model.patch_material = {0, 0};

    FieldFunction g = FieldFunction::constant(Eigen::Vector2d(0, 0));
    if (dim == 2) {
        g = FieldFunction::polynomial({
            {M{1.3e-3, {1, 0, 0}}, M{4.0e-4, {0, 1, 0}}, M{2.0e-4, {0, 0, 0}}},
            {M{-2.0e-4, {1, 0, 0}}, M{8.0e-4, {0, 1, 0}}},
        });
    } else {
        g = FieldFunction::polynomial({
            {M{1.0e-3, {1, 0, 0}}, M{2.0e-4, {0, 1, 0}}, M{3.0e-4, {0, 0, 1}}},
            {M{4.0e-4, {1, 0, 0}}, M{-5.0e-4, {0, 1, 0}}, M{1.0e-4, {0, 0, 1}}},
            {M{2.0e-4, {1, 0, 0}}, M{3.0e-4, {0, 1, 0}}, M{6.0e-4, {0, 0, 1}}},
        });
    }

    // Outer boundary only: the interface faces (patch 0 xi_max / patch 1
    // xi_min) are left to the coupling terms.
    model.dirichlet.push_back({0, Face{0, false}, g});
    model.dirichlet.push_back({1, Face{0, true}, g});
    for (Index patch : {Index{0}, Index{1}}) {
        for (int d = 1; d < dim; ++d) {
            for (bool at_max : {false, true}) {
                model.dirichlet.push_back({patch, Face{d, at_max}, g});
            }
        }
    }

    InterfaceSpec iface;
    iface.patch1 = 0;
    iface.patch2 = 1;
    iface.face1 = Face{0, true};
    iface.face2 = Face{0, false};
    iface.gamma = gamma;
    iface.alpha = AlphaPolicy::estimated();
    model.interfaces.push_back(iface);
    return model;
}

}  // namespace iga::test
