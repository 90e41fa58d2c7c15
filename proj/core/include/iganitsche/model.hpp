#pragma once

#include "iganitsche/elasticity.hpp"
#include "iganitsche/nurbs_patch.hpp"
#include "iganitsche/types.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace iga {

/// A vector-valued function of the physical position, restricted to the
/// forms the model file can express: constants, polynomials in x (one
/// monomial list per component), and the named Timoshenko fields.
class FieldFunction {
public:
    enum class Kind { Constant, Polynomial, Named };

    struct Monomial {
        double coefficient = 0.0;
        std::array<int, 3> powers{};
    };

    static FieldFunction constant(Eigen::VectorXd values);
    static FieldFunction polynomial(std::vector<std::vector<Monomial>> components);
    /// Names: "timoshenko_displacement", "timoshenko_traction";
    /// parameters L, D, P, E, nu.
    static FieldFunction named(std::string name, std::vector<std::pair<std::string, double>> params);

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
    int components() const;

    Kind kind() const { return kind_; }
    const Eigen::VectorXd& constant_values() const { return constant_; }
    const std::vector<std::vector<Monomial>>& polynomial_components() const { return polynomial_; }
    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, double>>& parameters() const { return params_; }
    double parameter(const std::string& key) const;

private:
    Kind kind_ = Kind::Constant;
    Eigen::VectorXd constant_;
    std::vector<std::vector<Monomial>> polynomial_;
    std::string name_;
    std::vector<std::pair<std::string, double>> params_;
};

struct DirichletSpec {
    Index patch = 0;
    Face face;
    FieldFunction value = FieldFunction::constant(Eigen::VectorXd::Zero(2));
};

struct NeumannSpec {
    Index patch = 0;
    Face face;
    FieldFunction traction = FieldFunction::constant(Eigen::VectorXd::Zero(2));
};

/// Stabilization parameter policy of one interface: a fixed value or the
/// per-element closed-form estimate.
struct AlphaPolicy {
    bool estimate = true;
    double value = 0.0;  ///< used when estimate is false; must be > 0

    static AlphaPolicy estimated() { return {true, 0.0}; }
    static AlphaPolicy explicit_value(double alpha) { return {false, alpha}; }
};

struct InterfaceSpec {
    Index patch1 = 0;  ///< integration side (drives the trace quadrature)
    Index patch2 = 1;
    Face face1;
    Face face2;
    double gamma = 0.5;  ///< stress-average weight, in [0, 1]
    AlphaPolicy alpha = AlphaPolicy::estimated();
};

/// The solvable problem: patches, materials, boundary conditions and
/// interface declarations.
struct MultiPatchModel {
    std::vector<NurbsPatch> patches;
    std::vector<Material> materials;
    std::vector<Index> patch_material;  ///< material id per patch
    std::vector<DirichletSpec> dirichlet;
    std::vector<NeumannSpec> neumann;
    std::vector<InterfaceSpec> interfaces;
    std::optional<FieldFunction> body_force;

    int dim_space() const { return patches.empty() ? 0 : patches.front().dim_space(); }
    const Material& material_of(Index patch) const {
        return materials[static_cast<std::size_t>(patch_material[static_cast<std::size_t>(patch)])];
    }

    /// Structural checks plus interface coincidence sampling (points on
    /// face 1 must be invertible on patch 2 within 1e-8 of the geometry
    /// scale and land on the declared face 2). Throws ModelError.
    void validate() const;
};

}  // namespace iga
