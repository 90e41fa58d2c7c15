#pragma once

#include "iganitsche/assembly.hpp"
#include "iganitsche/mesh.hpp"
#include "iganitsche/model.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace iga {

/// A validated model plus its element meshes and dof numbering.
struct DiscreteModel {
    MultiPatchModel model;
    std::vector<PatchMesh> meshes;
    DofMap dofs;

    /// Validates the model and builds meshes; the returned object is
    /// immutable and shared by systems and solution fields.
    static std::shared_ptr<const DiscreteModel> build(MultiPatchModel model);
};

struct AssemblyOptions {
    int threads = 1;
    int interface_points = 0;  ///< Gauss points per interface direction; 0 = max(p1,p2)+1
    std::optional<double> alpha_override;
    std::optional<double> gamma_override;
};

/// Global symmetric system K a = f with the Dirichlet constraint set.
struct SparseSystem {
    std::shared_ptr<const DiscreteModel> discretization;
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<std::pair<Index, double>> constraints;  ///< (dof, prescribed value), sorted
};

/// K^b of every patch, all interface coupling blocks (K^n + transpose +
/// K^s), Neumann and body loads, and the Dirichlet constraint map.
/// Triplet order is fixed, so repeated assembly is bitwise identical.
SparseSystem assemble_global(std::shared_ptr<const DiscreteModel> discretization,
                             const AssemblyOptions& options = {});

struct SolveOptions {
    bool check_spd = false;
    double residual_tolerance = 1e-10;
};

struct SolveReport {
    double residual = 0.0;  ///< |K a - f| / |f| on the free dofs
    int refinement_steps = 0;
    bool spd_checked = false;
    bool positive_definite = false;
    Index first_nonpositive_pivot = -1;  ///< free-dof index, -1 when SPD
};

struct FieldValue {
    Eigen::VectorXd displacement;
    Eigen::VectorXd strain;  ///< Voigt, engineering shear
    Eigen::VectorXd stress;  ///< Voigt
};

/// Solved control values with field evaluation. Immutable and shareable.
class SolutionField {
public:
    SolutionField(std::shared_ptr<const DiscreteModel> discretization, Eigen::VectorXd values)
        : discretization_(std::move(discretization)), values_(std::move(values)) {}

    const Eigen::VectorXd& control_values() const { return values_; }
    Eigen::VectorXd patch_values(Index patch) const;
    const DiscreteModel& discretization() const { return *discretization_; }

    /// u = N a, eps = B a, sigma = C B a at a parameter point.
    FieldValue evaluate(Index patch, const ParamPoint& pt) const;
    Eigen::VectorXd displacement(Index patch, const ParamPoint& pt) const;

private:
    std::shared_ptr<const DiscreteModel> discretization_;
    Eigen::VectorXd values_;
};

/// Direct sparse LDLT solve after symmetric elimination of the
/// constraints; iterative refinement until the residual bound holds.
/// Throws SolverError (with the failing pivot index) on singular
/// matrices or when the tolerance cannot be met.
SolutionField solve(const SparseSystem& system, const SolveOptions& options = {},
                    SolveReport* report = nullptr);

/// K a - f at the constrained dofs (zero elsewhere): the reactions.
Eigen::VectorXd reaction_forces(const SparseSystem& system, const SolutionField& solution);

}  // namespace iga
