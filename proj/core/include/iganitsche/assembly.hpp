#pragma once

#include "iganitsche/elasticity.hpp"
#include "iganitsche/mesh.hpp"
#include "iganitsche/model.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <utility>
#include <vector>

namespace iga {

using Triplet = Eigen::Triplet<double>;
using TripletList = std::vector<Triplet>;

/// Patch-major dof numbering: control-point-major within a patch,
/// component fastest. dof = offset(patch) + point * dim + component.
class DofMap {
public:
    DofMap() = default;
    explicit DofMap(const std::vector<NurbsPatch>& patches);

    Index dof(Index patch, Index point, int component) const {
        return offsets_[static_cast<std::size_t>(patch)] + point * dim_ + component;
    }
    Index patch_offset(Index patch) const { return offsets_[static_cast<std::size_t>(patch)]; }
    Index patch_dofs(Index patch) const {
        return offsets_[static_cast<std::size_t>(patch) + 1] - offsets_[static_cast<std::size_t>(patch)];
    }
    Index total() const { return offsets_.empty() ? 0 : offsets_.back(); }
    int dim() const { return dim_; }

private:
    std::vector<Index> offsets_;
    int dim_ = 0;
};

/// Element bulk contributions B^T C B over a (degree+1)-point Gauss
/// product rule, plus the body-force load when present. Triplets are
/// appended in element order regardless of `threads`, so assembly is
/// bitwise deterministic.
void assemble_bulk(const NurbsPatch& patch, const PatchMesh& mesh, const Material& material,
                   const DofMap& dofs, Index patch_id, int threads, TripletList& triplets,
                   Eigen::VectorXd& rhs, const FieldFunction* body_force = nullptr);

/// Boundary traction integrated over the face trace.
void assemble_neumann(const NurbsPatch& patch, const PatchMesh& mesh, const NeumannSpec& spec,
                      const DofMap& dofs, Eigen::VectorXd& rhs);

/// Prescribed control values on a boundary face. Faces whose free
/// directions are all degree 1 (interpolatory basis) take the value of g
/// at the face nodes; higher degrees use the least-squares projection
/// minimizing the integral of (sum R_A d_A - g)^2 over the face.
/// Returns (global control-point index, prescribed vector) pairs.
/// Throws ProjectionError when the face Gram matrix is singular
/// (degenerate face).
std::vector<std::pair<Index, Eigen::VectorXd>> dirichlet_projection(const NurbsPatch& patch,
                                                                    const PatchMesh& mesh,
                                                                    const Face& face,
                                                                    const FieldFunction& value);

}  // namespace iga
