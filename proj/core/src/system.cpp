#include "iganitsche/system.hpp"

#include "iganitsche/errors.hpp"
#include "iganitsche/nitsche.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace iga {

std::shared_ptr<const DiscreteModel> DiscreteModel::build(MultiPatchModel model) {
    model.validate();
    auto disc = std::make_shared<DiscreteModel>();
    disc->meshes.reserve(model.patches.size());
    for (std::size_t m = 0; m < model.patches.size(); ++m) {
        disc->meshes.push_back(build_elements(model.patches[m], static_cast<Index>(m)));
    }
    disc->dofs = DofMap(model.patches);
    disc->model = std::move(model);
    return disc;
}

SparseSystem assemble_global(std::shared_ptr<const DiscreteModel> discretization,
                             const AssemblyOptions& options) {
    const DiscreteModel& disc = *discretization;
    const MultiPatchModel& model = disc.model;

    SparseSystem system;
    system.discretization = discretization;
    const Index total = disc.dofs.total();
    system.rhs = Eigen::VectorXd::Zero(total);

    TripletList triplets;
    const FieldFunction* body = model.body_force ? &*model.body_force : nullptr;
    for (std::size_t m = 0; m < model.patches.size(); ++m) {
        assemble_bulk(model.patches[m], disc.meshes[m], model.material_of(static_cast<Index>(m)),
                      disc.dofs, static_cast<Index>(m), options.threads, triplets, system.rhs, body);
    }

    for (const NeumannSpec& spec : model.neumann) {
        assemble_neumann(model.patches[static_cast<std::size_t>(spec.patch)],
                         disc.meshes[static_cast<std::size_t>(spec.patch)], spec, disc.dofs,
                         system.rhs);
    }

    for (const InterfaceSpec& iface : model.interfaces) {
        const NurbsPatch& p1 = model.patches[static_cast<std::size_t>(iface.patch1)];
        const NurbsPatch& p2 = model.patches[static_cast<std::size_t>(iface.patch2)];
        const PatchMesh& m1 = disc.meshes[static_cast<std::size_t>(iface.patch1)];
        const PatchMesh& m2 = disc.meshes[static_cast<std::size_t>(iface.patch2)];

        int num_points = options.interface_points;
        if (num_points <= 0) {
            int max_degree = 0;
            for (int d = 0; d < p1.dim_param(); ++d) {
                max_degree = std::max(max_degree, p1.knot_vector(d).degree());
            }
            for (int d = 0; d < p2.dim_param(); ++d) {
                max_degree = std::max(max_degree, p2.knot_vector(d).degree());
            }
            num_points = max_degree + 1;
        }

        const auto gps = generate_interface_gps(p1, m1, iface.face1, p2, m2, num_points);
        const double gamma = options.gamma_override.value_or(iface.gamma);
        AlphaPolicy alpha = iface.alpha;
        if (options.alpha_override) {
            alpha = AlphaPolicy::explicit_value(*options.alpha_override);
        }
        assemble_coupling(p1, m1, model.material_of(iface.patch1), iface.patch1, p2, m2,
                          model.material_of(iface.patch2), iface.patch2, gps, gamma, alpha,
                          disc.dofs, triplets);
    }

    system.matrix.resize(total, total);
    system.matrix.setFromTriplets(triplets.begin(), triplets.end());

    // Dirichlet constraints; conflicting prescriptions at shared control
    // points must agree.
    std::vector<std::pair<Index, double>> constraints;
    const double scale = [&] {
        double s = 0.0;
        for (const auto& patch : model.patches) {
            s = std::max(s, patch.bounding_box_diagonal());
        }
        return std::max(s, 1.0);
    }();
    for (const DirichletSpec& spec : model.dirichlet) {
        const auto values = dirichlet_projection(model.patches[static_cast<std::size_t>(spec.patch)],
                                                 disc.meshes[static_cast<std::size_t>(spec.patch)],
                                                 spec.face, spec.value);
        for (const auto& [point, value] : values) {
            for (int c = 0; c < disc.dofs.dim(); ++c) {
                constraints.emplace_back(disc.dofs.dof(spec.patch, point, c), value[c]);
            }
        }
    }
    std::sort(constraints.begin(), constraints.end());
    for (std::size_t i = 0; i + 1 < constraints.size(); ++i) {
        if (constraints[i].first == constraints[i + 1].first &&
            std::abs(constraints[i].second - constraints[i + 1].second) > 1e-8 * scale) {
            throw ModelError("assemble_global: conflicting Dirichlet values at dof " +
                             std::to_string(constraints[i].first));
        }
    }
    constraints.erase(std::unique(constraints.begin(), constraints.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; }),
                      constraints.end());
    system.constraints = std::move(constraints);
    return system;
}

namespace {

struct ReducedSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<Index> free_dofs;  ///< reduced index -> full dof
};

ReducedSystem reduce(const SparseSystem& system) {
    const Index total = system.matrix.rows();
    std::vector<Index> reduced_of(static_cast<std::size_t>(total), -1);
    Eigen::VectorXd prescribed = Eigen::VectorXd::Zero(total);
    std::vector<bool> constrained(static_cast<std::size_t>(total), false);
    for (const auto& [dof, value] : system.constraints) {
        constrained[static_cast<std::size_t>(dof)] = true;
        prescribed[dof] = value;
    }

    ReducedSystem red;
    for (Index i = 0; i < total; ++i) {
        if (!constrained[static_cast<std::size_t>(i)]) {
            reduced_of[static_cast<std::size_t>(i)] = static_cast<Index>(red.free_dofs.size());
            red.free_dofs.push_back(i);
        }
    }

    const Index n_free = static_cast<Index>(red.free_dofs.size());
    red.rhs.resize(n_free);
    for (Index r = 0; r < n_free; ++r) {
        red.rhs[r] = system.rhs[red.free_dofs[static_cast<std::size_t>(r)]];
    }

    TripletList triplets;
    for (Index col = 0; col < system.matrix.outerSize(); ++col) {
        const Index rc = reduced_of[static_cast<std::size_t>(col)];
        for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
            const Index rr = reduced_of[static_cast<std::size_t>(it.row())];
            if (rr < 0) {
                continue;
            }
            if (rc >= 0) {
                triplets.emplace_back(rr, rc, it.value());
            } else {
                red.rhs[rr] -= it.value() * prescribed[col];
            }
        }
    }
    red.matrix.resize(n_free, n_free);
    red.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return red;
}

}  // namespace

SolutionField solve(const SparseSystem& system, const SolveOptions& options, SolveReport* report) {
    const ReducedSystem red = reduce(system);
    const Index n_free = red.matrix.rows();

    SolveReport local_report;
    SolveReport& out = report != nullptr ? *report : local_report;
    out = SolveReport{};

    Eigen::VectorXd free_values;
    if (n_free > 0) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
        ldlt.compute(red.matrix);
        if (ldlt.info() != Eigen::Success) {
            throw SolverError("solve: factorization failed (matrix singular or not factorizable)", -1);
        }

        const Eigen::VectorXd& d = ldlt.vectorD();
        const double d_max = d.cwiseAbs().maxCoeff();
        for (Index i = 0; i < d.size(); ++i) {
            if (!std::isfinite(d[i]) || std::abs(d[i]) < 1e-14 * d_max) {
                const Index dof = red.free_dofs[static_cast<std::size_t>(
                    ldlt.permutationPinv().indices()[i])];
                throw SolverError("solve: singular pivot " + std::to_string(d[i]) +
                                      " at factorization index " + std::to_string(i) + " (dof " +
                                      std::to_string(dof) +
                                      "); missing constraints or insufficient stabilization",
                                  i);
            }
        }
        if (options.check_spd) {
            out.spd_checked = true;
            out.positive_definite = true;
            for (Index i = 0; i < d.size(); ++i) {
                if (d[i] <= 0.0) {
                    out.positive_definite = false;
                    out.first_nonpositive_pivot = i;
                    break;
                }
            }
        }

        free_values = ldlt.solve(red.rhs);
        const double rhs_norm = std::max(red.rhs.norm(), 1e-300);
        double residual = (red.matrix.selfadjointView<Eigen::Lower>() * free_values - red.rhs).norm() / rhs_norm;
        while (residual > options.residual_tolerance && out.refinement_steps < 3) {
            const Eigen::VectorXd r =
                red.rhs - red.matrix.selfadjointView<Eigen::Lower>() * free_values;
            free_values += ldlt.solve(r);
            residual = (red.matrix.selfadjointView<Eigen::Lower>() * free_values - red.rhs).norm() / rhs_norm;
            ++out.refinement_steps;
        }
        out.residual = residual;
        if (!(residual <= options.residual_tolerance) && red.rhs.norm() > 0.0) {
            throw SolverError("solve: residual " + std::to_string(residual) +
                                  " exceeds tolerance after iterative refinement",
                              -1);
        }
    }

    Eigen::VectorXd values = Eigen::VectorXd::Zero(system.matrix.rows());
    for (const auto& [dof, value] : system.constraints) {
        values[dof] = value;
    }
    for (Index r = 0; r < n_free; ++r) {
        values[red.free_dofs[static_cast<std::size_t>(r)]] = free_values[r];
    }
    return SolutionField(system.discretization, std::move(values));
}

Eigen::VectorXd SolutionField::patch_values(Index patch) const {
    return values_.segment(discretization_->dofs.patch_offset(patch),
                           discretization_->dofs.patch_dofs(patch));
}

FieldValue SolutionField::evaluate(Index patch, const ParamPoint& pt) const {
    const DiscreteModel& disc = *discretization_;
    const NurbsPatch& p = disc.model.patches[static_cast<std::size_t>(patch)];
    const PatchMesh& mesh = disc.meshes[static_cast<std::size_t>(patch)];
    const Index e = mesh.locate_element(p, pt);
    const Element& element = mesh.element(e);
    const ElementMatrices em = element_matrices(p, element, pt);
    const Material& material = disc.model.material_of(patch);

    const int dim = p.dim_space();
    Eigen::VectorXd local(static_cast<Index>(element.ien.size()) * dim);
    for (std::size_t a = 0; a < element.ien.size(); ++a) {
        for (int c = 0; c < dim; ++c) {
            local[static_cast<Index>(a) * dim + c] = values_[disc.dofs.dof(patch, element.ien[a], c)];
        }
    }

    FieldValue value;
    value.displacement = em.shape * local;
    value.strain = em.strain_displacement * local;
    value.stress = constitutive_matrix(material) * value.strain;
    return value;
}

Eigen::VectorXd SolutionField::displacement(Index patch, const ParamPoint& pt) const {
    return evaluate(patch, pt).displacement;
}

Eigen::VectorXd reaction_forces(const SparseSystem& system, const SolutionField& solution) {
    const Eigen::VectorXd residual = system.matrix * solution.control_values() - system.rhs;
    Eigen::VectorXd reactions = Eigen::VectorXd::Zero(residual.size());
    for (const auto& constraint : system.constraints) {
        reactions[constraint.first] = residual[constraint.first];
    }
    return reactions;
}

}  // namespace iga
