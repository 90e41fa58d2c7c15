#include "iganitsche/verification.hpp"

#include "iganitsche/gauss.hpp"
#include "iganitsche/patch_builders.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace iga {

ExactSolution timoshenko_reference(const TimoshenkoParams& params) {
    ExactSolution exact;
    exact.displacement = [params](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return timoshenko_exact(params, x[0], x[1]).displacement;
    };
    const double E = params.youngs_modulus;
    const double nu = params.poisson_ratio;
    exact.strain = [params, E, nu](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const Eigen::Vector3d s = timoshenko_exact(params, x[0], x[1]).stress;
        Eigen::Vector3d strain;
        strain[0] = (s[0] - nu * s[1]) / E;
        strain[1] = (s[1] - nu * s[0]) / E;
        strain[2] = 2.0 * (1.0 + nu) / E * s[2];  // engineering shear
        return strain;
    };
    return exact;
}

ErrorNorms error_norms(const SolutionField& solution, const ExactSolution& exact) {
    const DiscreteModel& disc = solution.discretization();
    double disp_sq = 0.0;
    double energy_sq = 0.0;

    for (std::size_t m = 0; m < disc.model.patches.size(); ++m) {
        const NurbsPatch& patch = disc.model.patches[m];
        const Eigen::MatrixXd c_matrix = constitutive_matrix(disc.model.material_of(static_cast<Index>(m)));
        const int dp = patch.dim_param();

        std::array<const GaussRule*, 3> rules{};
        for (int d = 0; d < dp; ++d) {
            rules[static_cast<std::size_t>(d)] = &gauss_legendre(patch.knot_vector(d).degree() + 1);
        }
        for (const Element& element : disc.meshes[m].elements()) {
            const int n0 = static_cast<int>(rules[0]->size());
            const int n1 = dp >= 2 ? static_cast<int>(rules[1]->size()) : 1;
            const int n2 = dp >= 3 ? static_cast<int>(rules[2]->size()) : 1;
            for (int q2 = 0; q2 < n2; ++q2) {
                for (int q1 = 0; q1 < n1; ++q1) {
                    for (int q0 = 0; q0 < n0; ++q0) {
                        ParamPoint parent;
                        parent.dim = dp;
                        parent[0] = rules[0]->points[q0];
                        double w = rules[0]->weights[q0];
                        if (dp >= 2) {
                            parent[1] = rules[1]->points[q1];
                            w *= rules[1]->weights[q1];
                        }
                        if (dp >= 3) {
                            parent[2] = rules[2]->points[q2];
                            w *= rules[2]->weights[q2];
                        }
                        const auto [pt, jac_parent] = parent_to_param(element.bounds, dp, parent);
                        const ElementMatrices em = element_matrices(patch, element, pt);
                        const double weight = w * jac_parent * em.det_jacobian;

                        const FieldValue value = solution.evaluate(static_cast<Index>(m), pt);
                        const Eigen::VectorXd du = value.displacement - exact.displacement(em.x);
                        const Eigen::VectorXd de = value.strain - exact.strain(em.x);
                        disp_sq += weight * du.squaredNorm();
                        energy_sq += 0.5 * weight * de.dot(c_matrix * de);
                    }
                }
            }
        }
    }
    return {std::sqrt(disp_sq), std::sqrt(energy_sq)};
}

double max_element_diameter(const DiscreteModel& disc) {
    double h_max = 0.0;
    for (std::size_t m = 0; m < disc.model.patches.size(); ++m) {
        const NurbsPatch& patch = disc.model.patches[m];
        const int dp = patch.dim_param();
        for (const Element& element : disc.meshes[m].elements()) {
            // Diagonal over the element's parametric corner images.
            std::vector<Eigen::VectorXd> corners;
            const int nc = 1 << dp;
            for (int c = 0; c < nc; ++c) {
                ParamPoint pt;
                pt.dim = dp;
                for (int d = 0; d < dp; ++d) {
                    const auto [a, b] = element.bounds[static_cast<std::size_t>(d)];
                    pt[d] = (c >> d) & 1 ? b : a;
                }
                corners.push_back(patch.evaluate(pt));
            }
            for (std::size_t i = 0; i < corners.size(); ++i) {
                for (std::size_t j = i + 1; j < corners.size(); ++j) {
                    h_max = std::max(h_max, (corners[i] - corners[j]).norm());
                }
            }
        }
    }
    return h_max;
}

double fit_rate(const std::vector<double>& mesh_sizes, const std::vector<double>& errors) {
    const std::size_t n = mesh_sizes.size();
    if (n < 2 || errors.size() != n) {
        throw std::invalid_argument("fit_rate: need matching lists with at least two levels");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(mesh_sizes[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ErrorReport convergence_study(const MultiPatchModel& base_model, int levels,
                              const ExactSolution& exact, const AssemblyOptions& options) {
    if (levels < 1) {
        throw std::invalid_argument("convergence_study: need at least one level");
    }
    ErrorReport report;
    std::vector<double> hs, e_disp, e_energy;

    for (int level = 0; level < levels; ++level) {
        MultiPatchModel refined = base_model;
        for (auto& patch : refined.patches) {
            patch = refine_bisect(patch, level);
        }
        auto disc = DiscreteModel::build(std::move(refined));
        const SparseSystem system = assemble_global(disc, options);
        const SolutionField solution = solve(system);
        const ErrorNorms norms = error_norms(solution, exact);

        ErrorReport::Level entry;
        entry.level = level;
        entry.mesh_size = max_element_diameter(*disc);
        entry.dof_count = disc->dofs.total();
        entry.displacement_error = norms.displacement;
        entry.energy_error = norms.energy;
        report.levels.push_back(entry);

        hs.push_back(entry.mesh_size);
        e_disp.push_back(norms.displacement);
        e_energy.push_back(norms.energy);
    }

    if (levels >= 3) {
        report.displacement_rate = fit_rate(hs, e_disp);
        report.energy_rate = fit_rate(hs, e_energy);
    }
    return report;
}

void ErrorReport::write_csv(std::ostream& os) const {
    os << "level,h,dofs,e_disp,e_energy\n";
    char line[256];
    for (const Level& level : levels) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%lld,%.12g,%.12g\n", level.level,
                      level.mesh_size, static_cast<long long>(level.dof_count),
                      level.displacement_error, level.energy_error);
        os << line;
    }
    if (levels.size() >= 3) {
        std::snprintf(line, sizeof(line), "# rate_disp=%.6g rate_energy=%.6g\n", displacement_rate,
                      energy_rate);
        os << line;
    }
}

namespace {

FieldFunction timoshenko_function(const std::string& name, const TimoshenkoParams& params) {
    return FieldFunction::named(name, {{"L", params.length},
                                       {"D", params.depth},
                                       {"P", params.shear_force},
                                       {"E", params.youngs_modulus},
                                       {"nu", params.poisson_ratio}});
}

Material timoshenko_material(const TimoshenkoParams& params) {
    Material material;
    material.youngs_modulus = params.youngs_modulus;
    material.poisson_ratio = params.poisson_ratio;
    material.formulation = Formulation::PlaneStress;
    return material;
}

}  // namespace

MultiPatchModel make_timoshenko_two_patch_model(const TimoshenkoParams& params, int degree,
                                                std::array<int, 2> left_elements,
                                                std::array<int, 2> right_elements,
                                                const AlphaPolicy& alpha, double gamma) {
    MultiPatchModel model;
    const double half = params.length / 2.0;
    const double y0 = -params.depth / 2.0;
    const double y1 = params.depth / 2.0;

    model.patches.push_back(make_box_patch({degree, degree}, {left_elements[0], left_elements[1]},
                                           Eigen::Vector2d(0.0, y0), Eigen::Vector2d(half, y1)));
    model.patches.push_back(make_box_patch({degree, degree}, {right_elements[0], right_elements[1]},
                                           Eigen::Vector2d(half, y0),
                                           Eigen::Vector2d(params.length, y1)));
    model.materials.push_back(timoshenko_material(params));
    model.patch_material = {0, 0};

    model.dirichlet.push_back(
        {0, Face{0, false}, timoshenko_function("timoshenko_displacement", params)});
    model.neumann.push_back({1, Face{0, true}, timoshenko_function("timoshenko_traction", params)});

    InterfaceSpec iface;
    iface.patch1 = 0;
    iface.patch2 = 1;
    iface.face1 = Face{0, true};
    iface.face2 = Face{0, false};
    iface.gamma = gamma;
    iface.alpha = alpha;
    model.interfaces.push_back(iface);
    return model;
}

MultiPatchModel make_timoshenko_monolithic_model(const TimoshenkoParams& params, int degree,
                                                 std::array<int, 2> num_elements) {
    MultiPatchModel model;
    model.patches.push_back(make_box_patch(
        {degree, degree}, {num_elements[0], num_elements[1]},
        Eigen::Vector2d(0.0, -params.depth / 2.0), Eigen::Vector2d(params.length, params.depth / 2.0)));
    model.materials.push_back(timoshenko_material(params));
    model.patch_material = {0};
    model.dirichlet.push_back(
        {0, Face{0, false}, timoshenko_function("timoshenko_displacement", params)});
    model.neumann.push_back({0, Face{0, true}, timoshenko_function("timoshenko_traction", params)});
    return model;
}

}  // namespace iga
