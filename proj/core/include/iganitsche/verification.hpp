#pragma once

#include "iganitsche/model.hpp"
#include "iganitsche/system.hpp"
#include "iganitsche/timoshenko.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace iga {

/// Reference fields for error measurement, as functions of the physical
/// position: displacement and Voigt strain (engineering shear).
struct ExactSolution {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> displacement;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> strain;
};

/// Exact Timoshenko fields as an ExactSolution (plane-stress strain from
/// the exact stress through the compliance relation).
ExactSolution timoshenko_reference(const TimoshenkoParams& params);

struct ErrorNorms {
    double displacement = 0.0;
    double energy = 0.0;
};

/// L2 displacement error and the energy error
/// sqrt(1/2 integral (eps_num - eps_ex) . C . (eps_num - eps_ex)),
/// both integrated with the same Gauss rule used for the stiffness.
ErrorNorms error_norms(const SolutionField& solution, const ExactSolution& exact);

struct ErrorReport {
    struct Level {
        int level = 0;
        double mesh_size = 0.0;  ///< max physical element diagonal
        Index dof_count = 0;
        double displacement_error = 0.0;
        double energy_error = 0.0;
    };
    std::vector<Level> levels;
    double displacement_rate = 0.0;  ///< least-squares slope of log e vs log h
    double energy_rate = 0.0;        ///< reported only for >= 3 levels

    void write_csv(std::ostream& os) const;
};

/// Max physical element diagonal over all patches of a model.
double max_element_diameter(const DiscreteModel& discretization);

/// Refine the base model `levels` times by span bisection, solve each
/// level (alpha policies re-evaluate per mesh), and fit convergence
/// rates. Requires levels >= 1; rates need >= 3.
ErrorReport convergence_study(const MultiPatchModel& base_model, int levels,
                              const ExactSolution& exact, const AssemblyOptions& options = {});

/// Least-squares slope of log(error) against log(h).
double fit_rate(const std::vector<double>& mesh_sizes, const std::vector<double>& errors);

/// Cantilever of Eq.-exact clamping at x = 0 and the parabolic end
/// traction, split at x = L/2 into two coupled patches. Plane stress.
MultiPatchModel make_timoshenko_two_patch_model(const TimoshenkoParams& params, int degree,
                                                std::array<int, 2> left_elements,
                                                std::array<int, 2> right_elements,
                                                const AlphaPolicy& alpha, double gamma = 0.5);

/// The same beam as a single patch (no interface).
MultiPatchModel make_timoshenko_monolithic_model(const TimoshenkoParams& params, int degree,
                                                 std::array<int, 2> num_elements);

}  // namespace iga
