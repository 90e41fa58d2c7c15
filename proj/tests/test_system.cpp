#include "iganitsche/system.hpp"

#include "iganitsche/errors.hpp"
#include "iganitsche/verification.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cstring>

using namespace iga;

namespace {

MultiPatchModel linear_patch_test_model(int dim) {
    // One patch, linear displacement prescribed on every boundary face.
    MultiPatchModel model;
    if (dim == 2) {
        model.patches.push_back(test::quarter_annulus());
        model.materials.push_back(Material{200.0, 0.3, Formulation::PlaneStress});
    } else {
        model.patches.push_back(test::identity_patch(3, 2, 2));
        model.materials.push_back(Material{200.0, 0.3, Formulation::Solid3D});
    }
    model.patch_material = {0};

    using M = FieldFunction::Monomial;
    std::vector<std::vector<M>> components;
    if (dim == 2) {
        components = {{M{0.1, {1, 0, 0}}, M{0.02, {0, 1, 0}}, M{0.5, {0, 0, 0}}},
                      {M{0.03, {1, 0, 0}}, M{-0.05, {0, 1, 0}}}};
    } else {
        components = {{M{0.1, {1, 0, 0}}, M{0.02, {0, 1, 0}}, M{0.03, {0, 0, 1}}},
                      {M{0.04, {1, 0, 0}}, M{-0.05, {0, 1, 0}}, M{0.01, {0, 0, 1}}},
                      {M{0.02, {1, 0, 0}}, M{0.03, {0, 1, 0}}, M{0.06, {0, 0, 1}}}};
    }
    const FieldFunction g = FieldFunction::polynomial(components);
    for (int d = 0; d < dim; ++d) {
        for (bool at_max : {false, true}) {
            model.dirichlet.push_back({0, Face{d, at_max}, g});
        }
    }
    return model;
}

}  // namespace

TEST_CASE("single patch system equals the bulk stiffness") {
    MultiPatchModel model;
    model.patches.push_back(test::identity_patch(2, 2, 2));
    model.materials.push_back(Material{100.0, 0.25, Formulation::PlaneStress});
    model.patch_material = {0};
    auto disc = DiscreteModel::build(model);
    const SparseSystem system = assemble_global(disc);

    TripletList triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(disc->dofs.total());
    assemble_bulk(disc->model.patches[0], disc->meshes[0], disc->model.materials[0], disc->dofs, 0,
                  1, triplets, rhs);
    Eigen::SparseMatrix<double> bulk(disc->dofs.total(), disc->dofs.total());
    bulk.setFromTriplets(triplets.begin(), triplets.end());
    CHECK((Eigen::MatrixXd(system.matrix) - Eigen::MatrixXd(bulk)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two patches without an interface stay block diagonal") {
    MultiPatchModel model;
    model.patches.push_back(
        make_box_patch({1, 1}, {2, 2}, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)));
    model.patches.push_back(
        make_box_patch({1, 1}, {2, 2}, Eigen::Vector2d(1, 0), Eigen::Vector2d(2, 1)));
    model.materials.push_back(Material{100.0, 0.25, Formulation::PlaneStress});
    model.patch_material = {0, 0};
    // Clamp and load only the first patch; the second floats.
    model.dirichlet.push_back({0, Face{0, false}, FieldFunction::constant(Eigen::Vector2d(0, 0))});
    model.neumann.push_back({0, Face{0, true}, FieldFunction::constant(Eigen::Vector2d(1, 0))});

    auto disc = DiscreteModel::build(model);
    const SparseSystem system = assemble_global(disc);
    const Index n1 = disc->dofs.patch_dofs(0);
    const Eigen::MatrixXd dense = system.matrix;
    CHECK(dense.topRightCorner(n1, dense.cols() - n1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dense.bottomLeftCorner(dense.rows() - n1, n1).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(solve(system), SolverError);
}

TEST_CASE("load vector norm is interface independent") {
    const TimoshenkoParams params;
    const MultiPatchModel coupled = make_timoshenko_two_patch_model(
        params, 1, {10, 4}, {10, 4}, AlphaPolicy::explicit_value(1e8));
    const MultiPatchModel monolithic = make_timoshenko_monolithic_model(params, 1, {20, 4});
    const SparseSystem cs = assemble_global(DiscreteModel::build(coupled));
    const SparseSystem ms = assemble_global(DiscreteModel::build(monolithic));
    CHECK(cs.rhs.norm() == doctest::Approx(ms.rhs.norm()).epsilon(1e-12));
}

TEST_CASE("solve handles a one-dof system") {
    SparseSystem system;
    system.matrix.resize(1, 1);
    TripletList triplets{{0, 0, 4.0}};
    system.matrix.setFromTriplets(triplets.begin(), triplets.end());
    system.rhs = Eigen::VectorXd::Constant(1, 8.0);
    const SolutionField solution = solve(system);
    CHECK(solution.control_values()[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("sparse solve matches a dense oracle on a random SPD system") {
    const Index n = 50;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = test::uniform(-1.0, 1.0);
        }
    }
    const Eigen::MatrixXd spd = m.transpose() * m + static_cast<double>(n) * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd f(n);
    for (Index i = 0; i < n; ++i) {
        f[i] = test::uniform(-2.0, 2.0);
    }

    SparseSystem system;
    system.matrix = spd.sparseView();
    system.rhs = f;
    SolveReport report;
    const SolutionField solution = solve(system, {.check_spd = true}, &report);
    CHECK(report.positive_definite);
    CHECK(report.residual < 1e-10);

    const Eigen::VectorXd dense_solution = Eigen::PartialPivLU<Eigen::MatrixXd>(spd).solve(f);
    CHECK((solution.control_values() - dense_solution).norm() / dense_solution.norm() < 1e-12);
}

TEST_CASE("zero boundary data gives the zero field") {
    MultiPatchModel model;
    model.patches.push_back(test::identity_patch(2, 2, 2));
    model.materials.push_back(Material{100.0, 0.25, Formulation::PlaneStress});
    model.patch_material = {0};
    for (int d = 0; d < 2; ++d) {
        for (bool at_max : {false, true}) {
            model.dirichlet.push_back(
                {0, Face{d, at_max}, FieldFunction::constant(Eigen::Vector2d(0, 0))});
        }
    }
    auto disc = DiscreteModel::build(model);
    const SolutionField solution = solve(assemble_global(disc));
    CHECK(solution.control_values().cwiseAbs().maxCoeff() == 0.0);
    const FieldValue value = solution.evaluate(0, param_point(0.4, 0.6));
    CHECK(value.displacement.cwiseAbs().maxCoeff() == 0.0);
    CHECK(value.stress.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-patch patch test: linear boundary data gives constant stress") {
    for (int dim : {2, 3}) {
        auto disc = DiscreteModel::build(linear_patch_test_model(dim));
        const SolutionField solution = solve(assemble_global(disc));
        const FieldValue reference = solution.evaluate(0, disc->model.patches[0].param_center());
        for (int i = 0; i < 20; ++i) {
            const FieldValue value =
                solution.evaluate(0, test::random_point(disc->model.patches[0]));
            CHECK((value.stress - reference.stress).norm() < 1e-8 * reference.stress.norm());
        }
    }
}

TEST_CASE("doubling the stiffness halves the displacement") {
    const TimoshenkoParams params;
    const MultiPatchModel model = make_timoshenko_monolithic_model(params, 1, {10, 2});
    auto disc = DiscreteModel::build(model);
    const SolutionField base = solve(assemble_global(disc));

    // Doubling E doubles K and halves the clamped-end data, so the whole
    // solution halves exactly.
    TimoshenkoParams doubled = params;
    doubled.youngs_modulus *= 2.0;
    const MultiPatchModel stiff_model = make_timoshenko_monolithic_model(doubled, 1, {10, 2});
    auto stiff_disc = DiscreteModel::build(stiff_model);
    const SolutionField stiff = solve(assemble_global(stiff_disc));

    CHECK((2.0 * stiff.control_values() - base.control_values()).cwiseAbs().maxCoeff() <
          1e-9 * base.control_values().cwiseAbs().maxCoeff());
}

TEST_CASE("assembly is deterministic and thread-count independent") {
    const TimoshenkoParams params;
    const MultiPatchModel model = make_timoshenko_two_patch_model(
        params, 2, {6, 3}, {4, 2}, AlphaPolicy::estimated());
    auto disc = DiscreteModel::build(model);
    const SparseSystem a = assemble_global(disc, {.threads = 1});
    const SparseSystem b = assemble_global(disc, {.threads = 1});
    const SparseSystem c = assemble_global(disc, {.threads = 4});

    REQUIRE(a.matrix.nonZeros() == b.matrix.nonZeros());
    REQUIRE(a.matrix.nonZeros() == c.matrix.nonZeros());
    const Index nnz = a.matrix.nonZeros();
    CHECK(std::memcmp(a.matrix.valuePtr(), b.matrix.valuePtr(), sizeof(double) * nnz) == 0);
    CHECK(std::memcmp(a.matrix.valuePtr(), c.matrix.valuePtr(), sizeof(double) * nnz) == 0);
    CHECK(a.rhs == b.rhs);
    CHECK(a.rhs == c.rhs);
}

TEST_CASE("reactions balance the applied load") {
    const TimoshenkoParams params;
    const MultiPatchModel model = make_timoshenko_two_patch_model(
        params, 1, {10, 4}, {10, 4}, AlphaPolicy::explicit_value(1e8));
    auto disc = DiscreteModel::build(model);
    const SparseSystem system = assemble_global(disc);
    const SolutionField solution = solve(system);
    const Eigen::VectorXd reactions = reaction_forces(system, solution);

    Eigen::Vector2d reaction_sum = Eigen::Vector2d::Zero();
    Eigen::Vector2d load_sum = Eigen::Vector2d::Zero();
    for (Index i = 0; i < reactions.size(); i += 2) {
        reaction_sum += reactions.segment<2>(i);
        load_sum += system.rhs.segment<2>(i);
    }
    CHECK((reaction_sum + load_sum).norm() < 1e-8 * load_sum.norm());
}

TEST_CASE("global matrix symmetry") {
    const TimoshenkoParams params;
    const MultiPatchModel model = make_timoshenko_two_patch_model(
        params, 2, {6, 4}, {4, 2}, AlphaPolicy::estimated());
    const SparseSystem system = assemble_global(DiscreteModel::build(model));
    const Eigen::MatrixXd dense = system.matrix;
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <
          1e-9 * dense.cwiseAbs().maxCoeff());
}
