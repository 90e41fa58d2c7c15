#include "iganitsche/errors.hpp"
#include "iganitsche/model_io.hpp"
#include "iganitsche/nitsche.hpp"
#include "iganitsche/patch_builders.hpp"
#include "iganitsche/system.hpp"
#include "iganitsche/verification.hpp"
#include "iganitsche/vtk_export.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace iga;

struct CommonFlags {
    std::string model_path;
    std::optional<double> alpha;
    std::optional<double> gamma;
    int interface_points = 0;
    int threads = 0;

    void add_to(CLI::App& cmd, bool with_overrides = true) {
        cmd.add_option("--model", model_path, "Model file (JSON)")->required();
        if (with_overrides) {
            cmd.add_option("--alpha", alpha, "Override the stabilization parameter");
            cmd.add_option("--gamma", gamma, "Override the stress-average weight");
            cmd.add_option("--gp", interface_points, "Interface Gauss points per direction");
            cmd.add_option("--threads", threads, "Assembly threads");
        }
    }

    AssemblyOptions assembly_options(const RunOptions& defaults) const {
        AssemblyOptions options;
        options.threads = threads > 0 ? threads : defaults.threads;
        options.interface_points =
            interface_points > 0 ? interface_points : defaults.interface_points;
        options.alpha_override = alpha;
        options.gamma_override = gamma;
        return options;
    }
};

std::string format_value(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

int run_command(const CommonFlags& flags, const std::string& out_dir) {
    const LoadedModel loaded = load_model(flags.model_path);
    auto disc = DiscreteModel::build(loaded.model);

    const auto t0 = std::chrono::steady_clock::now();
    const SparseSystem system = assemble_global(disc, flags.assembly_options(loaded.options));
    const auto t1 = std::chrono::steady_clock::now();
    SolveReport report;
    const SolutionField solution = solve(system, {.check_spd = true}, &report);
    const auto t2 = std::chrono::steady_clock::now();

    std::filesystem::create_directories(out_dir);
    export_vtk(solution, std::filesystem::path(out_dir) / "solution.vtk",
               std::max(1, loaded.options.vtk_density));

    Index total_elements = 0;
    for (const auto& mesh : disc->meshes) {
        total_elements += mesh.num_elements();
    }

    std::ostringstream summary;
    summary << "model=" << flags.model_path << "\n";
    summary << "patches=" << disc->model.patches.size() << "\n";
    summary << "elements=" << total_elements << "\n";
    summary << "dofs=" << disc->dofs.total() << "\n";
    summary << "constrained_dofs=" << system.constraints.size() << "\n";
    summary << "residual=" << format_value(report.residual) << "\n";
    summary << "positive_definite=" << (report.positive_definite ? "yes" : "no") << "\n";
    summary << "assemble_seconds="
            << format_value(std::chrono::duration<double>(t1 - t0).count()) << "\n";
    summary << "solve_seconds=" << format_value(std::chrono::duration<double>(t2 - t1).count())
            << "\n";
    for (const Probe& probe : loaded.probes) {
        const FieldValue value = solution.evaluate(probe.patch, probe.param);
        const char* components[3] = {"x", "y", "z"};
        for (int c = 0; c < static_cast<int>(value.displacement.size()); ++c) {
            summary << "probe." << probe.name << ".u_" << components[c] << "="
                    << format_value(value.displacement[c]) << "\n";
        }
        for (int c = 0; c < static_cast<int>(value.stress.size()); ++c) {
            summary << "probe." << probe.name << ".sigma_" << c << "="
                    << format_value(value.stress[c]) << "\n";
        }
    }
    write_atomic(std::filesystem::path(out_dir) / "summary.txt", summary.str());
    std::cout << summary.str();
    return 0;
}

int converge_command(const CommonFlags& flags, int levels, int degree,
                     const std::string& out_file) {
    LoadedModel loaded = load_model(flags.model_path);
    if (!loaded.reference) {
        throw ModelError(flags.model_path +
                         ": converge needs a reference_solution entry in the model file");
    }
    if (degree > 0) {
        for (auto& patch : loaded.model.patches) {
            patch = rebuild_at_degree(patch, degree);
        }
        loaded.model.validate();
    }

    const ExactSolution exact = timoshenko_reference(*loaded.reference);
    const ErrorReport report = convergence_study(loaded.model, levels, exact,
                                                 flags.assembly_options(loaded.options));

    std::ostringstream csv;
    report.write_csv(csv);
    if (!out_file.empty()) {
        write_atomic(out_file, csv.str());
    }
    std::cout << csv.str();
    return 0;
}

int inspect_command(const CommonFlags& flags) {
    const LoadedModel loaded = load_model(flags.model_path);
    auto disc = DiscreteModel::build(loaded.model);

    std::ostringstream out;
    out << "model=" << flags.model_path << "\n";
    out << "dim=" << disc->model.dim_space() << "\n";
    out << "patches=" << disc->model.patches.size() << "\n";
    for (std::size_t m = 0; m < disc->model.patches.size(); ++m) {
        const NurbsPatch& patch = disc->model.patches[m];
        out << "patch." << m << ".elements=" << disc->meshes[m].num_elements() << "\n";
        out << "patch." << m << ".control_points=" << patch.num_control_points() << "\n";
        std::ostringstream degrees;
        for (int d = 0; d < patch.dim_param(); ++d) {
            degrees << (d ? "x" : "") << patch.knot_vector(d).degree();
        }
        out << "patch." << m << ".degrees=" << degrees.str() << "\n";
    }
    out << "dofs=" << disc->dofs.total() << "\n";
    for (std::size_t i = 0; i < disc->model.interfaces.size(); ++i) {
        const InterfaceSpec& iface = disc->model.interfaces[i];
        out << "interface." << i << ".patches=" << iface.patch1 << "," << iface.patch2 << "\n";
        out << "interface." << i << ".gamma=" << format_value(iface.gamma) << "\n";
        if (!iface.alpha.estimate) {
            out << "interface." << i << ".alpha=" << format_value(iface.alpha.value) << "\n";
            continue;
        }
        // Per-element estimate range over the integration-side trace.
        const NurbsPatch& p1 = disc->model.patches[static_cast<std::size_t>(iface.patch1)];
        const NurbsPatch& p2 = disc->model.patches[static_cast<std::size_t>(iface.patch2)];
        const TraceMesh trace =
            trace_of_face(p1, disc->meshes[static_cast<std::size_t>(iface.patch1)], iface.face1);
        int max_degree = 0;
        for (int d = 0; d < p1.dim_param(); ++d) {
            max_degree = std::max(max_degree, p1.knot_vector(d).degree());
        }
        for (int d = 0; d < p2.dim_param(); ++d) {
            max_degree = std::max(max_degree, p2.knot_vector(d).degree());
        }
        const Material& material = disc->model.material_of(iface.patch1);
        double alpha_min = 0.0, alpha_max = 0.0;
        for (std::size_t te = 0; te < trace.elements.size(); ++te) {
            const double h = trace_element_diameter(p1, trace, static_cast<Index>(te));
            const double alpha = estimate_alpha(material, max_degree, h);
            alpha_min = te == 0 ? alpha : std::min(alpha_min, alpha);
            alpha_max = te == 0 ? alpha : std::max(alpha_max, alpha);
        }
        out << "interface." << i << ".alpha_estimate_min=" << format_value(alpha_min) << "\n";
        out << "interface." << i << ".alpha_estimate_max=" << format_value(alpha_max) << "\n";
    }
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-patch isogeometric elastostatics with Nitsche coupling"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string run_out;
    CLI::App* run = app.add_subcommand("run", "Solve a model and export VTK plus a summary");
    run_flags.add_to(*run);
    run->add_option("--out", run_out, "Output directory")->required();

    CommonFlags converge_flags;
    int levels = 4;
    int degree = 0;
    std::string converge_out;
    CLI::App* converge =
        app.add_subcommand("converge", "Refinement study against the model's reference solution");
    converge_flags.add_to(*converge);
    converge->add_option("--levels", levels, "Number of bisection levels")->required();
    converge->add_option("--degree", degree, "Rebuild patches at this degree (affine geometry only)");
    converge->add_option("--out", converge_out, "Also write the CSV report to this file");

    CommonFlags inspect_flags;
    CLI::App* inspect = app.add_subcommand("inspect", "Print patch, element and dof statistics");
    inspect_flags.add_to(*inspect, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return run_command(run_flags, run_out);
        }
        if (converge->parsed()) {
            return converge_command(converge_flags, levels, degree, converge_out);
        }
        return inspect_command(inspect_flags);
    } catch (const std::exception& err) {
        std::string message = err.what();
        std::replace(message.begin(), message.end(), '\n', ' ');
        std::cerr << "error: " << message << "\n";
        return 1;
    }
}
