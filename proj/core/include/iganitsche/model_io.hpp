#pragma once

#include "iganitsche/model.hpp"
#include "iganitsche/timoshenko.hpp"
#include "iganitsche/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace iga {

/// Named evaluation point reported by the CLI summary.
struct Probe {
    std::string name;
    Index patch = 0;
    ParamPoint param;
};

struct RunOptions {
    int threads = 1;
    int interface_points = 0;  ///< 0 = automatic
    int vtk_density = 4;       ///< sample cells per element and direction
};

/// A model file: the solvable model plus CLI-level extras.
struct LoadedModel {
    MultiPatchModel model;
    std::vector<Probe> probes;
    std::optional<TimoshenkoParams> reference;  ///< exact solution for `converge`
    RunOptions options;
};

/// Parse and fully validate a JSON model file (schema, patch invariants,
/// interface coincidence). Throws ModelError with the file path and the
/// offending field.
LoadedModel load_model(const std::filesystem::path& path);

/// Write a model file; load_model(save_model(m)) is structurally
/// identical to m. The write is atomic (temp file + rename).
void save_model(const LoadedModel& model, const std::filesystem::path& path);

}  // namespace iga
