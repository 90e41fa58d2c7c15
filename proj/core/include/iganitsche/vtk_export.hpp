#pragma once

#include "iganitsche/system.hpp"

#include <filesystem>

namespace iga {

/// Legacy ASCII VTK unstructured grid of the solved fields. Every
/// element is resampled on a (density+1)^d point lattice evaluated
/// directly on the NURBS geometry (density = 1 gives the corners), cells
/// are quads/hexahedra, and point data carries arrays "u", "sigma"
/// (Voigt) and "vonMises". Output is byte-stable; the write is atomic.
void export_vtk(const SolutionField& solution, const std::filesystem::path& path, int density);

}  // namespace iga
