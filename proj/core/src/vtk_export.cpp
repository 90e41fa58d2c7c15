#include "iganitsche/vtk_export.hpp"

#include "iganitsche/elasticity.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iga {

namespace {

std::string number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

}  // namespace

void export_vtk(const SolutionField& solution, const std::filesystem::path& path, int density) {
    if (density < 1) {
        throw std::invalid_argument("export_vtk: density must be at least 1");
    }
    const DiscreteModel& disc = solution.discretization();
    const int dim = disc.model.dim_space();
    const int nv = voigt_size_for_dim(dim);
    const int points_per_dir = density + 1;

    std::vector<Eigen::VectorXd> points;
    std::vector<Eigen::VectorXd> displacements;
    std::vector<Eigen::VectorXd> stresses;
    std::vector<double> mises;
    std::vector<std::vector<Index>> cells;

    for (std::size_t m = 0; m < disc.model.patches.size(); ++m) {
        const NurbsPatch& patch = disc.model.patches[m];
        const Material& material = disc.model.material_of(static_cast<Index>(m));
        for (const Element& element : disc.meshes[m].elements()) {
            const Index base = static_cast<Index>(points.size());
            const int n0 = points_per_dir;
            const int n1 = dim >= 2 ? points_per_dir : 1;
            const int n2 = dim >= 3 ? points_per_dir : 1;
            for (int k = 0; k < n2; ++k) {
                for (int j = 0; j < n1; ++j) {
                    for (int i = 0; i < n0; ++i) {
                        ParamPoint pt;
                        pt.dim = dim;
                        const std::array<int, 3> lattice{i, j, k};
                        for (int d = 0; d < dim; ++d) {
                            const auto [a, b] = element.bounds[static_cast<std::size_t>(d)];
                            pt[d] = a + (b - a) * lattice[static_cast<std::size_t>(d)] / density;
                        }
                        const FieldValue value = solution.evaluate(static_cast<Index>(m), pt);
                        points.push_back(patch.evaluate(pt));
                        displacements.push_back(value.displacement);
                        stresses.push_back(value.stress);
                        mises.push_back(von_mises(value.stress, material));
                    }
                }
            }

            const auto vertex = [&](int i, int j, int k) {
                return base + (static_cast<Index>(k) * n1 + j) * n0 + i;
            };
            for (int k = 0; k < (dim >= 3 ? density : 1); ++k) {
                for (int j = 0; j < (dim >= 2 ? density : 1); ++j) {
                    for (int i = 0; i < density; ++i) {
                        if (dim == 2) {
                            cells.push_back({vertex(i, j, 0), vertex(i + 1, j, 0),
                                             vertex(i + 1, j + 1, 0), vertex(i, j + 1, 0)});
                        } else {
                            cells.push_back({vertex(i, j, k), vertex(i + 1, j, k),
                                             vertex(i + 1, j + 1, k), vertex(i, j + 1, k),
                                             vertex(i, j, k + 1), vertex(i + 1, j, k + 1),
                                             vertex(i + 1, j + 1, k + 1), vertex(i, j + 1, k + 1)});
                        }
                    }
                }
            }
        }
    }

    std::ostringstream os;
    os << "# vtk DataFile Version 3.0\n";
    os << "iganitsche solution\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << points.size() << " double\n";
    for (const auto& x : points) {
        os << number(x[0]) << " " << number(x[1]) << " " << number(dim >= 3 ? x[2] : 0.0) << "\n";
    }

    std::size_t cell_list_size = 0;
    for (const auto& cell : cells) {
        cell_list_size += cell.size() + 1;
    }
    os << "CELLS " << cells.size() << " " << cell_list_size << "\n";
    for (const auto& cell : cells) {
        os << cell.size();
        for (const Index v : cell) {
            os << " " << v;
        }
        os << "\n";
    }
    os << "CELL_TYPES " << cells.size() << "\n";
    const int cell_type = dim == 2 ? 9 : 12;  // VTK_QUAD / VTK_HEXAHEDRON
    for (std::size_t c = 0; c < cells.size(); ++c) {
        os << cell_type << "\n";
    }

    os << "POINT_DATA " << points.size() << "\n";
    os << "VECTORS u double\n";
    for (const auto& u : displacements) {
        os << number(u[0]) << " " << number(u[1]) << " " << number(dim >= 3 ? u[2] : 0.0) << "\n";
    }
    os << "FIELD FieldData 2\n";
    os << "sigma " << nv << " " << points.size() << " double\n";
    for (const auto& s : stresses) {
        for (int c = 0; c < nv; ++c) {
            os << number(s[c]) << (c + 1 == nv ? "\n" : " ");
        }
    }
    os << "vonMises 1 " << points.size() << " double\n";
    for (const double value : mises) {
        os << number(value) << "\n";
    }

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw std::runtime_error("export_vtk: cannot open '" + tmp.string() + "' for writing");
        }
        out << os.str();
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace iga
