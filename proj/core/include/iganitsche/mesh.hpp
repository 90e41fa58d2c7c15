#pragma once

#include "iganitsche/nurbs_patch.hpp"
#include "iganitsche/types.hpp"

#include <Eigen/Core>

#include <array>
#include <utility>
#include <vector>

namespace iga {

/// One knot-span product with positive parametric measure.
struct Element {
    Index patch = 0;
    std::array<int, 3> span{};  ///< knot span index per direction
    std::array<std::pair<double, double>, 3> bounds{};
    std::vector<Index> ien;  ///< global basis indices of the local functions

    double parametric_measure(int dim) const {
        double m = 1.0;
        for (int d = 0; d < dim; ++d) {
            m *= bounds[static_cast<std::size_t>(d)].second - bounds[static_cast<std::size_t>(d)].first;
        }
        return m;
    }
};

/// Element list of one patch with span -> element lookup.
class PatchMesh {
public:
    PatchMesh() = default;
    PatchMesh(const NurbsPatch& patch, Index patch_id);

    const std::vector<Element>& elements() const { return elements_; }
    const Element& element(Index e) const { return elements_[static_cast<std::size_t>(e)]; }
    Index num_elements() const { return static_cast<Index>(elements_.size()); }

    /// Element whose parameter box contains pt; points on a shared knot
    /// line resolve to the + side (last-knot closure mirrors find_span).
    Index locate_element(const NurbsPatch& patch, const ParamPoint& pt) const;

    /// Elements per direction (grid of non-degenerate spans).
    const std::array<std::vector<int>, 3>& spans_per_direction() const { return spans_; }

private:
    std::vector<Element> elements_;
    std::array<std::vector<int>, 3> spans_;  ///< non-degenerate span indices
    std::array<int, 3> grid_{1, 1, 1};       ///< element counts per direction
};

PatchMesh build_elements(const NurbsPatch& patch, Index patch_id = 0);

/// Restriction of the element grid to one parametric boundary face.
struct TraceElement {
    std::array<std::pair<double, double>, 2> bounds{};  ///< bounds in the free directions
    Index volume_element = 0;                           ///< adjacent element in the patch mesh
};

struct TraceMesh {
    Index patch = 0;
    Face face;
    double face_value = 0.0;          ///< parameter value of the fixed direction
    std::array<int, 2> free_dirs{};   ///< parametric directions spanning the face
    int dim = 0;                      ///< number of free directions (0, 1 or 2)
    std::vector<TraceElement> elements;

    /// Embed face-local coordinates into the patch parameter space.
    ParamPoint lift(const std::array<double, 2>& face_coords, int dim_param) const;
};

/// Throws std::invalid_argument if the face direction does not exist.
TraceMesh trace_of_face(const NurbsPatch& patch, const PatchMesh& mesh, const Face& face);

/// Newton inversion of the geometry map. Converges when
/// |x - V(pt)| < 1e-10 * bounding-box diagonal; iterates are clamped to
/// the knot box. Throws InversionError after 30 iterations or on a
/// singular Jacobian.
ParamPoint inverse_map(const NurbsPatch& patch, const Eigen::VectorXd& x, const ParamPoint& seed);
ParamPoint inverse_map(const NurbsPatch& patch, const Eigen::VectorXd& x);

/// Split every distinct knot span at its midpoint `times` times by knot
/// insertion on the homogeneous control net; the geometry is unchanged.
NurbsPatch refine_bisect(const NurbsPatch& patch, int times);

/// Insert a single knot (multiplicity 1) in one direction.
NurbsPatch insert_knot(const NurbsPatch& patch, int direction, double knot);

/// One quadrature point of a boundary-face rule, with physical data.
struct FaceQuadraturePoint {
    ParamPoint point;        ///< in the patch parameter space
    Index element = 0;       ///< adjacent volume element
    Eigen::VectorXd x;       ///< physical position
    Eigen::VectorXd normal;  ///< outward unit normal of the patch
    double weight = 0.0;     ///< parent weight * all Jacobians (physical surface measure)
};

/// Gauss points over a face trace, `num_points` per free direction.
/// Normals are oriented outward by checking against a point slightly
/// inside the patch.
std::vector<FaceQuadraturePoint> face_quadrature(const NurbsPatch& patch, const TraceMesh& trace,
                                                 int num_points);

/// Physical diameter of a trace element (max corner distance).
double trace_element_diameter(const NurbsPatch& patch, const TraceMesh& trace, Index trace_element);

}  // namespace iga
