#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <string>

namespace iga {

using Index = Eigen::Index;

/// A point in the parametric space of a patch. Holds up to three
/// coordinates; only the first `dim` entries are meaningful.
struct ParamPoint {
    int dim = 0;
    std::array<double, 3> coords{};

    double operator[](int d) const { return coords[static_cast<std::size_t>(d)]; }
    double& operator[](int d) { return coords[static_cast<std::size_t>(d)]; }
};

inline ParamPoint param_point(double xi) { return {1, {xi, 0.0, 0.0}}; }
inline ParamPoint param_point(double xi, double eta) { return {2, {xi, eta, 0.0}}; }
inline ParamPoint param_point(double xi, double eta, double zeta) { return {3, {xi, eta, zeta}}; }

/// One parametric boundary face of a patch: a direction and which end of
/// the knot range it sits on.
struct Face {
    int direction = 0;
    bool at_max = false;

    friend bool operator==(const Face&, const Face&) = default;
};

/// Face name in model files: "xi_min", "eta_max", "zeta_min", ...
std::string face_name(const Face& face);
Face face_from_name(const std::string& name);

}  // namespace iga
