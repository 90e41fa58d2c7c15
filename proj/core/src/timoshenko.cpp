#include "iganitsche/timoshenko.hpp"

namespace iga {

double timoshenko_traction_y(const TimoshenkoParams& params, double y) {
    const double inertia = params.inertia();
    const double depth = params.depth;
    return -params.shear_force / (2.0 * inertia) * (depth * depth / 4.0 - y * y);
}

TimoshenkoField timoshenko_exact(const TimoshenkoParams& params, double x, double y) {
    const double P = params.shear_force;
    const double E = params.youngs_modulus;
    const double nu = params.poisson_ratio;
    const double L = params.length;
    const double D = params.depth;
    const double I = params.inertia();

    TimoshenkoField field;
    field.displacement[0] =
        P * y / (6.0 * E * I) * ((6.0 * L - 3.0 * x) * x + (2.0 + nu) * (y * y - D * D / 4.0));
    field.displacement[1] =
        -P / (6.0 * E * I) *
        (3.0 * nu * y * y * (L - x) + (4.0 + 5.0 * nu) * D * D * x / 4.0 + (3.0 * L - x) * x * x);

    field.stress[0] = P * (L - x) * y / I;
    field.stress[1] = 0.0;
    field.stress[2] = -P / (2.0 * I) * (D * D / 4.0 - y * y);
    return field;
}

}  // namespace iga
