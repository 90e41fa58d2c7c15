#include "iganitsche/model.hpp"

#include "iganitsche/errors.hpp"
#include "iganitsche/mesh.hpp"
#include "iganitsche/timoshenko.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iga {

FieldFunction FieldFunction::constant(Eigen::VectorXd values) {
    FieldFunction f;
    f.kind_ = Kind::Constant;
    f.constant_ = std::move(values);
    return f;
}

FieldFunction FieldFunction::polynomial(std::vector<std::vector<Monomial>> components) {
    FieldFunction f;
    f.kind_ = Kind::Polynomial;
    f.polynomial_ = std::move(components);
    return f;
}

FieldFunction FieldFunction::named(std::string name,
                                   std::vector<std::pair<std::string, double>> params) {
    FieldFunction f;
    f.kind_ = Kind::Named;
    f.name_ = std::move(name);
    f.params_ = std::move(params);
    if (f.name_ != "timoshenko_displacement" && f.name_ != "timoshenko_traction") {
        throw std::invalid_argument("FieldFunction: unknown named function '" + f.name_ + "'");
    }
    return f;
}

double FieldFunction::parameter(const std::string& key) const {
    for (const auto& [k, v] : params_) {
        if (k == key) {
            return v;
        }
    }
    throw std::invalid_argument("FieldFunction: missing parameter '" + key + "' of '" + name_ + "'");
}

namespace {

TimoshenkoParams timoshenko_params_of(const FieldFunction& f) {
    TimoshenkoParams params;
    params.length = f.parameter("L");
    params.depth = f.parameter("D");
    params.shear_force = f.parameter("P");
    params.youngs_modulus = f.parameter("E");
    params.poisson_ratio = f.parameter("nu");
    return params;
}

}  // namespace

Eigen::VectorXd FieldFunction::operator()(const Eigen::VectorXd& x) const {
    switch (kind_) {
        case Kind::Constant:
            return constant_;
        case Kind::Polynomial: {
            Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(polynomial_.size()));
            for (std::size_t c = 0; c < polynomial_.size(); ++c) {
                double value = 0.0;
                for (const Monomial& term : polynomial_[c]) {
                    double monomial = term.coefficient;
                    for (int d = 0; d < static_cast<int>(x.size()) && d < 3; ++d) {
                        for (int e = 0; e < term.powers[static_cast<std::size_t>(d)]; ++e) {
                            monomial *= x[d];
                        }
                    }
                    value += monomial;
                }
                out[static_cast<Index>(c)] = value;
            }
            return out;
        }
        case Kind::Named: {
            const TimoshenkoParams params = timoshenko_params_of(*this);
            if (name_ == "timoshenko_displacement") {
                return timoshenko_exact(params, x[0], x[1]).displacement;
            }
            // timoshenko_traction: the parabolic end shear.
            Eigen::Vector2d t(0.0, timoshenko_traction_y(params, x[1]));
            return t;
        }
    }
    throw std::logic_error("FieldFunction: unknown kind");
}

int FieldFunction::components() const {
    switch (kind_) {
        case Kind::Constant:
            return static_cast<int>(constant_.size());
        case Kind::Polynomial:
            return static_cast<int>(polynomial_.size());
        case Kind::Named:
            return 2;
    }
    return 0;
}

namespace {

void check(bool condition, const std::string& message) {
    if (!condition) {
        throw ModelError(message);
    }
}

}  // namespace

void MultiPatchModel::validate() const {
    check(!patches.empty(), "model: no patches");
    const int ds = patches.front().dim_space();
    for (std::size_t m = 0; m < patches.size(); ++m) {
        const auto& patch = patches[m];
        check(patch.dim_space() == ds, "model: patch " + std::to_string(m) + " has mixed spatial dimension");
        check(patch.dim_param() == patch.dim_space(),
              "model: patch " + std::to_string(m) + " is not a solvable domain (dim_param != dim_space)");
    }
    check(patch_material.size() == patches.size(), "model: patch_material size mismatch");
    for (std::size_t m = 0; m < patches.size(); ++m) {
        const Index mat = patch_material[m];
        check(mat >= 0 && mat < static_cast<Index>(materials.size()),
              "model: patch " + std::to_string(m) + " references unknown material " + std::to_string(mat));
        materials[static_cast<std::size_t>(mat)].validate();
        const int nv = voigt_size(materials[static_cast<std::size_t>(mat)].formulation);
        check(nv == voigt_size_for_dim(ds),
              "model: material formulation of patch " + std::to_string(m) +
                  " does not match the spatial dimension");
    }

    const auto check_face = [&](Index patch, const Face& face, const std::string& where) {
        check(patch >= 0 && patch < static_cast<Index>(patches.size()),
              "model: " + where + " references unknown patch " + std::to_string(patch));
        check(face.direction >= 0 && face.direction < patches[static_cast<std::size_t>(patch)].dim_param(),
              "model: " + where + " face direction out of range for patch " + std::to_string(patch));
    };
    for (const auto& bc : dirichlet) {
        check_face(bc.patch, bc.face, "dirichlet");
        check(bc.value.components() == ds, "model: dirichlet value has wrong component count");
    }
    for (const auto& bc : neumann) {
        check_face(bc.patch, bc.face, "neumann");
        check(bc.traction.components() == ds, "model: neumann traction has wrong component count");
    }

    for (std::size_t i = 0; i < interfaces.size(); ++i) {
        const InterfaceSpec& iface = interfaces[i];
        const std::string where = "interface " + std::to_string(i);
        check_face(iface.patch1, iface.face1, where);
        check_face(iface.patch2, iface.face2, where);
        check(iface.patch1 != iface.patch2, "model: " + where + " couples a patch with itself");
        check(iface.gamma >= 0.0 && iface.gamma <= 1.0, "model: " + where + " gamma outside [0, 1]");
        if (!iface.alpha.estimate) {
            check(iface.alpha.value > 0.0, "model: " + where + " explicit alpha must be positive");
        }

        // Coincidence sampling: structured points on face 1 must invert
        // on patch 2 and land on the declared face 2.
        const NurbsPatch& p1 = patches[static_cast<std::size_t>(iface.patch1)];
        const NurbsPatch& p2 = patches[static_cast<std::size_t>(iface.patch2)];
        const double tol = 1e-8 * std::max(1.0, std::max(p1.bounding_box_diagonal(),
                                                         p2.bounding_box_diagonal()));
        const auto& kv2 = p2.knot_vector(iface.face2.direction);
        const double face2_value = iface.face2.at_max ? kv2.range_max() : kv2.range_min();
        const double face2_range = kv2.range_max() - kv2.range_min();

        const int dp = p1.dim_param();
        const int samples = 5;
        std::array<int, 2> free_dirs{};
        int num_free = 0;
        for (int d = 0; d < dp; ++d) {
            if (d != iface.face1.direction) {
                free_dirs[static_cast<std::size_t>(num_free++)] = d;
            }
        }
        const auto& kv1 = p1.knot_vector(iface.face1.direction);
        const int count1 = num_free >= 1 ? samples : 1;
        const int count2 = num_free >= 2 ? samples : 1;
        for (int s1 = 0; s1 < count1; ++s1) {
            for (int s2 = 0; s2 < count2; ++s2) {
                ParamPoint pt;
                pt.dim = dp;
                pt[iface.face1.direction] = iface.face1.at_max ? kv1.range_max() : kv1.range_min();
                if (num_free >= 1) {
                    const auto& kv = p1.knot_vector(free_dirs[0]);
                    pt[free_dirs[0]] = kv.range_min() +
                                       (kv.range_max() - kv.range_min()) * s1 / (count1 - 1.0);
                }
                if (num_free >= 2) {
                    const auto& kv = p1.knot_vector(free_dirs[1]);
                    pt[free_dirs[1]] = kv.range_min() +
                                       (kv.range_max() - kv.range_min()) * s2 / (count2 - 1.0);
                }
                const Eigen::VectorXd x = p1.evaluate(pt);
                ParamPoint pt2;
                try {
                    pt2 = inverse_map(p2, x);
                } catch (const InversionError& err) {
                    std::ostringstream os;
                    os << "model: " << where << " faces are not coincident: point (";
                    for (Index c = 0; c < x.size(); ++c) {
                        os << (c ? ", " : "") << x[c];
                    }
                    os << ") on face 1 is not on patch " << iface.patch2 << " (" << err.what() << ")";
                    throw ModelError(os.str());
                }
                const double gap = (p2.evaluate(pt2) - x).norm();
                const double off_face = std::abs(pt2[iface.face2.direction] - face2_value);
                if (gap > tol || off_face > 1e-6 * face2_range) {
                    std::ostringstream os;
                    os << "model: " << where << " faces are not coincident at face-1 sample (";
                    for (int d = 0; d < dp; ++d) {
                        os << (d ? ", " : "") << pt[d];
                    }
                    os << "): gap " << gap << ", off-face distance " << off_face;
                    throw ModelError(os.str());
                }
            }
        }
    }
}

}  // namespace iga
