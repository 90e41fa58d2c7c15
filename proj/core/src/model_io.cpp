#include "iganitsche/model_io.hpp"

#include "iganitsche/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iga {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& message) {
    throw ModelError(where + ": " + message);
}

const json& require(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key)) {
        fail(where, std::string("missing field '") + key + "'");
    }
    return node.at(key);
}

double require_number(const json& node, const char* key, const std::string& where) {
    const json& value = require(node, key, where);
    if (!value.is_number()) {
        fail(where + "." + key, "expected a number");
    }
    return value.get<double>();
}

FieldFunction parse_function(const json& node, const std::string& where) {
    if (!node.is_object()) {
        fail(where, "expected an object with a 'type' field");
    }
    const std::string type = require(node, "type", where).get<std::string>();
    if (type == "constant") {
        const json& value = require(node, "value", where);
        if (!value.is_array() || value.empty()) {
            fail(where + ".value", "expected a non-empty array");
        }
        Eigen::VectorXd v(static_cast<Index>(value.size()));
        for (std::size_t i = 0; i < value.size(); ++i) {
            v[static_cast<Index>(i)] = value[i].get<double>();
        }
        return FieldFunction::constant(std::move(v));
    }
    if (type == "polynomial") {
        const json& comps = require(node, "components", where);
        if (!comps.is_array() || comps.empty()) {
            fail(where + ".components", "expected a non-empty array of monomial lists");
        }
        std::vector<std::vector<FieldFunction::Monomial>> components;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            std::vector<FieldFunction::Monomial> terms;
            for (const json& term : comps[c]) {
                FieldFunction::Monomial monomial;
                monomial.coefficient = require_number(term, "coef", where + ".components");
                const json& powers = require(term, "powers", where + ".components");
                for (std::size_t d = 0; d < powers.size() && d < 3; ++d) {
                    monomial.powers[d] = powers[d].get<int>();
                }
                terms.push_back(monomial);
            }
            components.push_back(std::move(terms));
        }
        return FieldFunction::polynomial(std::move(components));
    }
    if (type == "timoshenko_displacement" || type == "timoshenko_traction") {
        std::vector<std::pair<std::string, double>> params;
        for (const char* key : {"L", "D", "P", "E", "nu"}) {
            params.emplace_back(key, require_number(node, key, where));
        }
        return FieldFunction::named(type, std::move(params));
    }
    fail(where + ".type", "unknown function type '" + type + "'");
}

json function_to_json(const FieldFunction& f) {
    json node;
    switch (f.kind()) {
        case FieldFunction::Kind::Constant: {
            node["type"] = "constant";
            node["value"] = std::vector<double>(f.constant_values().data(),
                                                f.constant_values().data() + f.constant_values().size());
            break;
        }
        case FieldFunction::Kind::Polynomial: {
            node["type"] = "polynomial";
            json comps = json::array();
            for (const auto& component : f.polynomial_components()) {
                json terms = json::array();
                for (const auto& term : component) {
                    terms.push_back({{"coef", term.coefficient},
                                     {"powers", {term.powers[0], term.powers[1], term.powers[2]}}});
                }
                comps.push_back(terms);
            }
            node["components"] = comps;
            break;
        }
        case FieldFunction::Kind::Named: {
            node["type"] = f.name();
            for (const auto& [key, value] : f.parameters()) {
                node[key] = value;
            }
            break;
        }
    }
    return node;
}

Formulation parse_formulation(const std::string& name, const std::string& where) {
    if (name == "plane-stress") return Formulation::PlaneStress;
    if (name == "plane-strain") return Formulation::PlaneStrain;
    if (name == "solid-3d") return Formulation::Solid3D;
    fail(where, "unknown formulation '" + name + "'");
}

std::string formulation_name(Formulation f) {
    switch (f) {
        case Formulation::PlaneStress: return "plane-stress";
        case Formulation::PlaneStrain: return "plane-strain";
        case Formulation::Solid3D: return "solid-3d";
    }
    return "plane-stress";
}

NurbsPatch parse_patch(const json& node, const std::string& where) {
    const json& degrees_node = require(node, "degrees", where);
    const json& knots_node = require(node, "knots", where);
    if (!degrees_node.is_array() || !knots_node.is_array() ||
        degrees_node.size() != knots_node.size() || degrees_node.empty() || degrees_node.size() > 3) {
        fail(where, "'degrees' and 'knots' must be matching arrays of 1 to 3 entries");
    }
    std::vector<KnotVector> kvs;
    for (std::size_t d = 0; d < degrees_node.size(); ++d) {
        std::vector<double> knots = knots_node[d].get<std::vector<double>>();
        try {
            kvs.emplace_back(degrees_node[d].get<int>(), std::move(knots));
        } catch (const std::exception& err) {
            fail(where + ".knots[" + std::to_string(d) + "]", err.what());
        }
    }

    const json& cps = require(node, "control_points", where);
    if (!cps.is_array() || cps.empty()) {
        fail(where + ".control_points", "expected a non-empty array");
    }
    const std::size_t stride = cps.front().size();
    if (stride < 3 || stride > 4) {
        fail(where + ".control_points", "each entry must be [x, y, (z,) w]");
    }
    const int ds = static_cast<int>(stride) - 1;
    Eigen::MatrixXd points(static_cast<Index>(cps.size()), ds);
    Eigen::VectorXd weights(static_cast<Index>(cps.size()));
    for (std::size_t a = 0; a < cps.size(); ++a) {
        const json& entry = cps[a];
        if (!entry.is_array() || entry.size() != stride) {
            fail(where + ".control_points[" + std::to_string(a) + "]", "inconsistent entry size");
        }
        for (int c = 0; c < ds; ++c) {
            points(static_cast<Index>(a), c) = entry[static_cast<std::size_t>(c)].get<double>();
        }
        weights[static_cast<Index>(a)] = entry[stride - 1].get<double>();
    }
    try {
        return NurbsPatch(std::move(kvs), std::move(points), std::move(weights));
    } catch (const std::exception& err) {
        fail(where, err.what());
    }
}

json patch_to_json(const NurbsPatch& patch) {
    json node;
    json degrees = json::array();
    json knots = json::array();
    for (int d = 0; d < patch.dim_param(); ++d) {
        degrees.push_back(patch.knot_vector(d).degree());
        knots.push_back(patch.knot_vector(d).knots());
    }
    node["degrees"] = degrees;
    node["knots"] = knots;
    json cps = json::array();
    for (Index a = 0; a < patch.num_control_points(); ++a) {
        json entry = json::array();
        for (int c = 0; c < patch.dim_space(); ++c) {
            entry.push_back(patch.control_points()(a, c));
        }
        entry.push_back(patch.weights()[a]);
        cps.push_back(entry);
    }
    node["control_points"] = cps;
    return node;
}

}  // namespace

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ModelError(path.string() + ": cannot open file");
    }
    json root;
    try {
        in >> root;
    } catch (const json::exception& err) {
        throw ModelError(path.string() + ": invalid JSON: " + err.what());
    }
    const std::string file = path.string();

    const std::string version = require(root, "version", file).get<std::string>();
    if (version != "1") {
        fail(file + ".version", "unsupported model version '" + version + "'");
    }

    LoadedModel loaded;
    MultiPatchModel& model = loaded.model;

    const json& patches = require(root, "patches", file);
    if (!patches.is_array() || patches.empty()) {
        fail(file + ".patches", "expected a non-empty array");
    }
    for (std::size_t m = 0; m < patches.size(); ++m) {
        const std::string where = file + ".patches[" + std::to_string(m) + "]";
        model.patches.push_back(parse_patch(patches[m], where));
        model.patch_material.push_back(require(patches[m], "material", where).get<Index>());
    }

    const json& materials = require(root, "materials", file);
    for (std::size_t i = 0; i < materials.size(); ++i) {
        const std::string where = file + ".materials[" + std::to_string(i) + "]";
        Material material;
        material.youngs_modulus = require_number(materials[i], "E", where);
        material.poisson_ratio = require_number(materials[i], "nu", where);
        material.formulation =
            parse_formulation(require(materials[i], "formulation", where).get<std::string>(), where);
        model.materials.push_back(material);
    }

    for (const char* section : {"dirichlet", "neumann"}) {
        if (!root.contains(section)) {
            continue;
        }
        const json& specs = root.at(section);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const std::string where = file + "." + section + "[" + std::to_string(i) + "]";
            const Index patch = require(specs[i], "patch", where).get<Index>();
            Face face;
            try {
                face = face_from_name(require(specs[i], "face", where).get<std::string>());
            } catch (const std::exception& err) {
                fail(where + ".face", err.what());
            }
            if (std::string(section) == "dirichlet") {
                model.dirichlet.push_back(
                    {patch, face, parse_function(require(specs[i], "value", where), where + ".value")});
            } else {
                model.neumann.push_back(
                    {patch, face,
                     parse_function(require(specs[i], "traction", where), where + ".traction")});
            }
        }
    }

    if (root.contains("interfaces")) {
        const json& interfaces = root.at("interfaces");
        for (std::size_t i = 0; i < interfaces.size(); ++i) {
            const std::string where = file + ".interfaces[" + std::to_string(i) + "]";
            const json& node = interfaces[i];
            InterfaceSpec iface;
            const json& pair = require(node, "patches", where);
            const json& faces = require(node, "faces", where);
            if (!pair.is_array() || pair.size() != 2 || !faces.is_array() || faces.size() != 2) {
                fail(where, "'patches' and 'faces' must be arrays of two entries");
            }
            iface.patch1 = pair[0].get<Index>();
            iface.patch2 = pair[1].get<Index>();
            try {
                iface.face1 = face_from_name(faces[0].get<std::string>());
                iface.face2 = face_from_name(faces[1].get<std::string>());
            } catch (const std::exception& err) {
                fail(where + ".faces", err.what());
            }
            if (node.contains("gamma")) {
                iface.gamma = node.at("gamma").get<double>();
            }
            if (node.contains("alpha")) {
                const json& alpha = node.at("alpha");
                if (alpha.is_string() && alpha.get<std::string>() == "estimate") {
                    iface.alpha = AlphaPolicy::estimated();
                } else if (alpha.is_number()) {
                    iface.alpha = AlphaPolicy::explicit_value(alpha.get<double>());
                } else {
                    fail(where + ".alpha", "expected \"estimate\" or a positive number");
                }
            }
            model.interfaces.push_back(iface);
        }
    }

    if (root.contains("body_force")) {
        model.body_force = parse_function(root.at("body_force"), file + ".body_force");
    }

    if (root.contains("probes")) {
        const json& probes = root.at("probes");
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const std::string where = file + ".probes[" + std::to_string(i) + "]";
            Probe probe;
            probe.name = require(probes[i], "name", where).get<std::string>();
            probe.patch = require(probes[i], "patch", where).get<Index>();
            const json& param = require(probes[i], "param", where);
            probe.param.dim = static_cast<int>(param.size());
            for (std::size_t d = 0; d < param.size() && d < 3; ++d) {
                probe.param[static_cast<int>(d)] = param[d].get<double>();
            }
            loaded.probes.push_back(std::move(probe));
        }
    }

    if (root.contains("reference_solution")) {
        const json& ref = root.at("reference_solution");
        const std::string where = file + ".reference_solution";
        const std::string type = require(ref, "type", where).get<std::string>();
        if (type != "timoshenko") {
            fail(where + ".type", "unknown reference solution '" + type + "'");
        }
        TimoshenkoParams params;
        params.length = require_number(ref, "L", where);
        params.depth = require_number(ref, "D", where);
        params.shear_force = require_number(ref, "P", where);
        params.youngs_modulus = require_number(ref, "E", where);
        params.poisson_ratio = require_number(ref, "nu", where);
        loaded.reference = params;
    }

    if (root.contains("solver")) {
        const json& solver = root.at("solver");
        if (solver.contains("threads")) loaded.options.threads = solver.at("threads").get<int>();
        if (solver.contains("interface_points")) {
            loaded.options.interface_points = solver.at("interface_points").get<int>();
        }
    }
    if (root.contains("output")) {
        const json& output = root.at("output");
        if (output.contains("vtk_density")) {
            loaded.options.vtk_density = output.at("vtk_density").get<int>();
        }
    }

    try {
        model.validate();
    } catch (const std::exception& err) {
        throw ModelError(file + ": " + err.what());
    }
    return loaded;
}

void save_model(const LoadedModel& loaded, const std::filesystem::path& path) {
    const MultiPatchModel& model = loaded.model;
    json root;
    root["version"] = "1";

    json patches = json::array();
    for (std::size_t m = 0; m < model.patches.size(); ++m) {
        json node = patch_to_json(model.patches[m]);
        node["material"] = model.patch_material[m];
        patches.push_back(node);
    }
    root["patches"] = patches;

    json materials = json::array();
    for (const Material& material : model.materials) {
        materials.push_back({{"E", material.youngs_modulus},
                             {"nu", material.poisson_ratio},
                             {"formulation", formulation_name(material.formulation)}});
    }
    root["materials"] = materials;

    json dirichlet = json::array();
    for (const DirichletSpec& spec : model.dirichlet) {
        dirichlet.push_back({{"patch", spec.patch},
                             {"face", face_name(spec.face)},
                             {"value", function_to_json(spec.value)}});
    }
    root["dirichlet"] = dirichlet;

    json neumann = json::array();
    for (const NeumannSpec& spec : model.neumann) {
        neumann.push_back({{"patch", spec.patch},
                           {"face", face_name(spec.face)},
                           {"traction", function_to_json(spec.traction)}});
    }
    root["neumann"] = neumann;

    json interfaces = json::array();
    for (const InterfaceSpec& iface : model.interfaces) {
        json node;
        node["patches"] = {iface.patch1, iface.patch2};
        node["faces"] = {face_name(iface.face1), face_name(iface.face2)};
        node["gamma"] = iface.gamma;
        if (iface.alpha.estimate) {
            node["alpha"] = "estimate";
        } else {
            node["alpha"] = iface.alpha.value;
        }
        interfaces.push_back(node);
    }
    root["interfaces"] = interfaces;

    if (model.body_force) {
        root["body_force"] = function_to_json(*model.body_force);
    }
    if (!loaded.probes.empty()) {
        json probes = json::array();
        for (const Probe& probe : loaded.probes) {
            json param = json::array();
            for (int d = 0; d < probe.param.dim; ++d) {
                param.push_back(probe.param[d]);
            }
            probes.push_back({{"name", probe.name}, {"patch", probe.patch}, {"param", param}});
        }
        root["probes"] = probes;
    }
    if (loaded.reference) {
        root["reference_solution"] = {{"type", "timoshenko"},
                                      {"L", loaded.reference->length},
                                      {"D", loaded.reference->depth},
                                      {"P", loaded.reference->shear_force},
                                      {"E", loaded.reference->youngs_modulus},
                                      {"nu", loaded.reference->poisson_ratio}};
    }
    root["solver"] = {{"threads", loaded.options.threads},
                      {"interface_points", loaded.options.interface_points}};
    root["output"] = {{"vtk_density", loaded.options.vtk_density}};

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ModelError(tmp.string() + ": cannot open for writing");
        }
        out << root.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace iga
