#include "qsurf/geometry.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qsurf/errors.hpp"

namespace qsurf::geom {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw ValidationError(std::string("design field '") + name + "' must be strictly positive");
    }
}

}  // namespace

void QubitDesign::validate() const {
    require_positive(pad_width_um, "pad_width");
    require_positive(pad_height_um, "pad_height");
    require_positive(gap_um, "gap");
    require_positive(lead_width_um, "lead_width");
    require_positive(lead_length_um, "lead_length");
    require_positive(lead_spacing_um, "lead_spacing");
    require_positive(squid_loop_side_um, "squid_loop_side");
    require_positive(squid_wire_width_um, "squid_wire_width");
    require_positive(film_thickness_nm, "film_thickness");
    if (!(lead_width_um < pad_width_um)) {
        throw ValidationError("lead_width must be smaller than pad_width");
    }
    if (!(squid_loop_side_um < gap_um)) {
        throw ValidationError("squid_loop_side must fit within gap");
    }
    if (!(2.0 * squid_wire_width_um < squid_loop_side_um)) {
        throw ValidationError("squid_wire_width too large for squid_loop_side");
    }
    if (design_label.empty()) {
        throw ValidationError("design_label must be non-empty");
    }
}

const char* interface_name(Interface i) {
    switch (i) {
        case Interface::MA: return "MA";
        case Interface::MS: return "MS";
        case Interface::SA: return "SA";
    }
    return "?";
}

Interface interface_from_name(const std::string& name) {
    if (name == "MA") return Interface::MA;
    if (name == "MS") return Interface::MS;
    if (name == "SA") return Interface::SA;
    throw ParseError("unknown interface kind '" + name + "'");
}

void InterfaceSpec::validate() const {
    if (!(thickness_nm > 0.0)) throw ValidationError("interface thickness must be > 0");
    if (!(relative_permittivity >= 1.0)) throw ValidationError("interface permittivity must be >= 1");
    if (tls_volume_density_per_um3_GHz < 0.0) throw ValidationError("tls_volume_density must be >= 0");
}

InterfaceSet participation_stage_interfaces() {
    InterfaceSet s;
    s[0] = {Interface::MA, 3.0, 10.0, 0.0};
    s[1] = {Interface::MS, 3.0, 10.0, 0.0};
    s[2] = {Interface::SA, 3.0, 10.0, 0.0};
    return s;
}

InterfaceSet tls_stage_interfaces() {
    InterfaceSet s;
    s[0] = {Interface::MA, 2.0, 10.0, 1800.0};
    s[1] = {Interface::MS, 0.3, 10.0, 1800.0};
    s[2] = {Interface::SA, 0.36, 10.0, 1800.0};
    return s;
}

namespace {

using nlohmann::json;

const std::map<std::string, double QubitDesign::*>& numeric_fields() {
    static const std::map<std::string, double QubitDesign::*> fields = {
        {"pad_width", &QubitDesign::pad_width_um},
        {"pad_height", &QubitDesign::pad_height_um},
        {"gap", &QubitDesign::gap_um},
        {"lead_width", &QubitDesign::lead_width_um},
        {"lead_length", &QubitDesign::lead_length_um},
        {"lead_spacing", &QubitDesign::lead_spacing_um},
        {"squid_loop_side", &QubitDesign::squid_loop_side_um},
        {"squid_wire_width", &QubitDesign::squid_wire_width_um},
        {"film_thickness", &QubitDesign::film_thickness_nm},
    };
    return fields;
}

}  // namespace

QubitDesign load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open design file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("malformed design file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("design file must contain a single JSON object: " + path);

    QubitDesign d;
    const auto& fields = numeric_fields();
    for (const auto& [key, value] : j.items()) {
        if (key == "design_label") {
            if (!value.is_string()) throw ParseError("design_label must be a string");
            d.design_label = value.get<std::string>();
            continue;
        }
        const auto it = fields.find(key);
        if (it == fields.end()) throw ParseError("unknown design key '" + key + "' in " + path);
        if (!value.is_number()) throw ParseError("design key '" + key + "' must be a number");
        d.*(it->second) = value.get<double>();
    }
    for (const auto& [key, member] : fields) {
        if (key == "film_thickness") continue;  // optional, defaults to 120 nm
        if (!j.contains(key)) throw ParseError("design file missing key '" + key + "'");
    }
    if (!j.contains("design_label")) throw ParseError("design file missing key 'design_label'");
    d.validate();
    return d;
}

void save_design(const QubitDesign& design, const std::string& path) {
    design.validate();
    json j;
    j["design_label"] = design.design_label;
    for (const auto& [key, member] : numeric_fields()) {
        j[key] = design.*member;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write design file: " + path);
    out << j.dump(2) << "\n";
}

std::vector<QubitDesign> builtin_designs() {
    // Shared pads, gap and SQUID; only the wiring differs.  W and G follow
    // the published regular design; lead lengths are illustrative values
    // reproducing the published ordering long > regular > wide.
    QubitDesign base;
    base.pad_width_um = 204.0;
    base.pad_height_um = 42.0;
    base.gap_um = 120.0;
    base.lead_width_um = 2.5;
    base.lead_spacing_um = 4.0;
    base.squid_loop_side_um = 25.0;
    base.squid_wire_width_um = 1.5;
    base.film_thickness_nm = 120.0;

    QubitDesign longd = base;
    longd.design_label = "long";
    longd.lead_length_um = 155.0;

    QubitDesign regular = base;
    regular.design_label = "regular";
    regular.lead_length_um = 55.0;

    QubitDesign wide = base;
    wide.design_label = "wide";
    wide.lead_width_um = 10.0;
    wide.lead_length_um = 47.5;

    return {longd, regular, wide};
}

const QubitDesign& builtin_design(const std::string& label) {
    static const std::vector<QubitDesign> designs = builtin_designs();
    for (const auto& d : designs) {
        if (d.design_label == label) return d;
    }
    throw ValidationError("unknown builtin design '" + label + "' (expected long, regular or wide)");
}

}  // namespace qsurf::geom
