#pragma once

#include <array>
#include <string>
#include <vector>

namespace qsurf::geom {

/// Parametric layout of a two-pad floating transmon: capacitor pads separated
/// by a gap, two parallel wiring leads running from the pads to a square
/// SQUID loop sitting in the gap.  All lateral dimensions in micrometers,
/// film thickness in nanometers.
struct QubitDesign {
    double pad_width_um = 0.0;        // W
    double pad_height_um = 0.0;
    double gap_um = 0.0;              // G, distance between the two pads
    double lead_width_um = 0.0;       // w'
    double lead_length_um = 0.0;      // per lead
    double lead_spacing_um = 0.0;     // g', distance between the two parallel leads
    double squid_loop_side_um = 0.0;
    double squid_wire_width_um = 0.0;
    double film_thickness_nm = 120.0; // h
    std::string design_label;

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

enum class Interface { MA, MS, SA };

const char* interface_name(Interface i);
Interface interface_from_name(const std::string& name);

/// One dielectric interface layer.  Thickness in nanometers.
struct InterfaceSpec {
    Interface kind = Interface::MA;
    double thickness_nm = 3.0;
    double relative_permittivity = 10.0;
    double tls_volume_density_per_um3_GHz = 0.0;  // 0 = unset

    void validate() const;
};

using InterfaceSet = std::array<InterfaceSpec, 3>;  // indexed MA, MS, SA

/// 3 nm / eps 10 layers used for participation-ratio work.
InterfaceSet participation_stage_interfaces();

/// Effective thicknesses 2 / 0.3 / 0.36 nm for MA / MS / SA used when
/// sampling TLS defects, with the bulk defect density attached.
InterfaceSet tls_stage_interfaces();

/// Substrate relative permittivity (high-resistivity silicon).
inline constexpr double default_substrate_permittivity = 11.45;

/// Loads and validates a design file (UTF-8 JSON, one object, keys exactly
/// the QubitDesign field names without the unit suffix; unknown keys are
/// rejected).
QubitDesign load_design(const std::string& path);

void save_design(const QubitDesign& design, const std::string& path);

/// The three wiring variants: "long", "regular", "wide".  Pads, gap and
/// SQUID dimensions are shared; lead length and width differ.  Lead lengths
/// and SQUID dimensions are illustrative (chosen consistent with the
/// published ordering), not published values.
std::vector<QubitDesign> builtin_designs();

const QubitDesign& builtin_design(const std::string& label);

}  // namespace qsurf::geom
