#pragma once

#include <array>
#include <string>

#include "qsurf/geometry.hpp"

namespace qsurf::refdata {

enum class Element { Pads, Leads, Squid };
const char* element_name(Element e);
Element element_from_name(const std::string& name);

enum class Process { LiftOff, Etch };
const char* process_name(Process p);
Process process_from_name(const std::string& name);

inline constexpr std::array<const char*, 3> design_labels = {"long", "regular", "wide"};

/// Bundled measurement and simulation reference values for the three wiring
/// designs: element participation totals, their per-interface breakdown,
/// extracted loss tangents per fabrication process, and the measured median
/// quality factors of the six devices.
struct ReferenceDataset {
    // participation ratios, dimensionless (stored as absolute values, i.e.
    // table entries multiplied by 1e-4); rows follow design_labels order,
    // element columns follow the Element enumeration
    std::array<std::array<double, 3>, 3> participation;

    // per-interface breakdown, [design][element][interface MA,MS,SA]
    std::array<std::array<std::array<double, 3>, 3>, 3> interface_participation;

    // extracted loss tangents, [process][element], absolute values, with
    // 68% confidence half-widths
    std::array<std::array<double, 3>, 2> loss_tangent;
    std::array<std::array<double, 3>, 2> loss_tangent_ci;

    struct MeasuredQubit {
        std::string qubit;   // "Q1".."Q6"
        std::string design;  // long/regular/wide
        Process process;
        double median_q;
    };
    std::array<MeasuredQubit, 6> measured;

    // qubit anharmonicity per design (MHz), used as the charging-energy
    // estimate when converting to a capacitance
    std::array<double, 3> anharmonicity_MHz;
    std::array<double, 2> sweet_spot_GHz_long;     // lift-off, etch
    std::array<double, 2> sweet_spot_GHz_regular;
    std::array<double, 2> sweet_spot_GHz_wide;

    int design_index(const std::string& label) const;
    double participation_of(const std::string& design, Element e) const;
};

const ReferenceDataset& reference_dataset();

}  // namespace qsurf::refdata
