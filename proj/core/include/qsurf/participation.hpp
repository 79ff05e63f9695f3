#pragma once

#include <array>
#include <map>
#include <string>

#include "qsurf/field_map.hpp"
#include "qsurf/laplace2d.hpp"
#include "qsurf/reference_data.hpp"

namespace qsurf::participation {

/// Ratios converting convergence-band field integrals into full
/// perimeter/wiring participations.  The pad-edge trio and the wiring trio
/// are computed from different cross-sections; each carries a flag so a
/// mismatched use is caught.
struct ScalingFactors {
    double f_ms = 0.0, f_ma = 0.0, f_sa = 0.0;     // pad edge
    double fp_ms = 0.0, fp_ma = 0.0, fp_sa = 0.0;  // wiring
    bool has_edge = false;
    bool has_wiring = false;
    double x0_um = 1.0;
    double x0p_um = 0.5;

    double edge(geom::Interface i) const;
    double wiring(geom::Interface i) const;
};

/// Pad-edge factors: ratios of f^2 integrals between the full perimeter band
/// and the convergence band [x0/2, x0].  Requires a pad-edge solution with
/// at least 8 cells across the convergence band.
ScalingFactors edge_scaling_factors(const fields::FieldSolution& sol, double x0_um = 1.0);

/// Wiring factors: full strip cross-section over the center convergence band
/// [-x0', x0'].  The SA numerator covers the two exposed bands of width 2*x0
/// beside the strip.
ScalingFactors wiring_scaling_factors(const fields::FieldSolution& sol, double x0p_um = 0.5,
                                      double x0_um = 1.0);

/// Inner-region participation p = t * (eps/2) * integral |E|^2 dA / U_tot for
/// every element with an inner series in the map.
std::map<fields::MapElement, double> inner_participation(const fields::SurfaceFieldMap& map,
                                                         const geom::InterfaceSpec& iface);

/// Perimeter participation of the pad-like elements (pads, ground) from the
/// convergence band scaled by the pad-edge factor.  The SA value uses the
/// metal-substrate band series, matching the scaling-factor definition.
std::map<fields::MapElement, double> perimeter_participation(const fields::SurfaceFieldMap& map,
                                                             const ScalingFactors& factors,
                                                             const geom::InterfaceSpec& iface);

struct WiringParticipation {
    double leads = 0.0;
    double squid = 0.0;
};

/// Wiring participation from the center band, per segment.
WiringParticipation wiring_participation(const fields::SurfaceFieldMap& map,
                                         const ScalingFactors& leads_factors,
                                         const ScalingFactors& squid_factors,
                                         const geom::InterfaceSpec& iface);

enum class Provenance { Computed, ReferenceTable, ImportedField };
const char* provenance_name(Provenance p);

/// p per element and interface with element totals.  Totals are accumulated
/// in the fixed order MA, SA, MS so results are bitwise reproducible.
struct ParticipationBreakdown {
    std::array<std::array<double, 3>, 3> p{};  // [element][interface MA,MS,SA]
    std::array<double, 3> totals{};            // pads, leads, squid
    Provenance provenance = Provenance::Computed;
    std::string design_label;

    double entry(refdata::Element e, geom::Interface i) const {
        return p[static_cast<int>(e)][static_cast<int>(i)];
    }
    double total(refdata::Element e) const { return totals[static_cast<int>(e)]; }
};

/// Assembles a breakdown from the nine entries, recomputing totals in the
/// fixed summation order and validating 0 <= p < 1.
ParticipationBreakdown total_participation(const std::array<std::array<double, 3>, 3>& entries,
                                           Provenance provenance, const std::string& design_label);

struct PipelineFactors {
    ScalingFactors pad_edge;
    ScalingFactors leads;
    ScalingFactors squid;
};

/// Scaling factors for a design from its two wiring cross-sections plus the
/// canonical pad-edge cross-section (the edge profile is insensitive to the
/// distant geometry, so one pad-edge solve serves all designs).
PipelineFactors compute_factors(const geom::QubitDesign& design, fields::Resolution res);

/// Full two-step pipeline on a surface-field map.
ParticipationBreakdown participation_from_map(const fields::SurfaceFieldMap& map,
                                              const PipelineFactors& factors,
                                              const geom::InterfaceSet& stage,
                                              Provenance provenance,
                                              const std::string& design_label);

/// Bundled per-interface table rows for one of the three reference designs.
ParticipationBreakdown participation_reference(const std::string& design_label);

/// Built-in coarse stage end to end (sheet solver + cross-section factors).
ParticipationBreakdown participation_computed(const geom::QubitDesign& design,
                                              fields::Resolution res);

}  // namespace qsurf::participation
