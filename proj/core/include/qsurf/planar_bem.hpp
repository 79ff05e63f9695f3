#pragma once

#include "qsurf/field_map.hpp"
#include "qsurf/geometry.hpp"

namespace qsurf::fields {

/// Coarse global stage: conductors as perfectly-conducting coplanar sheets,
/// the substrate half-space folded into an effective permittivity
/// (eps_sub + 1)/2, charge collocation on graded rectangular panels with the
/// exact coplanar 1/r kernel.  Interface layers are omitted at this stage.
/// Intended for trends and capacitance estimates; quantitative participation
/// work uses imported field maps.
struct CoarseOptions {
    double ground_clearance_um = 60.0;  // pad outline to ground opening
    double ground_margin_um = 150.0;    // modeled ground frame width
    double substrate_permittivity = geom::default_substrate_permittivity;
    double panel_scale = 1.0;           // < 1 refines all panel targets
};

struct CapacitanceResult {
    double capacitance_F = 0.0;
    double charging_energy_MHz = 0.0;
    int panels = 0;
};

/// Solves the sheet model at the given pad-to-pad excitation and samples the
/// squared-field densities of every element's MA/MS/SA surfaces.
/// Zero excitation is a degenerate input and throws.
SurfaceFieldMap coarse_surface_fields(const geom::QubitDesign& design, double excitation_V,
                                      const CoarseOptions& options = {});

/// C = 2 U_tot / V^2 from the coarse stage and E_C = e^2/2C in MHz.
CapacitanceResult capacitance(const geom::QubitDesign& design, const CoarseOptions& options = {});

}  // namespace qsurf::fields
