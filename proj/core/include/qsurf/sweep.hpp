#pragma once

#include <string>
#include <vector>

#include "qsurf/participation.hpp"

namespace qsurf::participation {

struct SweepRow {
    double param_value = 0.0;
    double p_pads = 0.0;
    double p_wiring = 0.0;       // leads + squid
    double p_pads_norm = 0.0;    // normalized to the first sweep point
    double p_wiring_norm = 0.0;
    double pad_width_um = 0.0;
    double ec_MHz = 0.0;
};

struct SweepResult {
    std::string parameter;  // "gap" or "lead_width"
    std::vector<SweepRow> rows;

    /// First parameter value at which wiring participation exceeds pads
    /// (linear interpolation between sweep points); NaN when no crossover.
    double crossover() const;
};

/// Gap sweep: for each gap the pad width (and proportionally the pad height)
/// is adjusted so the charging energy stays within +/- tol of the target;
/// lead lengths follow the gap, preserving the template's extra routed
/// length.  Throws SolverError when the target is unreachable within the
/// pad-width bounds.
SweepResult sweep_gap(const geom::QubitDesign& base, double lo_um, double hi_um, double step_um,
                      fields::Resolution res, double ec_target_MHz = 220.0,
                      double ec_tol_MHz = 2.0);

/// Lead-width sweep at fixed pads and gap.
SweepResult sweep_lead_width(const geom::QubitDesign& base, double lo_um, double hi_um,
                             double step_um, fields::Resolution res);

}  // namespace qsurf::participation
