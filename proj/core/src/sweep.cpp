#include "qsurf/sweep.hpp"

#include <cmath>
#include <limits>

#include "qsurf/errors.hpp"
#include "qsurf/planar_bem.hpp"
#include "qsurf/units.hpp"

namespace qsurf::participation {

double SweepResult::crossover() const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].p_wiring > rows[i].p_pads) {
            if (i == 0) return rows[0].param_value;
            const auto& a = rows[i - 1];
            const auto& b = rows[i];
            const double fa = a.p_wiring - a.p_pads;
            const double fb = b.p_wiring - b.p_pads;
            return a.param_value + (b.param_value - a.param_value) * (-fa) / (fb - fa);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace {

geom::QubitDesign with_gap(const geom::QubitDesign& base, double gap_um) {
    geom::QubitDesign d = base;
    const double base_direct = (base.gap_um - base.squid_loop_side_um) / 2.0;
    const double extra = base.lead_length_um - base_direct;
    d.gap_um = gap_um;
    d.lead_length_um = (gap_um - d.squid_loop_side_um) / 2.0 + std::max(extra, 0.0);
    return d;
}

geom::QubitDesign with_pad_width(const geom::QubitDesign& base, double w_um) {
    geom::QubitDesign d = base;
    const double aspect = base.pad_height_um / base.pad_width_um;
    d.pad_width_um = w_um;
    d.pad_height_um = w_um * aspect;
    return d;
}

struct SolvedPoint {
    fields::SurfaceFieldMap map;
    double ec_MHz = 0.0;
};

SolvedPoint solve_point(const geom::QubitDesign& d) {
    SolvedPoint p;
    p.map = fields::coarse_surface_fields(d, 1.0);
    const double c = 2.0 * p.map.u_tot_J;  // V = 1
    p.ec_MHz = units::charging_energy_MHz(c);
    return p;
}

}  // namespace

SweepResult sweep_gap(const geom::QubitDesign& base, double lo, double hi, double step,
                      fields::Resolution res, double ec_target, double ec_tol) {
    base.validate();
    if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0)) {
        throw ValidationError("bad sweep range");
    }
    SweepResult out;
    out.parameter = "gap";

    const PipelineFactors factors = compute_factors(base, res);
    const geom::InterfaceSet stage = geom::participation_stage_interfaces();

    double w_lo = base.pad_width_um / 4.0;
    double w_hi = base.pad_width_um * 4.0;
    double w_start = base.pad_width_um;

    for (double g = lo; g <= hi + step * 1e-9; g += step) {
        const geom::QubitDesign dg = with_gap(base, g);

        // E_C decreases with pad width; bisect on log(width)
        double a = w_lo, b = w_hi;
        double w = std::min(std::max(w_start, a), b);
        SolvedPoint pt = solve_point(with_pad_width(dg, w));
        int guard = 0;
        while (std::abs(pt.ec_MHz - ec_target) > ec_tol) {
            if (pt.ec_MHz > ec_target) {
                a = w;  // too small a capacitor: widen
            } else {
                b = w;
            }
            const double next = std::sqrt(a * b);
            if (!(next > w_lo * 0.999) || !(next < w_hi * 1.001) || ++guard > 60 ||
                std::abs(next - w) < 1e-4) {
                throw SolverError("charging-energy target unreachable within pad-width bounds at gap " +
                                  std::to_string(g));
            }
            w = next;
            pt = solve_point(with_pad_width(dg, w));
        }
        w_start = w;  // warm start for the next gap

        const ParticipationBreakdown br = participation_from_map(
            pt.map, factors, stage, Provenance::Computed, base.design_label);
        SweepRow row;
        row.param_value = g;
        row.p_pads = br.total(refdata::Element::Pads);
        row.p_wiring = br.total(refdata::Element::Leads) + br.total(refdata::Element::Squid);
        row.pad_width_um = w;
        row.ec_MHz = pt.ec_MHz;
        out.rows.push_back(row);
    }

    const double pads0 = out.rows.front().p_pads;
    const double wiring0 = out.rows.front().p_wiring;
    for (auto& r : out.rows) {
        r.p_pads_norm = r.p_pads / pads0;
        r.p_wiring_norm = r.p_wiring / wiring0;
    }
    return out;
}

SweepResult sweep_lead_width(const geom::QubitDesign& base, double lo, double hi, double step,
                             fields::Resolution res) {
    base.validate();
    if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0)) {
        throw ValidationError("bad sweep range");
    }
    SweepResult out;
    out.parameter = "lead_width";
    const geom::InterfaceSet stage = geom::participation_stage_interfaces();

    for (double w = lo; w <= hi + step * 1e-9; w += step) {
        geom::QubitDesign d = base;
        d.lead_width_um = w;
        d.validate();
        const PipelineFactors factors = compute_factors(d, res);
        const SolvedPoint pt = solve_point(d);
        const ParticipationBreakdown br = participation_from_map(
            pt.map, factors, stage, Provenance::Computed, base.design_label);
        SweepRow row;
        row.param_value = w;
        row.p_pads = br.total(refdata::Element::Pads);
        row.p_wiring = br.total(refdata::Element::Leads) + br.total(refdata::Element::Squid);
        row.pad_width_um = d.pad_width_um;
        row.ec_MHz = pt.ec_MHz;
        out.rows.push_back(row);
    }

    const double pads0 = out.rows.front().p_pads;
    const double wiring0 = out.rows.front().p_wiring;
    for (auto& r : out.rows) {
        r.p_pads_norm = r.p_pads / pads0;
        r.p_wiring_norm = r.p_wiring / wiring0;
    }
    return out;
}

}  // namespace qsurf::participation
