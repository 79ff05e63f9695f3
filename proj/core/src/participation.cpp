#include "qsurf/participation.hpp"

#include <cmath>
#include <mutex>

#include "qsurf/errors.hpp"
#include "qsurf/planar_bem.hpp"
#include "qsurf/units.hpp"

namespace qsurf::participation {

using fields::FieldSolution;
using fields::MapElement;
using fields::SurfaceFieldMap;
using geom::Interface;

double ScalingFactors::edge(Interface i) const {
    if (!has_edge) throw ValidationError("scaling factors carry no pad-edge trio");
    switch (i) {
        case Interface::MA: return f_ma;
        case Interface::MS: return f_ms;
        case Interface::SA: return f_sa;
    }
    return 0.0;
}

double ScalingFactors::wiring(Interface i) const {
    if (!has_wiring) throw ValidationError("scaling factors carry no wiring trio");
    switch (i) {
        case Interface::MA: return fp_ma;
        case Interface::MS: return fp_ms;
        case Interface::SA: return fp_sa;
    }
    return 0.0;
}

ScalingFactors edge_scaling_factors(const FieldSolution& sol, double x0) {
    const auto& cs = sol.cross_section;
    if (cs.kind != fields::CrossSectionKind::PadEdge) {
        throw ValidationError("edge scaling factors need a pad-edge cross-section solution");
    }
    if (x0 > cs.conductor_width_um || x0 > cs.spacing_um) {
        throw ValidationError("x0 outside the solved cross-section");
    }
    if (sol.cells_across_x(x0 / 2.0, x0) < 8) {
        throw SolverError("convergence band [x0/2, x0] resolved by fewer than 8 cells");
    }
    const double t = cs.layer_thickness_um();
    const double h = cs.film_thickness_um();

    const double band_ms = sol.e2_integral(x0 / 2.0, x0, -t, 0.0);
    const double band_ma = sol.e2_integral(x0 / 2.0, x0, h, h + t);
    if (!(band_ms > 0.0) || !(band_ma > 0.0)) {
        throw SolverError("convergence band carries no field energy");
    }

    ScalingFactors f;
    f.has_edge = true;
    f.x0_um = x0;
    f.f_ms = sol.e2_integral(0.0, x0, -t, 0.0) / band_ms;
    f.f_ma = (sol.e2_integral(0.0, x0, h, h + t) + sol.e2_integral(-t, 0.0, 0.0, h + t)) / band_ma;
    f.f_sa = sol.e2_integral(-x0, 0.0, -t, 0.0) / band_ms;
    return f;
}

ScalingFactors wiring_scaling_factors(const FieldSolution& sol, double x0p, double x0) {
    const auto& cs = sol.cross_section;
    if (cs.kind != fields::CrossSectionKind::Wiring) {
        throw ValidationError("wiring scaling factors need a wiring cross-section solution");
    }
    const double w = cs.conductor_width_um;
    if (w / 2.0 <= x0p) {
        throw ValidationError("convergence band overlaps the strip edge (w'/2 <= x0')");
    }
    const double t = cs.layer_thickness_um();
    const double h = cs.film_thickness_um();
    // strip of interest on the right half, centered at xc
    const double xc = cs.spacing_um / 2.0 + w / 2.0;
    if (sol.cells_across_x(xc - x0p, xc + x0p) < 8) {
        throw SolverError("convergence band [-x0', x0'] resolved by fewer than 8 cells");
    }

    const double band_ms = sol.e2_integral(xc - x0p, xc + x0p, -t, 0.0);
    const double band_ma = sol.e2_integral(xc - x0p, xc + x0p, h, h + t);
    if (!(band_ms > 0.0) || !(band_ma > 0.0)) {
        throw SolverError("wiring convergence band carries no field energy");
    }

    ScalingFactors f;
    f.has_wiring = true;
    f.x0p_um = x0p;
    f.x0_um = x0;
    f.fp_ms = sol.e2_integral(xc - w / 2.0, xc + w / 2.0, -t, 0.0) / band_ms;
    f.fp_ma = (sol.e2_integral(xc - w / 2.0, xc + w / 2.0, h, h + t) +
               sol.e2_integral(xc - w / 2.0 - t, xc - w / 2.0, 0.0, h + t) +
               sol.e2_integral(xc + w / 2.0, xc + w / 2.0 + t, 0.0, h + t)) /
              band_ma;
    f.fp_sa = (sol.e2_integral(xc - w / 2.0 - 2.0 * x0, xc - w / 2.0, -t, 0.0) +
               sol.e2_integral(xc + w / 2.0, xc + w / 2.0 + 2.0 * x0, -t, 0.0)) /
              band_ms;
    return f;
}

namespace {

double stage_weight(const SurfaceFieldMap& map, const geom::InterfaceSpec& iface) {
    // t * eps0*eps/2 / U_tot; multiplied by a V^2 integral it yields p
    iface.validate();
    return iface.thickness_nm * units::nm_to_m * units::vacuum_permittivity_F_per_m *
           iface.relative_permittivity / 2.0 / map.u_tot_J;
}

}  // namespace

std::map<MapElement, double> inner_participation(const SurfaceFieldMap& map,
                                                 const geom::InterfaceSpec& iface) {
    map.validate();
    const double k = stage_weight(map, iface);
    std::map<MapElement, double> out;
    for (const auto& s : map.series) {
        if (s.region != "inner" || s.interface_kind != iface.kind) continue;
        out[s.element] += k * s.integral_full();
    }
    return out;
}

std::map<MapElement, double> perimeter_participation(const SurfaceFieldMap& map,
                                                     const ScalingFactors& factors,
                                                     const geom::InterfaceSpec& iface) {
    map.validate();
    if (!factors.has_edge) {
        throw ValidationError("perimeter participation needs pad-edge scaling factors");
    }
    const double k = stage_weight(map, iface);
    const double x0 = factors.x0_um;
    std::map<MapElement, double> out;
    for (MapElement el : {MapElement::Pads, MapElement::Ground}) {
        // S5 ties the SA band to the metal-substrate convergence series
        const Interface band_iface = iface.kind == Interface::SA ? Interface::MS : iface.kind;
        const fields::FieldSeries* s = map.find(el, band_iface, "band");
        if (!s) continue;
        out[el] = factors.edge(iface.kind) * k * s->integral_x(x0 / 2.0, x0);
    }
    if (out.empty()) {
        throw ValidationError("field map lacks perimeter band series for pads/ground");
    }
    return out;
}

WiringParticipation wiring_participation(const SurfaceFieldMap& map,
                                         const ScalingFactors& leads_factors,
                                         const ScalingFactors& squid_factors,
                                         const geom::InterfaceSpec& iface) {
    map.validate();
    const double k = stage_weight(map, iface);
    const Interface band_iface = iface.kind == Interface::SA ? Interface::MS : iface.kind;

    auto segment = [&](MapElement el, const ScalingFactors& f) {
        if (!f.has_wiring) {
            throw ValidationError("wiring participation needs wiring scaling factors");
        }
        const auto& s = map.require(el, band_iface, "band");
        return f.wiring(iface.kind) * k * s.integral_x(-f.x0p_um, f.x0p_um);
    };
    WiringParticipation w;
    w.leads = segment(MapElement::Leads, leads_factors);
    w.squid = segment(MapElement::Squid, squid_factors);
    return w;
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Computed: return "computed";
        case Provenance::ReferenceTable: return "reference-table";
        case Provenance::ImportedField: return "imported-field";
    }
    return "?";
}

ParticipationBreakdown total_participation(const std::array<std::array<double, 3>, 3>& entries,
                                           Provenance provenance,
                                           const std::string& design_label) {
    ParticipationBreakdown b;
    b.p = entries;
    b.provenance = provenance;
    b.design_label = design_label;
    for (int e = 0; e < 3; ++e) {
        for (int i = 0; i < 3; ++i) {
            const double v = entries[e][i];
            if (!(v >= 0.0) || !(v < 1.0) || !std::isfinite(v)) {
                throw ValidationError("participation entry out of range [0, 1)");
            }
        }
        // fixed summation order: MA, then SA, then MS
        b.totals[e] = entries[e][0];
        b.totals[e] += entries[e][2];
        b.totals[e] += entries[e][1];
    }
    return b;
}

PipelineFactors compute_factors(const geom::QubitDesign& design, fields::Resolution res) {
    design.validate();
    PipelineFactors out;

    // factor cache: cross-section solves are pure functions of (kind, w, g, res)
    struct Key {
        int kind;
        double w, g;
        int res;
        bool operator<(const Key& o) const {
            return std::tie(kind, w, g, res) < std::tie(o.kind, o.w, o.g, o.res);
        }
    };
    static std::map<Key, ScalingFactors> cache;

    auto cached = [&](fields::CrossSectionKind kind, double w, double g) -> ScalingFactors {
        Key key{static_cast<int>(kind), w, g, static_cast<int>(res)};
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        fields::CrossSection cs;
        cs.kind = kind;
        cs.conductor_width_um = w;
        cs.spacing_um = g;
        cs.film_thickness_nm = design.film_thickness_nm;
        const FieldSolution sol = fields::solve_cross_section(cs, res);
        const ScalingFactors f = kind == fields::CrossSectionKind::PadEdge
                                     ? edge_scaling_factors(sol)
                                     : wiring_scaling_factors(sol);
        cache[key] = f;
        return f;
    };

    // the pad-edge profile is insensitive to the distant geometry; canonical
    // widths keep the solve shared across designs and sweep points
    out.pad_edge = cached(fields::CrossSectionKind::PadEdge, 40.0, 60.0);
    out.leads = cached(fields::CrossSectionKind::Wiring, design.lead_width_um,
                       design.lead_spacing_um);
    out.squid = cached(fields::CrossSectionKind::Wiring, design.squid_wire_width_um,
                       design.squid_loop_side_um - 2.0 * design.squid_wire_width_um);
    return out;
}

ParticipationBreakdown participation_from_map(const SurfaceFieldMap& map,
                                              const PipelineFactors& factors,
                                              const geom::InterfaceSet& stage,
                                              Provenance provenance,
                                              const std::string& design_label) {
    std::array<std::array<double, 3>, 3> entries{};
    for (const auto& iface : stage) {
        const int ii = static_cast<int>(iface.kind);

        const auto inner = inner_participation(map, iface);
        const auto perim = perimeter_participation(map, factors.pad_edge, iface);
        double pads = 0.0;
        for (MapElement el : {MapElement::Pads, MapElement::Ground}) {
            const auto iti = inner.find(el);
            if (iti != inner.end()) pads += iti->second;
            const auto itp = perim.find(el);
            if (itp != perim.end()) pads += itp->second;
        }
        entries[static_cast<int>(refdata::Element::Pads)][ii] = pads;

        const WiringParticipation w = wiring_participation(map, factors.leads, factors.squid, iface);
        entries[static_cast<int>(refdata::Element::Leads)][ii] = w.leads;
        entries[static_cast<int>(refdata::Element::Squid)][ii] = w.squid;
    }
    return total_participation(entries, provenance, design_label);
}

ParticipationBreakdown participation_reference(const std::string& design_label) {
    const auto& ds = refdata::reference_dataset();
    const int di = ds.design_index(design_label);
    std::array<std::array<double, 3>, 3> entries{};
    for (int e = 0; e < 3; ++e) {
        for (int i = 0; i < 3; ++i) {
            entries[e][i] = ds.interface_participation[di][e][i];
        }
    }
    return total_participation(entries, Provenance::ReferenceTable, design_label);
}

ParticipationBreakdown participation_computed(const geom::QubitDesign& design,
                                              fields::Resolution res) {
    const SurfaceFieldMap map = fields::coarse_surface_fields(design, 1.0);
    const PipelineFactors factors = compute_factors(design, res);
    return participation_from_map(map, factors, geom::participation_stage_interfaces(),
                                  Provenance::Computed, design.design_label);
}

}  // namespace qsurf::participation
