#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsurf/geometry.hpp"

namespace qsurf::fields {

enum class MapElement { Pads, Ground, Leads, Squid };
const char* map_element_name(MapElement e);
MapElement map_element_from_name(const std::string& name);

/// One sampled squared-field profile: a tensor grid of |E|^2 area densities
/// over a surface patch.  The x axis is the profile direction (distance from
/// the conductor edge for perimeter bands, offset from the strip centerline
/// for wiring); y is the unrolled coordinate along the edge or strip, so the
/// y extent carries the perimeter or wiring length.
struct FieldSeries {
    MapElement element = MapElement::Pads;
    geom::Interface interface_kind = geom::Interface::MA;
    std::string region;  // "inner", "band", or "band2" for a second disjoint strip
    std::vector<double> x_um;
    std::vector<double> y_um;
    std::vector<double> e2_V2_per_m2;  // x-major, size x*y

    double value_at(int ix, int iy) const { return e2_V2_per_m2[ix * y_um.size() + iy]; }

    /// Trapezoid integral of e2 over the full patch, in V^2 (dx dy in meters).
    double integral_full() const;

    /// Integral over x in [a, b] (um) and the full y extent, V^2.  The
    /// profile is interpolated linearly in x and extended flat beyond the
    /// sampled range.
    double integral_x(double a_um, double b_um) const;

    /// Bilinear lookup with clamping, V^2/m^2.
    double density_at(double x_um_pt, double y_um_pt) const;

    double x_extent_um() const { return x_um.back() - x_um.front(); }
    double y_extent_um() const { return y_um.back() - y_um.front(); }

    void validate() const;
};

/// Squared-field line/area densities per conductor element and interface from
/// the coarse stage, with the total model energy and excitation they were
/// computed at.
struct SurfaceFieldMap {
    std::vector<FieldSeries> series;
    double u_tot_J = 0.0;
    double excitation_V = 0.0;
    std::string source;  // "builtin-coarse" or the imported path

    const FieldSeries* find(MapElement e, geom::Interface i, const std::string& region) const;
    const FieldSeries& require(MapElement e, geom::Interface i, const std::string& region) const;
    bool has_element(MapElement e) const;

    void validate() const;
};

/// Field-map CSV: header `element,interface,region,x_um,y_um,e2_density_V2_per_m2`,
/// one row per sample, then metadata rows `U_tot_J,<value>` and
/// `V_excitation,<value>`.  Lines starting with '#' are comments.
SurfaceFieldMap import_field_map(const std::string& path);

void export_field_map(const SurfaceFieldMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments = {});

std::string field_map_to_csv(const SurfaceFieldMap& map,
                             const std::vector<std::string>& header_comments = {});

}  // namespace qsurf::fields
