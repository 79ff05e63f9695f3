#include "qsurf/field_map.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qsurf/csv.hpp"
#include "qsurf/errors.hpp"
#include "qsurf/units.hpp"

namespace qsurf::fields {

const char* map_element_name(MapElement e) {
    switch (e) {
        case MapElement::Pads: return "pads";
        case MapElement::Ground: return "ground";
        case MapElement::Leads: return "leads";
        case MapElement::Squid: return "squid";
    }
    return "?";
}

MapElement map_element_from_name(const std::string& name) {
    if (name == "pads") return MapElement::Pads;
    if (name == "ground") return MapElement::Ground;
    if (name == "leads") return MapElement::Leads;
    if (name == "squid" || name == "SQUID") return MapElement::Squid;
    throw ParseError("unknown field-map element '" + name + "'");
}

void FieldSeries::validate() const {
    if (x_um.size() < 2 || y_um.size() < 2) {
        throw ValidationError("field series needs at least a 2x2 grid");
    }
    if (e2_V2_per_m2.size() != x_um.size() * y_um.size()) {
        throw ValidationError("field series grid size mismatch");
    }
    for (std::size_t i = 1; i < x_um.size(); ++i) {
        if (!(x_um[i] > x_um[i - 1])) throw ValidationError("field series x grid not increasing");
    }
    for (std::size_t i = 1; i < y_um.size(); ++i) {
        if (!(y_um[i] > y_um[i - 1])) throw ValidationError("field series y grid not increasing");
    }
    for (double v : e2_V2_per_m2) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("field series density must be finite and >= 0");
        }
    }
}

namespace {

// trapezoid weights for a nonuniform axis, in meters
std::vector<double> trap_weights(const std::vector<double>& axis_um) {
    const std::size_t n = axis_um.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = (axis_um[i + 1] - axis_um[i]) * units::um_to_m;
        w[i] += d / 2.0;
        w[i + 1] += d / 2.0;
    }
    return w;
}

}  // namespace

double FieldSeries::integral_full() const {
    return integral_x(x_um.front(), x_um.back());
}

double FieldSeries::integral_x(double a, double b) const {
    if (b < a) std::swap(a, b);
    const auto wy = trap_weights(y_um);
    const std::size_t ny = y_um.size();

    // line density lambda(x) = integral over y, piecewise linear in x
    auto lambda_at_index = [&](std::size_t ix) {
        double acc = 0.0;
        for (std::size_t iy = 0; iy < ny; ++iy) acc += value_at(ix, iy) * wy[iy];
        return acc;  // V^2/m^2 * m = V^2/m
    };
    auto lambda = [&](double x) {
        if (x <= x_um.front()) return lambda_at_index(0);
        if (x >= x_um.back()) return lambda_at_index(x_um.size() - 1);
        const auto it = std::upper_bound(x_um.begin(), x_um.end(), x);
        const std::size_t hi = it - x_um.begin();
        const std::size_t lo = hi - 1;
        const double f = (x - x_um[lo]) / (x_um[hi] - x_um[lo]);
        return (1.0 - f) * lambda_at_index(lo) + f * lambda_at_index(hi);
    };

    // integrate piecewise-linear lambda over [a, b], flat beyond samples
    std::vector<double> knots{a, b};
    for (double x : x_um) {
        if (x > a && x < b) knots.push_back(x);
    }
    std::sort(knots.begin(), knots.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double dx = (knots[i + 1] - knots[i]) * units::um_to_m;
        acc += 0.5 * (lambda(knots[i]) + lambda(knots[i + 1])) * dx;
    }
    return acc;  // V^2
}

double FieldSeries::density_at(double x, double y) const {
    auto locate = [](const std::vector<double>& axis, double p, std::size_t& lo, double& f) {
        if (p <= axis.front()) {
            lo = 0;
            f = 0.0;
            return;
        }
        if (p >= axis.back()) {
            lo = axis.size() - 2;
            f = 1.0;
            return;
        }
        const auto it = std::upper_bound(axis.begin(), axis.end(), p);
        lo = (it - axis.begin()) - 1;
        f = (p - axis[lo]) / (axis[lo + 1] - axis[lo]);
    };
    std::size_t ix = 0, iy = 0;
    double fx = 0.0, fy = 0.0;
    locate(x_um, x, ix, fx);
    locate(y_um, y, iy, fy);
    return (1.0 - fx) * (1.0 - fy) * value_at(ix, iy) + fx * (1.0 - fy) * value_at(ix + 1, iy) +
           (1.0 - fx) * fy * value_at(ix, iy + 1) + fx * fy * value_at(ix + 1, iy + 1);
}

const FieldSeries* SurfaceFieldMap::find(MapElement e, geom::Interface i,
                                         const std::string& region) const {
    for (const auto& s : series) {
        if (s.element == e && s.interface_kind == i && s.region == region) return &s;
    }
    return nullptr;
}

const FieldSeries& SurfaceFieldMap::require(MapElement e, geom::Interface i,
                                            const std::string& region) const {
    const FieldSeries* s = find(e, i, region);
    if (!s) {
        throw ValidationError(std::string("field map lacks series ") + map_element_name(e) + "/" +
                              geom::interface_name(i) + "/" + region);
    }
    return *s;
}

bool SurfaceFieldMap::has_element(MapElement e) const {
    for (const auto& s : series) {
        if (s.element == e) return true;
    }
    return false;
}

void SurfaceFieldMap::validate() const {
    if (!(u_tot_J > 0.0)) throw ValidationError("field map U_tot must be > 0");
    if (!(excitation_V != 0.0)) throw ValidationError("field map excitation must be nonzero");
    if (series.empty()) throw ValidationError("field map has no series");
    for (const auto& s : series) s.validate();
}

SurfaceFieldMap import_field_map(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    if (t.rows.empty()) throw ParseError("empty field-map file: " + path);

    const std::vector<std::string> expected = {"element", "interface", "region",
                                               "x_um", "y_um", "e2_density_V2_per_m2"};
    if (t.rows.front() != expected) {
        throw ParseError("field-map header mismatch in " + path);
    }

    struct Key {
        std::string element, iface, region;
        bool operator<(const Key& o) const {
            return std::tie(element, iface, region) < std::tie(o.element, o.iface, o.region);
        }
    };
    struct Samples {
        std::vector<std::tuple<double, double, double>> pts;
    };
    std::map<Key, Samples> grouped;
    std::vector<Key> order;

    SurfaceFieldMap map;
    map.source = path;
    bool have_utot = false, have_v = false;

    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() == 2) {
            if (row[0] == "U_tot_J") {
                map.u_tot_J = csv::parse_double(row[1], "U_tot_J");
                have_utot = true;
                continue;
            }
            if (row[0] == "V_excitation") {
                map.excitation_V = csv::parse_double(row[1], "V_excitation");
                have_v = true;
                continue;
            }
        }
        if (row.size() != 6) {
            throw ParseError("field-map row " + std::to_string(r + 1) + " has " +
                             std::to_string(row.size()) + " columns, expected 6");
        }
        Key k{row[0], row[1], row[2]};
        if (grouped.find(k) == grouped.end()) order.push_back(k);
        const double x = csv::parse_double(row[3], "x_um");
        const double y = csv::parse_double(row[4], "y_um");
        const double v = csv::parse_double(row[5], "e2_density_V2_per_m2");
        if (v < 0.0) {
            throw ParseError("negative squared-field density at row " + std::to_string(r + 1));
        }
        grouped[k].pts.emplace_back(x, y, v);
    }
    if (!have_utot) throw ParseError("field map missing U_tot_J metadata row: " + path);
    if (!have_v) throw ParseError("field map missing V_excitation metadata row: " + path);

    for (const auto& k : order) {
        const auto& pts = grouped[k].pts;
        FieldSeries s;
        s.element = map_element_from_name(k.element);
        s.interface_kind = geom::interface_from_name(k.iface);
        s.region = k.region;
        std::vector<double> xs, ys;
        for (const auto& [x, y, v] : pts) {
            xs.push_back(x);
            ys.push_back(y);
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        s.x_um = xs;
        s.y_um = ys;
        s.e2_V2_per_m2.assign(xs.size() * ys.size(),
                              std::numeric_limits<double>::quiet_NaN());
        for (const auto& [x, y, v] : pts) {
            const auto ix = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
            const auto iy = std::lower_bound(ys.begin(), ys.end(), y) - ys.begin();
            s.e2_V2_per_m2[ix * ys.size() + iy] = v;
        }
        for (double v : s.e2_V2_per_m2) {
            if (std::isnan(v)) {
                throw ParseError("field-map series " + k.element + "/" + k.iface + "/" + k.region +
                                 " is not a complete tensor grid");
            }
        }
        s.validate();
        map.series.push_back(std::move(s));
    }
    map.validate();
    return map;
}

std::string field_map_to_csv(const SurfaceFieldMap& map,
                             const std::vector<std::string>& header_comments) {
    std::ostringstream o;
    for (const auto& c : header_comments) o << "# " << c << "\n";
    o << "element,interface,region,x_um,y_um,e2_density_V2_per_m2\n";
    for (const auto& s : map.series) {
        for (std::size_t ix = 0; ix < s.x_um.size(); ++ix) {
            for (std::size_t iy = 0; iy < s.y_um.size(); ++iy) {
                o << map_element_name(s.element) << ',' << geom::interface_name(s.interface_kind)
                  << ',' << s.region << ',' << csv::format_double(s.x_um[ix]) << ','
                  << csv::format_double(s.y_um[iy]) << ','
                  << csv::format_double(s.value_at(ix, iy)) << "\n";
            }
        }
    }
    o << "U_tot_J," << csv::format_double(map.u_tot_J) << "\n";
    o << "V_excitation," << csv::format_double(map.excitation_V) << "\n";
    return o.str();
}

void export_field_map(const SurfaceFieldMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments) {
    csv::write_file(path, field_map_to_csv(map, header_comments));
}

}  // namespace qsurf::fields
