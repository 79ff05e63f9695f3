#include "qsurf/planar_bem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "qsurf/errors.hpp"
#include "qsurf/units.hpp"

namespace qsurf::fields {

namespace {

constexpr double kPadBand_um = 1.0;   // perimeter band width x0
constexpr double kWireBand_um = 2.0;  // SA band width beside wiring, 2*x0

struct Rect2 {
    double x1, x2, y1, y2;
    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    bool contains(double x, double y, double tol = 0.0) const {
        return x >= x1 - tol && x <= x2 + tol && y >= y1 - tol && y <= y2 + tol;
    }
};

struct ConductorRect {
    Rect2 r;
    MapElement element;
    double potential;
    bool vertical_strip = false;   // narrow axis is x
    bool horizontal_strip = false; // narrow axis is y
};

struct Panel {
    Rect2 r;
    int conductor = 0;
    double area_um2() const { return r.width() * r.height(); }
    double cx() const { return 0.5 * (r.x1 + r.x2); }
    double cy() const { return 0.5 * (r.y1 + r.y2); }
};

struct Layout {
    std::vector<ConductorRect> rects;
    double excitation_V = 0.0;
    double eps_eff = 1.0;
    Rect2 pocket{0, 0, 0, 0};  // ground opening
};

// graded cut positions along [0, len]: cells of size `edge` at both ends
// growing geometrically to hmax
std::vector<double> graded_cuts(double len, double edge, double hmax, double ratio) {
    std::vector<double> cuts{0.0};
    edge = std::min(edge, len);
    std::vector<double> left{edge}, right{edge};
    double sl = edge, sr = edge;
    if (sl + sr >= len) {
        const int n = std::max(1, static_cast<int>(std::round(len / edge)));
        for (int i = 1; i <= n; ++i) cuts.push_back(len * i / n);
        return cuts;
    }
    while (sl + sr < len) {
        const double nl = std::min(left.back() * ratio, hmax);
        const double nr = std::min(right.back() * ratio, hmax);
        if (nl <= nr) {
            left.push_back(nl);
            sl += nl;
        } else {
            right.push_back(nr);
            sr += nr;
        }
    }
    const double scale = len / (sl + sr);
    double pos = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
        pos += left[i] * scale;
        cuts.push_back(pos);
    }
    std::vector<double> tail;
    double back = len;
    for (std::size_t i = 0; i + 1 < right.size(); ++i) {
        back -= right[i] * scale;
        tail.push_back(back);
    }
    cuts.pop_back();  // meeting point re-added from the right-hand sequence
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) cuts.push_back(*it);
    cuts.push_back(len);
    return cuts;
}

Layout build_layout(const geom::QubitDesign& d, double excitation_V, const CoarseOptions& opt) {
    Layout lay;
    lay.excitation_V = excitation_V;
    lay.eps_eff = (opt.substrate_permittivity + 1.0) / 2.0;

    const double W = d.pad_width_um;
    const double H = d.pad_height_um;
    const double G = d.gap_um;
    const double wp = d.lead_width_um;
    const double gp = d.lead_spacing_um;
    const double s = d.squid_loop_side_um;
    const double u = d.squid_wire_width_um;
    const double cl = opt.ground_clearance_um;
    const double mg = opt.ground_margin_um;
    const double vp = excitation_V / 2.0;

    lay.rects.push_back({{-W / 2, W / 2, G / 2, G / 2 + H}, MapElement::Pads, +vp});
    lay.rects.push_back({{-W / 2, W / 2, -G / 2 - H, -G / 2}, MapElement::Pads, -vp});

    lay.pocket = {-W / 2 - cl, W / 2 + cl, -G / 2 - H - cl, G / 2 + H + cl};
    const Rect2& p = lay.pocket;
    lay.rects.push_back({{p.x1 - mg, p.x2 + mg, p.y2, p.y2 + mg}, MapElement::Ground, 0.0});
    lay.rects.push_back({{p.x1 - mg, p.x2 + mg, p.y1 - mg, p.y1}, MapElement::Ground, 0.0});
    lay.rects.push_back({{p.x1 - mg, p.x1, p.y1, p.y2}, MapElement::Ground, 0.0});
    lay.rects.push_back({{p.x2, p.x2 + mg, p.y1, p.y2}, MapElement::Ground, 0.0});

    // two parallel vertical leads from the pads to the SQUID loop edges
    ConductorRect leadA{{-gp / 2 - wp, -gp / 2, s / 2, G / 2}, MapElement::Leads, +vp, true, false};
    ConductorRect leadB{{gp / 2, gp / 2 + wp, -G / 2, -s / 2}, MapElement::Leads, -vp, true, false};
    lay.rects.push_back(leadA);
    lay.rects.push_back(leadB);

    // routed length beyond the direct run becomes an equipotential stub
    // routed sideways next to the SQUID
    const double direct = (G - s) / 2.0;
    const double extra = d.lead_length_um - direct;
    if (extra > 0.5) {
        lay.rects.push_back({{-gp / 2 - wp - extra, -gp / 2 - wp, s / 2 + 2.0, s / 2 + 2.0 + wp},
                             MapElement::Leads, +vp, false, true});
        lay.rects.push_back({{gp / 2 + wp, gp / 2 + wp + extra, -s / 2 - 2.0 - wp, -s / 2 - 2.0},
                             MapElement::Leads, -vp, false, true});
    }

    // square SQUID loop, halves at the two lead potentials
    lay.rects.push_back({{-s / 2, s / 2, s / 2 - u, s / 2}, MapElement::Squid, +vp, false, true});
    lay.rects.push_back({{-s / 2, s / 2, -s / 2, -s / 2 + u}, MapElement::Squid, -vp, false, true});
    lay.rects.push_back({{-s / 2, -s / 2 + u, -s / 2 + u, s / 2 - u}, MapElement::Squid, +vp, true, false});
    lay.rects.push_back({{s / 2 - u, s / 2, -s / 2 + u, s / 2 - u}, MapElement::Squid, -vp, true, false});
    return lay;
}

std::vector<Panel> panelize(const Layout& lay, double scale) {
    std::vector<Panel> panels;
    for (std::size_t ri = 0; ri < lay.rects.size(); ++ri) {
        const auto& cr = lay.rects[ri];
        std::vector<double> cx, cy;
        if (cr.element == MapElement::Pads) {
            cx = graded_cuts(cr.r.width(), 0.5 * scale, 16.0 * scale, 1.5);
            cy = graded_cuts(cr.r.height(), 0.5 * scale, 16.0 * scale, 1.5);
        } else if (cr.element == MapElement::Ground) {
            const bool horizontal = cr.r.width() > cr.r.height();
            const double along_edge = 2.0 * scale, along_max = 30.0 * scale;
            const double across_edge = 0.5 * scale, across_max = 42.0 * scale;
            if (horizontal) {
                cx = graded_cuts(cr.r.width(), along_edge, along_max, 1.6);
                cy = graded_cuts(cr.r.height(), across_edge, across_max, 1.6);
            } else {
                cx = graded_cuts(cr.r.width(), across_edge, across_max, 1.6);
                cy = graded_cuts(cr.r.height(), along_edge, along_max, 1.6);
            }
        } else {
            const double narrow = cr.vertical_strip ? cr.r.width() : cr.r.height();
            const double across_edge = std::min(0.3 * scale, narrow / 5.0);
            const double across_max = narrow / 3.0;
            const double along_edge = 0.9 * scale, along_max = 4.5 * scale;
            if (cr.vertical_strip) {
                cx = graded_cuts(cr.r.width(), across_edge, across_max, 1.4);
                cy = graded_cuts(cr.r.height(), along_edge, along_max, 1.4);
            } else {
                cx = graded_cuts(cr.r.width(), along_edge, along_max, 1.4);
                cy = graded_cuts(cr.r.height(), across_edge, across_max, 1.4);
            }
        }
        for (std::size_t i = 0; i + 1 < cx.size(); ++i) {
            for (std::size_t j = 0; j + 1 < cy.size(); ++j) {
                Panel pnl;
                pnl.r = {cr.r.x1 + cx[i], cr.r.x1 + cx[i + 1], cr.r.y1 + cy[j], cr.r.y1 + cy[j + 1]};
                pnl.conductor = static_cast<int>(ri);
                panels.push_back(pnl);
            }
        }
    }
    return panels;
}

// Corner antiderivative of the coplanar 1/r integral over a rectangle.
inline double corner_term(double X, double Y) {
    const double rho = std::hypot(X, Y);
    if (rho < 1e-300) return 0.0;
    double acc = 0.0;
    if (std::abs(Y) > 1e-14 * rho) {
        double a = X + rho;
        if (a < 1e-14 * rho) a = (Y * Y) / (2.0 * std::abs(X));  // series limit for X < 0, |Y| small
        acc += Y * std::log(a);
    }
    if (std::abs(X) > 1e-14 * rho) {
        double a = Y + rho;
        if (a < 1e-14 * rho) a = (X * X) / (2.0 * std::abs(Y));
        acc += X * std::log(a);
    }
    return acc;
}

// integral of 1/|r - r'| over the rectangle for an in-plane point, in um
double rect_integral(const Rect2& r, double x, double y) {
    return corner_term(x - r.x1, y - r.y1) - corner_term(x - r.x2, y - r.y1) -
           corner_term(x - r.x1, y - r.y2) + corner_term(x - r.x2, y - r.y2);
}

// d/dX of corner_term; dimensionless
inline double corner_dx(double X, double Y) {
    const double rho = std::hypot(X, Y);
    if (rho < 1e-300) return 0.0;
    double a = Y + rho;
    if (a < 1e-14 * rho) a = (X * X) / (2.0 * std::abs(Y));
    return Y / rho + std::log(a) + X * X / (rho * a);
}

void rect_gradient(const Rect2& r, double x, double y, double& gx, double& gy) {
    gx = corner_dx(x - r.x1, y - r.y1) - corner_dx(x - r.x2, y - r.y1) -
         corner_dx(x - r.x1, y - r.y2) + corner_dx(x - r.x2, y - r.y2);
    gy = corner_dx(y - r.y1, x - r.x1) - corner_dx(y - r.y1, x - r.x2) -
         corner_dx(y - r.y2, x - r.x1) + corner_dx(y - r.y2, x - r.x2);
}

struct BemSolution {
    Layout layout;
    std::vector<Panel> panels;
    std::vector<double> sigma;  // C/m^2
    double u_tot_J = 0.0;

    // in-plane field magnitude at an exposed point, V/m
    double field_at(double x, double y) const {
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = 0; j < panels.size(); ++j) {
            double px = 0.0, py = 0.0;
            rect_gradient(panels[j].r, x, y, px, py);
            gx += sigma[j] * px;
            gy += sigma[j] * py;
        }
        const double k = 1.0 / (4.0 * units::pi * units::vacuum_permittivity_F_per_m * layout.eps_eff);
        return std::hypot(gx, gy) * k;
    }

    // field magnitude on either face of a charged sheet in the effective medium
    double surface_field(std::size_t i) const {
        return std::abs(sigma[i]) / (2.0 * units::vacuum_permittivity_F_per_m * layout.eps_eff);
    }

    bool blocked(double x, double y, double tol = 1e-9) const {
        for (const auto& c : layout.rects) {
            if (c.r.contains(x, y, tol)) return true;
        }
        return false;
    }

    double clearance(double x, double y) const {
        double best = 1e30;
        for (const auto& c : layout.rects) {
            const double dx = std::max({c.r.x1 - x, 0.0, x - c.r.x2});
            const double dy = std::max({c.r.y1 - y, 0.0, y - c.r.y2});
            best = std::min(best, std::hypot(dx, dy));
        }
        return best;
    }
};

BemSolution solve_bem(const geom::QubitDesign& design, double excitation_V,
                      const CoarseOptions& opt) {
    design.validate();
    if (excitation_V == 0.0) {
        throw ValidationError(
            "zero excitation is degenerate: every downstream quantity divides by U_tot");
    }
    BemSolution bem;
    bem.layout = build_layout(design, excitation_V, opt);
    bem.panels = panelize(bem.layout, opt.panel_scale);

    const int n = static_cast<int>(bem.panels.size());
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i) {
        const double xi = bem.panels[i].cx();
        const double yi = bem.panels[i].cy();
        for (int j = i; j < n; ++j) {
            M(i, j) = rect_integral(bem.panels[j].r, xi, yi);
        }
    }
    // collocation matrix is nearly symmetric; symmetrizing keeps the solve
    // on the Cholesky path
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (M(i, j) + rect_integral(bem.panels[i].r,
                                                            bem.panels[j].cx(), bem.panels[j].cy()));
            M(i, j) = v;
            M(j, i) = v;
        }
    }

    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) {
        phi[i] = bem.layout.rects[bem.panels[i].conductor].potential;
    }

    // phi = kpot * M * sigma with the um-integral converted to meters
    const double kpot = units::um_to_m /
                        (4.0 * units::pi * units::vacuum_permittivity_F_per_m * bem.layout.eps_eff);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success) {
        throw SolverError("coarse sheet solve failed (panel matrix not factorizable)");
    }
    const Eigen::VectorXd q = ldlt.solve(phi / kpot);

    bem.sigma.resize(n);
    double u = 0.0;
    for (int i = 0; i < n; ++i) {
        bem.sigma[i] = q[i];
        const double area_m2 = bem.panels[i].area_um2() * units::um_to_m * units::um_to_m;
        u += 0.5 * q[i] * area_m2 * phi[i];
    }
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw SolverError("coarse sheet solve produced non-positive energy");
    }
    bem.u_tot_J = u;
    return bem;
}

// ---- surface-map extraction ------------------------------------------------

struct BinAccum {
    double weight = 0.0;
    double e2_sum = 0.0;
};

double inside_distance(const Rect2& r, double x, double y) {
    return std::min(std::min(x - r.x1, r.x2 - x), std::min(y - r.y1, r.y2 - y));
}

double outside_distance(const Rect2& r, double x, double y) {
    const double dx = std::max({r.x1 - x, 0.0, x - r.x2});
    const double dy = std::max({r.y1 - y, 0.0, y - r.y2});
    return std::hypot(dx, dy);
}

FieldSeries make_band_series(MapElement el, geom::Interface iface, const std::string& region,
                             const std::vector<double>& xs, const std::vector<double>& vals,
                             double y_len) {
    FieldSeries s;
    s.element = el;
    s.interface_kind = iface;
    s.region = region;
    s.x_um = xs;
    s.y_um = {0.0, y_len};
    s.e2_V2_per_m2.resize(xs.size() * 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s.e2_V2_per_m2[i * 2] = vals[i];
        s.e2_V2_per_m2[i * 2 + 1] = vals[i];
    }
    return s;
}

FieldSeries make_inner_series(MapElement el, geom::Interface iface, double e2_area_integral_um2,
                              double area_um2, double y_len) {
    FieldSeries s;
    s.element = el;
    s.interface_kind = iface;
    s.region = "inner";
    const double wx = std::max(area_um2 / std::max(y_len, 1.0), 1e-6);
    s.x_um = {0.0, wx};
    s.y_um = {0.0, std::max(y_len, 1.0)};
    const double density = area_um2 > 0.0 ? e2_area_integral_um2 / area_um2 : 0.0;
    s.e2_V2_per_m2 = {density, density, density, density};
    return s;
}

void extract_metal_series(const BemSolution& bem, MapElement el, double eps_sub,
                          double eps_layer, SurfaceFieldMap& map) {
    // Bin panels by distance to the element outline.  Bins inside the first
    // micrometer form the perimeter band profile, the rest pools into the
    // inner series.  Stored densities are the in-layer fields: the sheet
    // field partitions into air- and substrate-side flux, so
    // E_MA = E0/eps_layer and E_MS = E0*eps_sub/eps_layer.
    std::map<double, BinAccum> bins;
    double inner_e2 = 0.0, inner_area = 0.0;
    double outline_len = 0.0;

    if (el == MapElement::Ground) {
        outline_len = 2.0 * (bem.layout.pocket.width() + bem.layout.pocket.height());
    } else {
        for (const auto& c : bem.layout.rects) {
            if (c.element == el) outline_len += 2.0 * (c.r.width() + c.r.height());
        }
    }

    for (std::size_t i = 0; i < bem.panels.size(); ++i) {
        const auto& p = bem.panels[i];
        const auto& c = bem.layout.rects[p.conductor];
        if (c.element != el) continue;
        const double dist = el == MapElement::Ground
                                ? outside_distance(bem.layout.pocket, p.cx(), p.cy())
                                : inside_distance(c.r, p.cx(), p.cy());
        const double along = std::max(p.r.width(), p.r.height());
        const double e2 = bem.surface_field(i) * bem.surface_field(i);
        if (dist < kPadBand_um) {
            auto& b = bins[std::round(dist * 1e6) / 1e6];
            b.weight += along;
            b.e2_sum += e2 * along;
        } else {
            inner_e2 += e2 * p.area_um2();
            inner_area += p.area_um2();
        }
    }
    if (bins.empty() || inner_area <= 0.0) {
        throw SolverError(std::string("coarse stage produced no band/inner panels for ") +
                          map_element_name(el));
    }

    std::vector<double> xs, vals;
    for (const auto& [d, b] : bins) {
        xs.push_back(d);
        vals.push_back(b.e2_sum / b.weight);
    }
    if (xs.front() > 1e-9) {
        xs.insert(xs.begin(), 0.0);
        vals.insert(vals.begin(), vals.front());
    }
    if (xs.back() < kPadBand_um) {
        xs.push_back(kPadBand_um);
        vals.push_back(vals.back());
    }

    const double ma_scale = 1.0 / (eps_layer * eps_layer);
    const double ms_scale = (eps_sub / eps_layer) * (eps_sub / eps_layer);
    std::vector<double> vals_ma(vals.size()), vals_ms(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        vals_ma[i] = vals[i] * ma_scale;
        vals_ms[i] = vals[i] * ms_scale;
    }
    map.series.push_back(make_band_series(el, geom::Interface::MA, "band", xs, vals_ma, outline_len));
    map.series.push_back(make_band_series(el, geom::Interface::MS, "band", xs, vals_ms, outline_len));
    map.series.push_back(make_inner_series(el, geom::Interface::MA, inner_e2 * ma_scale,
                                           inner_area, outline_len));
    map.series.push_back(make_inner_series(el, geom::Interface::MS, inner_e2 * ms_scale,
                                           inner_area, outline_len));
}

void extract_strip_series(const BemSolution& bem, MapElement el, double eps_sub,
                          double eps_layer, SurfaceFieldMap& map) {
    // column profile across the strip width, length-weighted along the element
    std::map<double, BinAccum> cols;
    double total_len = 0.0;
    double width = 0.0;
    for (std::size_t i = 0; i < bem.panels.size(); ++i) {
        const auto& p = bem.panels[i];
        const auto& c = bem.layout.rects[p.conductor];
        if (c.element != el) continue;
        const bool v = c.vertical_strip;
        width = v ? c.r.width() : c.r.height();
        const double center = v ? 0.5 * (c.r.x1 + c.r.x2) : 0.5 * (c.r.y1 + c.r.y2);
        const double off = (v ? p.cx() : p.cy()) - center;
        const double along = v ? p.r.height() : p.r.width();
        auto& b = cols[std::round(off / width * 1e6) / 1e6];
        b.weight += along;
        b.e2_sum += bem.surface_field(i) * bem.surface_field(i) * along;
    }
    for (const auto& c : bem.layout.rects) {
        if (c.element != el) continue;
        total_len += c.vertical_strip ? c.r.height() : c.r.width();
    }
    std::vector<double> xs, vals;
    for (const auto& [off, b] : cols) {
        xs.push_back(off * width);
        vals.push_back(b.e2_sum / b.weight);
    }
    if (xs.front() > -width / 2.0 + 1e-9) {
        xs.insert(xs.begin(), -width / 2.0);
        vals.insert(vals.begin(), vals.front());
    }
    if (xs.back() < width / 2.0 - 1e-9) {
        xs.push_back(width / 2.0);
        vals.push_back(vals.back());
    }
    const double ma_scale = 1.0 / (eps_layer * eps_layer);
    const double ms_scale = (eps_sub / eps_layer) * (eps_sub / eps_layer);
    std::vector<double> vals_ma(vals.size()), vals_ms(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        vals_ma[i] = vals[i] * ma_scale;
        vals_ms[i] = vals[i] * ms_scale;
    }
    map.series.push_back(make_band_series(el, geom::Interface::MA, "band", xs, vals_ma, total_len));
    map.series.push_back(make_band_series(el, geom::Interface::MS, "band", xs, vals_ms, total_len));
}

void extract_sa_series(const BemSolution& bem, SurfaceFieldMap& map) {
    struct EdgePoint {
        double x, y, nx, ny;
    };
    // tiny skew avoids sample points landing exactly on panel cut lines
    constexpr double kJitter = 1.7e-4;

    auto rect_edge_points = [](const Rect2& r, double step, bool outward) {
        std::vector<EdgePoint> pts;
        const double sgn = outward ? 1.0 : -1.0;
        auto emit = [&](double ax, double ay, double bx, double by, double nx, double ny) {
            const double len = std::hypot(bx - ax, by - ay);
            const int n = std::max(2, static_cast<int>(len / step));
            for (int i = 0; i < n; ++i) {
                const double f = (i + 0.5) / n;
                pts.push_back({ax + f * (bx - ax) + kJitter, ay + f * (by - ay) + kJitter,
                               sgn * nx, sgn * ny});
            }
        };
        emit(r.x1, r.y1, r.x2, r.y1, 0.0, -1.0);
        emit(r.x2, r.y1, r.x2, r.y2, 1.0, 0.0);
        emit(r.x2, r.y2, r.x1, r.y2, 0.0, 1.0);
        emit(r.x1, r.y2, r.x1, r.y1, -1.0, 0.0);
        return pts;
    };

    auto profile_for = [&](const std::vector<EdgePoint>& pts, const std::vector<double>& offsets) {
        std::vector<double> vals(offsets.size(), 0.0);
        std::vector<int> counts(offsets.size(), 0);
        for (const auto& ep : pts) {
            for (std::size_t k = 0; k < offsets.size(); ++k) {
                const double px = ep.x + ep.nx * offsets[k];
                const double py = ep.y + ep.ny * offsets[k];
                if (bem.blocked(px, py, 1e-6)) continue;
                const double e = bem.field_at(px, py);
                vals[k] += e * e;
                counts[k] += 1;
            }
        }
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            if (counts[k] > 0) vals[k] /= counts[k];
        }
        return vals;
    };

    const std::vector<double> pad_offsets = {0.08, 0.18, 0.32, 0.5, 0.7, 0.9};
    const std::vector<double> wire_offsets = {0.08, 0.2, 0.4, 0.65, 0.95, 1.3, 1.65, 1.95};

    for (MapElement el : {MapElement::Pads, MapElement::Ground}) {
        std::vector<EdgePoint> pts;
        double outline_len = 0.0;
        if (el == MapElement::Pads) {
            for (const auto& c : bem.layout.rects) {
                if (c.element != el) continue;
                auto p = rect_edge_points(c.r, 12.0, true);
                pts.insert(pts.end(), p.begin(), p.end());
                outline_len += 2.0 * (c.r.width() + c.r.height());
            }
        } else {
            pts = rect_edge_points(bem.layout.pocket, 12.0, false);
            outline_len = 2.0 * (bem.layout.pocket.width() + bem.layout.pocket.height());
        }
        const auto prof = profile_for(pts, pad_offsets);
        // SA band coordinate runs from -x0 at the far side to 0 at the edge
        std::vector<double> xs{-kPadBand_um};
        std::vector<double> vals{prof.back()};
        for (std::size_t k = pad_offsets.size(); k-- > 0;) {
            xs.push_back(-pad_offsets[k]);
            vals.push_back(prof[k]);
        }
        xs.push_back(0.0);
        vals.push_back(vals.back());
        map.series.push_back(make_band_series(el, geom::Interface::SA, "band", xs, vals, outline_len));
    }

    // far exposed substrate pooled into one inner SA series under pads
    {
        const Rect2& pk = bem.layout.pocket;
        const int ngrid = 24;
        double e2_int = 0.0, area = 0.0;
        for (int i = 0; i < ngrid; ++i) {
            for (int j = 0; j < ngrid; ++j) {
                const double x = pk.x1 + (i + 0.5) / ngrid * pk.width() + kJitter;
                const double y = pk.y1 + (j + 0.5) / ngrid * pk.height() + kJitter;
                if (bem.blocked(x, y, 1e-6) || bem.clearance(x, y) < kPadBand_um) continue;
                const double cell = pk.width() * pk.height() / (ngrid * ngrid);
                const double e = bem.field_at(x, y);
                e2_int += e * e * cell;
                area += cell;
            }
        }
        map.series.push_back(
            make_inner_series(MapElement::Pads, geom::Interface::SA, e2_int, area,
                              2.0 * (pk.width() + pk.height())));
    }

    // wiring SA: outward band ("band") and the band toward the neighbouring
    // conductor ("band2"), both sides carrying the same averaged profile
    for (MapElement el : {MapElement::Leads, MapElement::Squid}) {
        std::vector<EdgePoint> pts;
        double total_len = 0.0;
        double width = 1.0;
        for (const auto& c : bem.layout.rects) {
            if (c.element != el) continue;
            auto p = rect_edge_points(c.r, 4.0, true);
            pts.insert(pts.end(), p.begin(), p.end());
            total_len += c.vertical_strip ? c.r.height() : c.r.width();
            width = c.vertical_strip ? c.r.width() : c.r.height();
        }
        const auto prof = profile_for(pts, wire_offsets);
        std::vector<double> xs{width / 2.0};
        std::vector<double> vals{prof.front()};
        for (std::size_t k = 0; k < wire_offsets.size(); ++k) {
            xs.push_back(width / 2.0 + wire_offsets[k]);
            vals.push_back(prof[k]);
        }
        xs.push_back(width / 2.0 + kWireBand_um);
        vals.push_back(prof.back());
        map.series.push_back(make_band_series(el, geom::Interface::SA, "band", xs, vals, total_len));

        std::vector<double> xs2, vals2;
        for (std::size_t i = xs.size(); i-- > 0;) {
            xs2.push_back(-xs[i]);
            vals2.push_back(vals[i]);
        }
        map.series.push_back(make_band_series(el, geom::Interface::SA, "band2", xs2, vals2, total_len));
    }
}

}  // namespace

SurfaceFieldMap coarse_surface_fields(const geom::QubitDesign& design, double excitation_V,
                                      const CoarseOptions& opt) {
    const BemSolution bem = solve_bem(design, excitation_V, opt);

    SurfaceFieldMap map;
    map.source = "builtin-coarse";
    map.excitation_V = excitation_V;
    map.u_tot_J = bem.u_tot_J;
    constexpr double eps_layer = 10.0;  // interface layer permittivity of the thin-film recipe
    const double eps_sub = opt.substrate_permittivity;
    extract_metal_series(bem, MapElement::Pads, eps_sub, eps_layer, map);
    extract_metal_series(bem, MapElement::Ground, eps_sub, eps_layer, map);
    extract_strip_series(bem, MapElement::Leads, eps_sub, eps_layer, map);
    extract_strip_series(bem, MapElement::Squid, eps_sub, eps_layer, map);
    extract_sa_series(bem, map);
    map.validate();
    return map;
}

CapacitanceResult capacitance(const geom::QubitDesign& design, const CoarseOptions& opt) {
    const BemSolution bem = solve_bem(design, 1.0, opt);
    CapacitanceResult r;
    r.capacitance_F = 2.0 * bem.u_tot_J;
    r.charging_energy_MHz = units::charging_energy_MHz(r.capacitance_F);
    r.panels = static_cast<int>(bem.panels.size());
    return r;
}

}  // namespace qsurf::fields
