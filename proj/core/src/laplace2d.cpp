#include "qsurf/laplace2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "qsurf/errors.hpp"
#include "qsurf/units.hpp"

namespace qsurf::fields {

Resolution resolution_from_name(const std::string& name) {
    if (name == "coarse") return Resolution::Coarse;
    if (name == "medium") return Resolution::Medium;
    if (name == "fine") return Resolution::Fine;
    throw ParseError("unknown resolution '" + name + "' (expected coarse, medium or fine)");
}

const char* resolution_name(Resolution r) {
    switch (r) {
        case Resolution::Coarse: return "coarse";
        case Resolution::Medium: return "medium";
        case Resolution::Fine: return "fine";
    }
    return "?";
}

void CrossSection::validate() const {
    if (!(conductor_width_um > 0.0)) throw ValidationError("cross-section conductor width must be > 0");
    if (!(spacing_um > 0.0)) throw ValidationError("cross-section spacing must be > 0");
    if (!(film_thickness_nm > 0.0)) throw ValidationError("film thickness must be > 0");
    if (!(substrate_permittivity >= 1.0)) throw ValidationError("substrate permittivity must be >= 1");
    if (!(excitation_V != 0.0)) throw ValidationError("excitation must be nonzero");
    if (!(domain_factor >= 10.0)) throw ValidationError("domain extent must be at least 10x the largest feature");
    for (const auto& l : interfaces) l.validate();
    const double t = layer_thickness_um();
    if (t >= film_thickness_um()) throw ValidationError("interface layer thicker than the film");
    if (kind == CrossSectionKind::Wiring && !(conductor_width_um / 2.0 > 0.5)) {
        throw ValidationError("wiring width must exceed the convergence band (w'/2 > x0')");
    }
}

namespace {

struct AxisBreak {
    double pos;
    double size;  // target cell size at this position
};

// Fills [a, b] with cells graded geometrically from both end sizes, capped
// at max_size.  The result is rescaled so the cells tile exactly.
void fill_interval(double a, double b, double ha, double hb, double max_size,
                   double ratio, std::vector<double>& out) {
    const double len = b - a;
    if (len <= 0.0) return;
    ha = std::min(ha, max_size);
    hb = std::min(hb, max_size);
    if (len <= std::max(ha, hb) * 1.0001) {
        out.push_back(b);
        return;
    }
    // grow candidate sizes from both ends until they meet
    std::vector<double> left{ha}, right{hb};
    double sl = ha, sr = hb;
    while (sl + sr < len) {
        double nl = std::min(left.back() * ratio, max_size);
        double nr = std::min(right.back() * ratio, max_size);
        if (nl <= nr) {
            left.push_back(nl);
            sl += nl;
        } else {
            right.push_back(nr);
            sr += nr;
        }
        if (left.size() + right.size() > 100000) {
            throw SolverError("mesh interval fill failed");
        }
    }
    const double scale = len / (sl + sr);
    double pos = a;
    for (std::size_t i = 0; i + 1 < left.size(); ++i) {
        pos += left[i] * scale;
        out.push_back(pos);
    }
    // middle boundary between the two sequences
    pos += left.back() * scale;
    out.push_back(pos);
    double back_pos = b;
    std::vector<double> tail;
    for (std::size_t i = 0; i + 1 < right.size(); ++i) {
        back_pos -= right[i] * scale;
        tail.push_back(back_pos);
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) out.push_back(*it);
    out.push_back(b);
}

std::vector<double> build_axis(std::vector<AxisBreak> breaks, double max_size, double ratio) {
    std::sort(breaks.begin(), breaks.end(), [](const AxisBreak& l, const AxisBreak& r) { return l.pos < r.pos; });
    // merge coincident breaks, keeping the smaller size
    std::vector<AxisBreak> merged;
    for (const auto& b : breaks) {
        if (!merged.empty() && std::abs(b.pos - merged.back().pos) < 1e-12) {
            merged.back().size = std::min(merged.back().size, b.size);
        } else {
            merged.push_back(b);
        }
    }
    std::vector<double> nodes{merged.front().pos};
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        fill_interval(merged[i].pos, merged[i + 1].pos, merged[i].size, merged[i + 1].size,
                      max_size, ratio, nodes);
    }
    return nodes;
}

struct Rect {
    double x1, x2, z1, z2;
    bool contains(double x, double z, double tol) const {
        return x >= x1 - tol && x <= x2 + tol && z >= z1 - tol && z <= z2 + tol;
    }
};

struct Conductor {
    Rect rect;
    double potential;
};

struct Geometry {
    std::vector<double> x_nodes, z_nodes;
    std::vector<Conductor> conductors;
    // MA slivers and top layers, marked during region lookup
    std::vector<Rect> ma_rects;
    bool uniform_dielectric = false;
    bool neumann_sides = false;  // parallel-plate test uses natural side walls
    double sym_plane_x = 0.0;    // Wiring half model: Dirichlet 0 at x = sym_plane_x
    bool has_sym_plane = false;
};

CellRegion classify_cell(const CrossSection& cs, const Geometry& g, double x, double z) {
    const double tol = 1e-12;
    for (const auto& c : g.conductors) {
        if (c.rect.contains(x, z, tol)) return CellRegion::Conductor;
    }
    if (g.uniform_dielectric) return CellRegion::Air;
    const double t = cs.layer_thickness_um();
    for (const auto& r : g.ma_rects) {
        if (r.contains(x, z, tol)) return CellRegion::LayerMA;
    }
    if (z < -t) return CellRegion::Substrate;
    if (z < 0.0) {
        // under metal: metal-substrate layer; exposed: substrate-air layer
        for (const auto& c : g.conductors) {
            if (x >= c.rect.x1 - tol && x <= c.rect.x2 + tol) return CellRegion::LayerMS;
        }
        return CellRegion::LayerSA;
    }
    return CellRegion::Air;
}

double region_permittivity(const CrossSection& cs, CellRegion r) {
    switch (r) {
        case CellRegion::Substrate: return cs.substrate_permittivity;
        case CellRegion::LayerMS: return cs.interfaces[1].relative_permittivity;
        case CellRegion::LayerMA: return cs.interfaces[0].relative_permittivity;
        case CellRegion::LayerSA: return cs.interfaces[2].relative_permittivity;
        case CellRegion::Conductor: return 1.0;
        case CellRegion::Air: return 1.0;
    }
    return 1.0;
}

Geometry build_geometry(const CrossSection& cs, Resolution res) {
    const double mult = res == Resolution::Coarse ? 2.0 : (res == Resolution::Medium ? 1.0 : 0.5);
    const double t = cs.layer_thickness_um();
    const double h = cs.film_thickness_um();
    const double w = cs.conductor_width_um;
    const double s = cs.spacing_um;
    const double ratio = 1.3;
    constexpr double x0 = 1.0;    // pad-edge perimeter band
    constexpr double x0p = 0.5;   // wiring convergence band

    Geometry g;

    if (cs.kind == CrossSectionKind::ParallelPlate) {
        // horizontal plates spanning the width, natural side walls
        const double d = s;
        const double width = 3.0 * d;
        const double hp = std::max(h, d / 20.0);
        g.uniform_dielectric = true;
        g.neumann_sides = true;
        g.conductors.push_back({{0.0, width, -hp, 0.0}, 0.0});
        g.conductors.push_back({{0.0, width, d, d + hp}, cs.excitation_V});
        const double hz = mult * d / 24.0;
        g.x_nodes = build_axis({{0.0, mult * width / 24.0}, {width, mult * width / 24.0}},
                               mult * width / 16.0, ratio);
        g.z_nodes = build_axis({{-hp - d, hz}, {-hp, hz}, {0.0, hz}, {d, hz}, {d + hp, hz}, {d + hp + d, hz}},
                               hz, ratio);
        return g;
    }

    const double layer_cell = t / 4.0;           // >= 4 cells across each layer, all resolutions
    const double edge_cell = mult * t / 4.0;
    // the convergence bands must stay resolved even at coarse resolution
    const double band_cell = std::min(mult, 1.0) * x0 / 24.0;
    const double film_cell = mult * h / 4.0;

    if (cs.kind == CrossSectionKind::PadEdge) {
        // electrode of interest: [0, w]; counter-electrode: [-s-w, -s]
        const double feature = std::max({w, s, h});
        const double half_extent = cs.domain_factor * feature / 2.0;
        const double xmax = std::max(w + 0.3 * feature, half_extent);
        const double xmin = std::min(-s - w - 0.3 * feature, -half_extent);
        const double hmax = mult * (xmax - xmin) / 40.0;

        std::vector<AxisBreak> xb = {
            {xmin, hmax},
            {-s - w, mult * 1.0},
            {-s, edge_cell * 4.0},
            {-s + t, edge_cell * 4.0},
            {-x0, band_cell},
            {-x0 / 2.0, band_cell},
            {-t, layer_cell},
            {0.0, layer_cell},
            {x0 / 2.0, band_cell},
            {x0, band_cell},
            {w, mult * 1.0},
            {xmax, hmax},
        };
        g.x_nodes = build_axis(xb, hmax, ratio);

        const double zmax = std::max(0.4 * (xmax - xmin), 5.0 * feature / 2.0);
        std::vector<AxisBreak> zb = {
            {-zmax, hmax}, {-t, layer_cell}, {0.0, layer_cell},
            {h, layer_cell}, {h + t, layer_cell}, {zmax, hmax},
        };
        (void)film_cell;
        g.z_nodes = build_axis(zb, hmax, ratio);

        g.conductors.push_back({{0.0, w, 0.0, h}, cs.excitation_V});
        g.conductors.push_back({{-s - w, -s, 0.0, h}, 0.0});
        // top MA layers plus gap-side slivers
        g.ma_rects.push_back({0.0, w, h, h + t});
        g.ma_rects.push_back({-t, 0.0, 0.0, h + t});
        g.ma_rects.push_back({-s - w, -s, h, h + t});
        g.ma_rects.push_back({-s, -s + t, 0.0, h + t});
        return g;
    }

    // Wiring: strips at +/-(s/2 .. s/2+w) driven at +/-V/2.  The problem is
    // antisymmetric about x = 0, so only the right half is meshed with a
    // grounded symmetry plane; the caller mirrors the result.
    const double feature = std::max({w, s, h});
    const double xr1 = s / 2.0;
    const double xr2 = s / 2.0 + w;
    const double xc = (xr1 + xr2) / 2.0;
    const double xmax = std::max(xr2 + 2.0 * x0 + 0.3 * cs.domain_factor * feature,
                                 cs.domain_factor * feature / 2.0);
    const double hmax = mult * xmax / 25.0;

    std::vector<AxisBreak> xb = {
        {0.0, mult * std::min(s / 8.0, 0.5)},
        {xr1, layer_cell},
        {xr1 + t, layer_cell},
        {xc - x0p, band_cell / 2.0},
        {xc, band_cell / 2.0},
        {xc + x0p, band_cell / 2.0},
        {xr2 - t, layer_cell},
        {xr2, layer_cell},
        {xr2 + t, layer_cell},
        {xr2 + 2.0 * x0, band_cell},
        {xmax, hmax},
    };
    if (xr1 - 2.0 * x0 > 0.1) xb.push_back({xr1 - 2.0 * x0, band_cell});
    g.x_nodes = build_axis(xb, hmax, ratio);

    const double zmax = std::max(0.8 * xmax, 5.0 * feature / 2.0);
    std::vector<AxisBreak> zb = {
        {-zmax, hmax}, {-t, layer_cell}, {0.0, layer_cell},
        {h, layer_cell}, {h + t, layer_cell}, {zmax, hmax},
    };
    g.z_nodes = build_axis(zb, hmax, ratio);

    g.conductors.push_back({{xr1, xr2, 0.0, h}, cs.excitation_V / 2.0});
    g.ma_rects.push_back({xr1, xr2, h, h + t});
    g.ma_rects.push_back({xr1 - t, xr1, 0.0, h + t});
    g.ma_rects.push_back({xr2, xr2 + t, 0.0, h + t});
    g.has_sym_plane = true;
    g.sym_plane_x = 0.0;
    return g;
}

struct AssembledSolution {
    std::vector<double> potential;  // nx*nz
    double residual_rel = 0.0;
};

AssembledSolution solve_grid(const CrossSection& cs, const Geometry& g,
                             const std::vector<CellRegion>& cell_region) {
    const int nx = static_cast<int>(g.x_nodes.size());
    const int nz = static_cast<int>(g.z_nodes.size());
    const auto& X = g.x_nodes;
    const auto& Z = g.z_nodes;
    const double tol = 1e-12;

    std::vector<double> fixed(nx * nz, 0.0);
    std::vector<char> is_fixed(nx * nz, 0);

    for (int ix = 0; ix < nx; ++ix) {
        for (int iz = 0; iz < nz; ++iz) {
            const int n = ix * nz + iz;
            for (const auto& c : g.conductors) {
                if (c.rect.contains(X[ix], Z[iz], tol)) {
                    is_fixed[n] = 1;
                    fixed[n] = c.potential;
                }
            }
            const bool on_side = (ix == 0 || ix == nx - 1);
            const bool on_cap = (iz == 0 || iz == nz - 1);
            if (g.has_sym_plane && std::abs(X[ix] - g.sym_plane_x) < tol) {
                is_fixed[n] = 1;
                fixed[n] = 0.0;
            }
            if (cs.boundary == BoundaryCondition::FarFieldDirichlet) {
                if ((on_side && !g.neumann_sides) || on_cap) {
                    if (!is_fixed[n]) {
                        is_fixed[n] = 1;
                        fixed[n] = 0.0;
                    }
                }
            }
        }
    }

    std::vector<int> index(nx * nz, -1);
    int n_unknown = 0;
    for (int n = 0; n < nx * nz; ++n) {
        if (!is_fixed[n]) index[n] = n_unknown++;
    }

    auto cell_eps = [&](int cx, int cz) -> double {
        if (cx < 0 || cz < 0 || cx >= nx - 1 || cz >= nz - 1) return 0.0;
        const CellRegion r = cell_region[cx * (nz - 1) + cz];
        if (r == CellRegion::Conductor) return 0.0;  // no flux through conductor interiors
        return region_permittivity(cs, r);
    };

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(n_unknown) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);

    auto add_link = [&](int n, int jx, int jz, double coeff, double& diag) {
        if (coeff == 0.0) return;
        diag += coeff;
        const int m = jx * nz + jz;
        if (is_fixed[m]) {
            rhs[index[n]] += coeff * fixed[m];
        } else {
            trips.emplace_back(index[n], index[m], -coeff);
        }
    };

    for (int ix = 0; ix < nx; ++ix) {
        for (int iz = 0; iz < nz; ++iz) {
            const int n = ix * nz + iz;
            if (is_fixed[n]) continue;
            double diag = 0.0;
            const double dzm = iz > 0 ? Z[iz] - Z[iz - 1] : 0.0;
            const double dzp = iz < nz - 1 ? Z[iz + 1] - Z[iz] : 0.0;
            const double dxm = ix > 0 ? X[ix] - X[ix - 1] : 0.0;
            const double dxp = ix < nx - 1 ? X[ix + 1] - X[ix] : 0.0;
            if (ix < nx - 1) {
                const double c = (cell_eps(ix, iz - 1) * dzm / 2.0 + cell_eps(ix, iz) * dzp / 2.0) / dxp;
                add_link(n, ix + 1, iz, c, diag);
            }
            if (ix > 0) {
                const double c = (cell_eps(ix - 1, iz - 1) * dzm / 2.0 + cell_eps(ix - 1, iz) * dzp / 2.0) / dxm;
                add_link(n, ix - 1, iz, c, diag);
            }
            if (iz < nz - 1) {
                const double c = (cell_eps(ix - 1, iz) * dxm / 2.0 + cell_eps(ix, iz) * dxp / 2.0) / dzp;
                add_link(n, ix, iz + 1, c, diag);
            }
            if (iz > 0) {
                const double c = (cell_eps(ix - 1, iz - 1) * dxm / 2.0 + cell_eps(ix, iz - 1) * dxp / 2.0) / dzm;
                add_link(n, ix, iz - 1, c, diag);
            }
            if (diag == 0.0) diag = 1.0;  // isolated node (inside a pinched-off corner)
            trips.emplace_back(index[n], index[n], diag);
        }
    }

    Eigen::SparseMatrix<double> A(n_unknown, n_unknown);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
        throw SolverError("cross-section solve failed: factorization error");
    }
    Eigen::VectorXd sol = solver.solve(rhs);
    if (solver.info() != Eigen::Success) {
        throw SolverError("cross-section solve failed: back substitution error");
    }

    AssembledSolution out;
    out.potential.assign(nx * nz, 0.0);
    for (int n = 0; n < nx * nz; ++n) {
        out.potential[n] = is_fixed[n] ? fixed[n] : sol[index[n]];
    }

    // residual of the discrete equations, infinity norm relative to the
    // largest diagonal flux scale times the excitation
    const Eigen::VectorXd r = A * sol - rhs;
    double max_r = 0.0;
    for (int i = 0; i < n_unknown; ++i) max_r = std::max(max_r, std::abs(r[i]));
    double max_diag = 0.0;
    for (int i = 0; i < n_unknown; ++i) max_diag = std::max(max_diag, A.coeff(i, i));
    const double scale = max_diag * std::abs(cs.excitation_V);
    out.residual_rel = scale > 0.0 ? max_r / scale : max_r;
    if (!(out.residual_rel < 1e-8)) {
        throw SolverError("cross-section solve did not reach the 1e-8 residual target (residual " +
                          std::to_string(out.residual_rel) + ")");
    }
    return out;
}

void fill_fields(FieldSolution& sol) {
    const int nx = sol.nx();
    const int nz = sol.nz();
    sol.e_mag_V_per_m.assign(static_cast<std::size_t>(nx - 1) * (nz - 1), 0.0);
    for (int ix = 0; ix < nx - 1; ++ix) {
        const double dx = sol.x_um[ix + 1] - sol.x_um[ix];
        for (int iz = 0; iz < nz - 1; ++iz) {
            const double dz = sol.z_um[iz + 1] - sol.z_um[iz];
            const double p00 = sol.potential_at(ix, iz);
            const double p10 = sol.potential_at(ix + 1, iz);
            const double p01 = sol.potential_at(ix, iz + 1);
            const double p11 = sol.potential_at(ix + 1, iz + 1);
            const double ex = -((p10 - p00) + (p11 - p01)) / (2.0 * dx);
            const double ez = -((p01 - p00) + (p11 - p10)) / (2.0 * dz);
            // V/um -> V/m
            sol.e_mag_V_per_m[ix * (nz - 1) + iz] = std::hypot(ex, ez) * 1e6;
        }
    }
}

FieldSolution mirror_wiring(const FieldSolution& half) {
    // reconstruct the full antisymmetric solution from the x >= 0 half
    FieldSolution full;
    full.cross_section = half.cross_section;
    full.resolution = half.resolution;
    full.residual_rel = half.residual_rel;
    full.iterations = half.iterations;

    const int hx = half.nx();
    const int nz = half.nz();
    full.x_um.reserve(2 * hx - 1);
    for (int i = hx - 1; i >= 1; --i) full.x_um.push_back(-half.x_um[i]);
    for (int i = 0; i < hx; ++i) full.x_um.push_back(half.x_um[i]);
    full.z_um = half.z_um;

    const int nx = static_cast<int>(full.x_um.size());
    full.potential_V.assign(static_cast<std::size_t>(nx) * nz, 0.0);
    for (int ix = 0; ix < nx; ++ix) {
        const int src = std::abs(ix - (hx - 1));
        const double sign = ix < hx - 1 ? -1.0 : 1.0;
        for (int iz = 0; iz < nz; ++iz) {
            full.potential_V[ix * nz + iz] = sign * half.potential_at(src, iz);
        }
    }
    full.region.assign(static_cast<std::size_t>(nx - 1) * (nz - 1), CellRegion::Air);
    for (int ix = 0; ix < nx - 1; ++ix) {
        int src = ix >= hx - 1 ? ix - (hx - 1) : (hx - 2) - ix;
        for (int iz = 0; iz < nz - 1; ++iz) {
            full.region[ix * (nz - 1) + iz] = half.cell_region(src, iz);
        }
    }
    fill_fields(full);
    return full;
}

}  // namespace

FieldSolution solve_cross_section(const CrossSection& cs, Resolution res) {
    cs.validate();
    Geometry g = build_geometry(cs, res);

    FieldSolution sol;
    sol.cross_section = cs;
    sol.resolution = res;
    sol.x_um = g.x_nodes;
    sol.z_um = g.z_nodes;

    const int nx = sol.nx();
    const int nz = sol.nz();
    if (static_cast<std::size_t>(nx) * nz > 4000000) {
        throw SolverError("geometry too large for resolution: " + std::to_string(nx) + "x" +
                          std::to_string(nz) + " nodes");
    }
    sol.region.assign(static_cast<std::size_t>(nx - 1) * (nz - 1), CellRegion::Air);
    for (int ix = 0; ix < nx - 1; ++ix) {
        for (int iz = 0; iz < nz - 1; ++iz) {
            const double cx = 0.5 * (sol.x_um[ix] + sol.x_um[ix + 1]);
            const double cz = 0.5 * (sol.z_um[iz] + sol.z_um[iz + 1]);
            sol.region[ix * (nz - 1) + iz] = classify_cell(cs, g, cx, cz);
        }
    }

    AssembledSolution a = solve_grid(cs, g, sol.region);
    sol.potential_V = std::move(a.potential);
    sol.residual_rel = a.residual_rel;
    sol.iterations = 1;
    fill_fields(sol);

    if (cs.kind == CrossSectionKind::Wiring) {
        return mirror_wiring(sol);
    }
    return sol;
}

double FieldSolution::region_energy_J_per_m(CellRegion r) const {
    double acc = 0.0;
    const int cnx = nx() - 1;
    const int cnz = nz() - 1;
    for (int ix = 0; ix < cnx; ++ix) {
        const double dx = (x_um[ix + 1] - x_um[ix]) * units::um_to_m;
        for (int iz = 0; iz < cnz; ++iz) {
            if (region[ix * cnz + iz] != r) continue;
            const double dz = (z_um[iz + 1] - z_um[iz]) * units::um_to_m;
            const double e = e_mag_V_per_m[ix * cnz + iz];
            const double eps = units::vacuum_permittivity_F_per_m *
                               region_permittivity(cross_section, r);
            acc += 0.5 * eps * e * e * dx * dz;
        }
    }
    return acc;
}

double FieldSolution::total_energy_J_per_m() const {
    double acc = 0.0;
    for (CellRegion r : {CellRegion::Air, CellRegion::Substrate, CellRegion::LayerMS,
                         CellRegion::LayerMA, CellRegion::LayerSA}) {
        acc += region_energy_J_per_m(r);
    }
    return acc;
}

double FieldSolution::e2_integral(double xa, double xb, double za, double zb) const {
    if (xb < xa) std::swap(xa, xb);
    if (zb < za) std::swap(za, zb);
    double acc = 0.0;
    const int cnz = nz() - 1;
    for (int ix = 0; ix < nx() - 1; ++ix) {
        const double cxa = std::max(x_um[ix], xa);
        const double cxb = std::min(x_um[ix + 1], xb);
        if (cxb <= cxa) continue;
        for (int iz = 0; iz < cnz; ++iz) {
            const double cza = std::max(z_um[iz], za);
            const double czb = std::min(z_um[iz + 1], zb);
            if (czb <= cza) continue;
            const double e = e_mag_V_per_m[ix * cnz + iz];
            acc += e * e * (cxb - cxa) * (czb - cza);
        }
    }
    return acc;
}

int FieldSolution::cells_across_x(double xa, double xb) const {
    int count = 0;
    for (int ix = 0; ix < nx() - 1; ++ix) {
        if (x_um[ix] >= xa - 1e-12 && x_um[ix + 1] <= xb + 1e-12) ++count;
    }
    return count;
}

double field_probe(const FieldSolution& sol, double x_um, double z_nm) {
    const double z_um = z_nm * 1e-3;
    if (x_um < sol.x_um.front() || x_um > sol.x_um.back() ||
        z_um < sol.z_um.front() || z_um > sol.z_um.back()) {
        throw ValidationError("probe point outside the solved domain");
    }
    const int cnx = sol.nx() - 1;
    const int cnz = sol.nz() - 1;
    // cell-center coordinates
    auto center = [](const std::vector<double>& v, int i) { return 0.5 * (v[i] + v[i + 1]); };

    // locate bracketing cell centers along each axis, clamped at the borders
    auto bracket = [&](const std::vector<double>& v, int count, double p, int& lo, double& frac) {
        if (p <= center(v, 0)) {
            lo = 0;
            frac = 0.0;
            return;
        }
        if (p >= center(v, count - 1)) {
            lo = count - 2 >= 0 ? count - 2 : 0;
            frac = count >= 2 ? 1.0 : 0.0;
            return;
        }
        for (int i = 0; i < count - 1; ++i) {
            const double c0 = center(v, i);
            const double c1 = center(v, i + 1);
            if (p >= c0 && p <= c1) {
                lo = i;
                frac = (p - c0) / (c1 - c0);
                return;
            }
        }
        lo = count - 2;
        frac = 1.0;
    };

    int ix = 0, iz = 0;
    double fx = 0.0, fz = 0.0;
    bracket(sol.x_um, cnx, x_um, ix, fx);
    bracket(sol.z_um, cnz, z_um, iz, fz);
    const int ix1 = std::min(ix + 1, cnx - 1);
    const int iz1 = std::min(iz + 1, cnz - 1);
    const double v00 = sol.cell_field(ix, iz);
    const double v10 = sol.cell_field(ix1, iz);
    const double v01 = sol.cell_field(ix, iz1);
    const double v11 = sol.cell_field(ix1, iz1);
    return (1.0 - fx) * (1.0 - fz) * v00 + fx * (1.0 - fz) * v10 +
           (1.0 - fx) * fz * v01 + fx * fz * v11;
}

}  // namespace qsurf::fields
