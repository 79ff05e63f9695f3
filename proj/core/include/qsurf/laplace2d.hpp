#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsurf/geometry.hpp"

namespace qsurf::fields {

enum class Resolution { Coarse, Medium, Fine };
Resolution resolution_from_name(const std::string& name);
const char* resolution_name(Resolution r);

enum class BoundaryCondition { FarFieldDirichlet, FarFieldNeumann };

enum class CrossSectionKind { PadEdge, Wiring, ParallelPlate };

/// 2D electrostatic cross-section.  PadEdge: a pad electrode edge facing a
/// counter-electrode across a gap.  Wiring: two parallel strips excited
/// antisymmetrically.  ParallelPlate: a facing-plate test geometry with a
/// uniform interior field.  Dielectric interface layers (MS under metal,
/// SA on exposed substrate, MA on metal top and side faces) are meshed as
/// thin material regions.
struct CrossSection {
    CrossSectionKind kind = CrossSectionKind::PadEdge;
    double conductor_width_um = 40.0;   // w (pad edge) or w' (wiring)
    double spacing_um = 60.0;           // g (gap) or g' (lead separation); plate spacing for ParallelPlate
    double film_thickness_nm = 120.0;   // h
    geom::InterfaceSet interfaces = geom::participation_stage_interfaces();
    double substrate_permittivity = geom::default_substrate_permittivity;
    BoundaryCondition boundary = BoundaryCondition::FarFieldDirichlet;
    double excitation_V = 1.0;
    double domain_factor = 10.0;        // domain extent over the largest lateral feature

    void validate() const;
    double layer_thickness_um() const { return interfaces[0].thickness_nm * 1e-3; }
    double film_thickness_um() const { return film_thickness_nm * 1e-3; }
};

enum class CellRegion : std::uint8_t { Air, Substrate, LayerMS, LayerMA, LayerSA, Conductor };

/// Potential and derived field on a structured nonuniform tensor grid.
struct FieldSolution {
    CrossSection cross_section;
    Resolution resolution = Resolution::Medium;
    std::vector<double> x_um;          // nx node coordinates
    std::vector<double> z_um;          // nz node coordinates
    std::vector<double> potential_V;   // nx*nz, index ix*nz+iz
    std::vector<double> e_mag_V_per_m; // (nx-1)*(nz-1) cell values
    std::vector<CellRegion> region;    // per cell
    double residual_rel = 0.0;         // relative infinity-norm of the discrete equations
    int iterations = 0;                // factorization reported as 1

    int nx() const { return static_cast<int>(x_um.size()); }
    int nz() const { return static_cast<int>(z_um.size()); }
    double potential_at(int ix, int iz) const { return potential_V[ix * nz() + iz]; }
    double cell_field(int ix, int iz) const { return e_mag_V_per_m[ix * (nz() - 1) + iz]; }
    CellRegion cell_region(int ix, int iz) const { return region[ix * (nz() - 1) + iz]; }

    /// Energy per unit out-of-plane depth (J/m) of every cell in a region.
    double region_energy_J_per_m(CellRegion r) const;
    double total_energy_J_per_m() const;

    /// Integral of |E|^2 over a grid-aligned rectangle (cell midpoint rule),
    /// in (V/m)^2 * um^2.  Bounds are clipped per cell overlap.
    double e2_integral(double xa_um, double xb_um, double za_um, double zb_um) const;

    /// Number of whole cells spanned by [xa, xb] along x.
    int cells_across_x(double xa_um, double xb_um) const;
};

/// Solves the cross-section.  Throws SolverError on non-convergence and
/// ValidationError on geometry problems.
FieldSolution solve_cross_section(const CrossSection& cs, Resolution res);

/// Bilinear interpolation on the cell-center lattice (clamped at borders).
/// Throws ValidationError for points outside the domain.
double field_probe(const FieldSolution& sol, double x_um, double z_nm);

}  // namespace qsurf::fields
