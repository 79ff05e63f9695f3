#include "qsurf/tls_bath.hpp"

#include <algorithm>
#include <cmath>

#include "qsurf/errors.hpp"
#include "qsurf/participation.hpp"
#include "qsurf/rng.hpp"
#include "qsurf/units.hpp"

namespace qsurf::tls {

using fields::FieldSeries;
using fields::MapElement;
using fields::SurfaceFieldMap;

double DipoleDistribution::second_moment_debye2() const {
    return rng::truncated_gaussian_moments(mean_debye, sigma_debye, min_debye).second_moment;
}

void TlsEnsembleConfig::validate() const {
    if (!(rho0_per_um3_GHz >= 0.0)) throw ValidationError("rho0 must be >= 0");
    if (!(band_MHz > 0.0)) throw ValidationError("band width must be > 0");
    if (!(band_center_GHz > 0.0)) throw ValidationError("band center must be > 0");
    if (!(dipole.mean_debye > 0.0) || !(dipole.sigma_debye > 0.0) || !(dipole.min_debye > 0.0)) {
        throw ValidationError("dipole distribution parameters must be > 0");
    }
    if (!(gamma_lo_per_us > 0.0) || !(gamma_hi_per_us >= gamma_lo_per_us)) {
        throw ValidationError("bad Gamma_1TLS sampling range");
    }
    for (const auto& i : interfaces) i.validate();
}

double EnsembleResult::count_per_GHz(MapElement el, double band_GHz) const {
    const auto it = counts.find(el);
    return it == counts.end() ? 0.0 : it->second / band_GHz;
}

namespace {

double iface_thickness_nm(const geom::InterfaceSet& set, geom::Interface i) {
    for (const auto& s : set) {
        if (s.kind == i) return s.thickness_nm;
    }
    throw ValidationError("interface set lacks a kind");
}

}  // namespace

EnsembleResult sample_ensemble(const geom::QubitDesign& design, const SurfaceFieldMap& map,
                               const TlsEnsembleConfig& cfg) {
    design.validate();
    map.validate();
    cfg.validate();

    // rescale the map field to the vacuum (zero-point) voltage of the mode:
    // E_vac = E_map * sqrt(hbar*omega / (4 U_tot))
    const double omega = units::angular_frequency(cfg.band_center_GHz);
    const double field_scale = std::sqrt(units::hbar_J_s * omega / (4.0 * map.u_tot_J));

    EnsembleResult out;
    const double band_GHz = cfg.band_MHz * 1e-3;

    // strong-coupling band regions only; inner regions are handled through
    // the background rate
    int stream_id = 0;
    for (const auto& series : map.series) {
        ++stream_id;
        if (series.region == "inner") continue;
        const double t_nm = iface_thickness_nm(cfg.interfaces, series.interface_kind);
        const double volume_um3 =
            series.x_extent_um() * series.y_extent_um() * (t_nm * 1e-3);
        const double mean = cfg.rho0_per_um3_GHz * volume_um3 * band_GHz;
        if (mean <= 0.0) continue;

        rng::Stream stream = rng::Stream::substream(cfg.seed, 0x7150000ULL + stream_id);
        const std::uint64_t n = stream.poisson(mean);
        for (std::uint64_t k = 0; k < n; ++k) {
            TlsDefect d;
            bool accepted = false;
            for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
                d.interface_kind = series.interface_kind;
                d.element = series.element;
                d.x_um = stream.uniform(series.x_um.front(), series.x_um.back());
                d.y_um = stream.uniform(series.y_um.front(), series.y_um.back());
                d.dipole_debye = stream.gaussian_truncated(cfg.dipole.mean_debye,
                                                           cfg.dipole.sigma_debye,
                                                           cfg.dipole.min_debye);
                d.delta_MHz = stream.uniform(-cfg.band_MHz / 2.0, cfg.band_MHz / 2.0);
                d.frequency_GHz = cfg.band_center_GHz + d.delta_MHz * 1e-3;
                d.gamma_tls_per_us = stream.log_uniform(cfg.gamma_lo_per_us, cfg.gamma_hi_per_us);

                const double e_map = std::sqrt(series.density_at(d.x_um, d.y_um));
                const double projection = cfg.random_orientation
                                              ? std::abs(stream.uniform(-1.0, 1.0))
                                              : 1.0;
                const double g_Hz = e_map * field_scale * d.dipole_debye * units::debye_C_m *
                                    projection / units::planck_J_s;
                d.g_MHz = g_Hz * 1e-6;

                // model validity: defect linewidth above the coupling
                const double g_ang = 2.0 * units::pi * g_Hz;
                accepted = d.gamma_tls_per_us * 1e6 > g_ang;
            }
            if (accepted) {
                out.defects.push_back(d);
                out.counts[series.element] += 1;
            } else {
                out.rejected += 1;
            }
        }
    }
    return out;
}

RelaxationSpectrum relaxation_spectrum(const std::vector<TlsDefect>& defects,
                                       double gamma_bg_per_s,
                                       const std::vector<double>& grid_GHz) {
    if (grid_GHz.empty()) throw ValidationError("empty frequency grid");
    if (!(gamma_bg_per_s >= 0.0)) throw ValidationError("background rate must be >= 0");
    for (std::size_t i = 0; i < defects.size(); ++i) {
        const double g_ang = 2.0 * units::pi * defects[i].g_MHz * 1e6;
        const double gamma = defects[i].gamma_tls_per_us * 1e6;
        if (!(gamma > g_ang)) {
            throw ValidationError("defect " + std::to_string(i) +
                                  " violates Gamma_1TLS > g (outside the model validity domain)");
        }
    }

    RelaxationSpectrum spec;
    spec.f_GHz = grid_GHz;
    spec.gamma_bg_per_us = gamma_bg_per_s * 1e-6;
    spec.gamma1_per_us.resize(grid_GHz.size());
    spec.q.resize(grid_GHz.size());

    for (std::size_t i = 0; i < grid_GHz.size(); ++i) {
        const double f = grid_GHz[i];
        double gamma = gamma_bg_per_s;  // 1/s
        for (const auto& d : defects) {
            const double g_ang = 2.0 * units::pi * d.g_MHz * 1e6;
            const double gt = d.gamma_tls_per_us * 1e6;
            const double det_ang = 2.0 * units::pi * (d.frequency_GHz - f) * 1e9;
            gamma += 2.0 * g_ang * g_ang * gt / (gt * gt + det_ang * det_ang);
        }
        spec.gamma1_per_us[i] = gamma * 1e-6;
        spec.q[i] = units::angular_frequency(f) / gamma;
    }
    return spec;
}

double background_rate(const std::array<double, 3>& p_inner,
                       const std::array<double, 3>& tan_delta, double f_GHz) {
    if (!(f_GHz > 0.0)) throw ValidationError("frequency must be > 0");
    double loss = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (!(p_inner[i] >= 0.0)) throw ValidationError("inner participation must be >= 0");
        if (!std::isfinite(tan_delta[i]) || tan_delta[i] < 0.0) {
            throw ValidationError(std::string("missing or negative loss tangent for ") +
                                  geom::interface_name(static_cast<geom::Interface>(i)));
        }
        loss += p_inner[i] * tan_delta[i];
    }
    return units::angular_frequency(f_GHz) * loss;
}

double density_to_tangent(double rho0_per_um3_GHz, const DipoleDistribution& dipole,
                          double eps_r) {
    if (!(rho0_per_um3_GHz > 0.0) || !(eps_r >= 1.0)) {
        throw ValidationError("density_to_tangent needs positive density and eps >= 1");
    }
    // per um^3 per GHz -> per m^3 per Hz -> per m^3 per J
    const double rho_m3_Hz = rho0_per_um3_GHz * 1e18 * 1e-9;
    const double rho_m3_J = rho_m3_Hz / units::planck_J_s;
    const double d2 = dipole.second_moment_debye2() * units::debye_C_m * units::debye_C_m;
    return units::pi * rho_m3_J * d2 /
           (3.0 * eps_r * units::vacuum_permittivity_F_per_m);
}

std::vector<DesignSimResult> simulate_designs(
    const std::vector<std::pair<geom::QubitDesign, SurfaceFieldMap>>& designs,
    const SimulateConfig& cfg) {
    if (designs.empty()) throw ValidationError("no designs to simulate");
    if (cfg.n_seeds < 1) throw ValidationError("need at least one seed");

    std::vector<double> grid;
    for (double f = cfg.grid_lo_GHz; f <= cfg.grid_hi_GHz + 1e-12;
         f += cfg.grid_step_MHz * 1e-3) {
        grid.push_back(f);
    }

    std::vector<DesignSimResult> out;
    std::uint64_t design_idx = 0;
    for (const auto& [design, map] : designs) {
        ++design_idx;
        DesignSimResult r;
        r.label = design.design_label;

        // weak-field background from the inner regions at the participation
        // stage thicknesses
        const geom::InterfaceSet part_stage = geom::participation_stage_interfaces();
        std::array<double, 3> p_inner{};
        for (const auto& spec : part_stage) {
            const auto per_el = participation::inner_participation(map, spec);
            double total = 0.0;
            for (const auto& [el, p] : per_el) total += p;
            p_inner[static_cast<int>(spec.kind)] = total;
        }
        const double f_mid = (cfg.grid_lo_GHz + cfg.grid_hi_GHz) / 2.0;
        r.gamma_bg_per_s = background_rate(p_inner, cfg.background_tangents, f_mid);

        std::vector<double> pooled_q;
        for (int s = 0; s < cfg.n_seeds; ++s) {
            TlsEnsembleConfig ecfg = cfg.ensemble;
            ecfg.seed = ecfg.seed ^ (0x9e3779b97f4a7c15ULL * (design_idx * 1000 + s + 1));
            const EnsembleResult ens = sample_ensemble(design, map, ecfg);
            r.rejected += ens.rejected;
            const RelaxationSpectrum spec = relaxation_spectrum(ens.defects, r.gamma_bg_per_s, grid);
            if (s == 0) {
                r.spectrum = spec;
                r.defect_count = static_cast<int>(ens.defects.size());
            }
            std::vector<double> qs = spec.q;
            std::sort(qs.begin(), qs.end());
            r.seed_medians.push_back(qs[qs.size() / 2]);
            pooled_q.insert(pooled_q.end(), spec.q.begin(), spec.q.end());
        }

        std::sort(pooled_q.begin(), pooled_q.end());
        const std::size_t n = pooled_q.size();
        const double median = n % 2 ? pooled_q[n / 2]
                                    : 0.5 * (pooled_q[n / 2 - 1] + pooled_q[n / 2]);
        double mean = 0.0;
        for (double v : pooled_q) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : pooled_q) var += (v - mean) * (v - mean);
        var /= (n - 1);

        r.stats.median_q = median;
        r.stats.std_q = std::sqrt(var);
        r.stats.count = static_cast<int>(n);
        r.stats.f_band_GHz = cfg.grid_hi_GHz - cfg.grid_lo_GHz;
        r.stats.design = design.design_label;
        r.stats.process = "simulated";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qsurf::tls
