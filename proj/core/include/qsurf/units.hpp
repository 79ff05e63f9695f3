#pragma once

// Physical constants (CODATA 2018 exact values where defined) and the unit
// conversions used throughout: lateral dimensions in micrometers, layer
// thicknesses in nanometers, fields in V/m, energies in joules.

namespace qsurf::units {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double vacuum_permittivity_F_per_m = 8.8541878128e-12;

// 1 Debye in C*m.
inline constexpr double debye_C_m = 3.33564e-30;

inline constexpr double um_to_m = 1e-6;
inline constexpr double nm_to_m = 1e-9;

// Charging energy e^2/(2C) expressed as a linear frequency in MHz.
inline double charging_energy_MHz(double capacitance_F) {
    const double e = elementary_charge_C;
    return e * e / (2.0 * capacitance_F) / planck_J_s / 1e6;
}

// Inverse of charging_energy_MHz.
inline double capacitance_from_charging_energy(double ec_MHz) {
    const double e = elementary_charge_C;
    return e * e / (2.0 * ec_MHz * 1e6 * planck_J_s);
}

inline double angular_frequency(double f_GHz) {
    return 2.0 * pi * f_GHz * 1e9;
}

}  // namespace qsurf::units
