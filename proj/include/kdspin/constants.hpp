#pragma once

namespace kdspin::constants {

// CODATA 2018 exact/recommended values, SI.
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double planck_constant = 6.62607015e-34;      // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;      // J/T

/// GHz per meV: (e * 1e-3 / h) / 1e9
inline constexpr double mev_to_ghz =
    elementary_charge * 1.0e-3 / planck_constant / 1.0e9;

/// Bohr magneton over h in GHz per tesla.
inline constexpr double bohr_magneton_ghz_per_tesla =
    bohr_magneton / planck_constant / 1.0e9;

/// Free electron g factor as used for the vanadium reference data.
inline constexpr double default_g0 = 2.003;

inline constexpr double to_ghz(double energy_mev) { return energy_mev * mev_to_ghz; }
inline constexpr double mhz_to_ghz(double f_mhz) { return f_mhz * 1.0e-3; }

}  // namespace kdspin::constants
