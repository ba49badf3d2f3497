#pragma once

// Unit system used throughout: time in ps, energies in meV, angular
// frequencies and rates in rad/ps. User-facing energy-like rates are given
// as hbar*rate (ueV or meV) and converted at the configuration boundary.

namespace spsim {

inline constexpr double hbar_mev_ps = 0.6582119569;    // meV ps
inline constexpr double kB_mev_per_K = 0.08617333262;  // meV / K

inline constexpr double mev_to_rad_ps(double e_mev) { return e_mev / hbar_mev_ps; }
inline constexpr double uev_to_rad_ps(double e_uev) { return e_uev * 1e-3 / hbar_mev_ps; }
inline constexpr double rad_ps_to_mev(double w) { return w * hbar_mev_ps; }
inline constexpr double rad_ps_to_uev(double w) { return w * hbar_mev_ps * 1e3; }

}  // namespace spsim
