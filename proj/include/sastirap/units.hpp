#pragma once

#include <numbers>

// Unit conventions used throughout:
//   time              ns
//   Rabi couplings,
//   detunings         rad/ns, hbar = 1; quoted "f MHz" means omega/(2pi) = f MHz
//   decay rates       1/ns; quoted "Gamma = f MHz" means Gamma = f * 1e-3 / ns
//   phases            rad internally; config files take units of pi

namespace sastirap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double rabi_from_mhz(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
constexpr double mhz_from_rabi(double w) { return w / kTwoPi * 1e3; }

constexpr double rate_from_mhz(double f_mhz) { return f_mhz * 1e-3; }
constexpr double mhz_from_rate(double g) { return g * 1e3; }

constexpr double rad_from_pi_units(double x) { return x * kPi; }
constexpr double pi_units_from_rad(double x) { return x / kPi; }

}  // namespace sastirap
