#pragma once

#include <numbers>

// SI is used everywhere inside the library. These factors convert the
// presentation units (kPa, cm, N·cm, RPM, ...) at the I/O boundary.
namespace vine::units {

inline constexpr double kPa = 1e3;           // Pa per kPa
inline constexpr double MPa = 1e6;           // Pa per MPa
inline constexpr double cm = 1e-2;           // m per cm
inline constexpr double um = 1e-6;           // m per micrometre
inline constexpr double cm2 = 1e-4;          // m^2 per cm^2
inline constexpr double N_cm = 1e-2;         // N·m per N·cm
inline constexpr double N_cm2 = 1e-4;        // N·m^2 per N·cm^2
inline constexpr double rpm = 2.0 * std::numbers::pi / 60.0;  // rad/s per RPM

}  // namespace vine::units
