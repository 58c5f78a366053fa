#pragma once

// Internal unit system: SI lengths (m), frequencies (Hz), losses as plain
// fractions per round trip. Config files and reports use um / nm / ppm; the
// conversions live here and nowhere else.

namespace hybcav {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double kDiamondIndex = 2.41;
inline constexpr double kTa2O5Index = 2.14;
inline constexpr double kSiO2Index = 1.48;
inline constexpr double kZplWavelength = 637e-9;

namespace units {

constexpr double um(double v) { return v * 1e-6; }
constexpr double nm(double v) { return v * 1e-9; }
constexpr double ppm(double v) { return v * 1e-6; }
constexpr double thz(double v) { return v * 1e12; }
constexpr double ghz(double v) { return v * 1e9; }

constexpr double to_um(double meters) { return meters * 1e6; }
constexpr double to_nm(double meters) { return meters * 1e9; }
constexpr double to_ppm(double fraction) { return fraction * 1e6; }
constexpr double to_ghz(double hz) { return hz * 1e-9; }

/// Hz per metre -> GHz per Angstrom.
constexpr double to_ghz_per_angstrom(double hz_per_m) { return hz_per_m * 1e-19; }

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace units

constexpr double frequency_of(double wavelength) { return kSpeedOfLight / wavelength; }
constexpr double wavelength_of(double frequency) { return kSpeedOfLight / frequency; }

}  // namespace hybcav
