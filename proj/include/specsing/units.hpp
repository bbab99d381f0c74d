#pragma once

// Wire units are nm (wavelengths), um (thickness) and cm^-1 (gain/absorption).
// Internally every length is in nm and every inverse length in nm^-1.
namespace specsing::units {

inline constexpr double kNmPerUm = 1e3;
inline constexpr double kNmPerCm = 1e7;

constexpr double um_to_nm(double um) { return um * kNmPerUm; }
constexpr double nm_to_um(double nm) { return nm / kNmPerUm; }
constexpr double per_cm_to_per_nm(double per_cm) { return per_cm / kNmPerCm; }
constexpr double per_nm_to_per_cm(double per_nm) { return per_nm * kNmPerCm; }

}  // namespace specsing::units
