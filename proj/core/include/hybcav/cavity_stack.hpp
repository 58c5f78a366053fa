#pragma once

// Assembly of the full fiber-mirror / air / diamond / plane-mirror stack and
// the numeric quantities derived from it (linewidth, energy-distribution
// length, field ratio, effective round-trip losses).

#include <cstddef>
#include <optional>

#include "hybcav/tmm.hpp"
#include "hybcav/units.hpp"

namespace hybcav::tmm {

struct MirrorSpec {
  int pairs = 11;
  double n_high = kTa2O5Index;
  double n_low = kSiO2Index;
  Termination termination = Termination::High;
  double substrate_index = 1.0;

  bool operator==(const MirrorSpec&) const = default;
};

struct CavityLayout {
  double diamond_thickness = 0.0;  // m
  double air_gap = 0.0;            // m
  double lambda0 = kZplWavelength;
  double n_diamond = kDiamondIndex;
  MirrorSpec air_mirror;      // curved mirror, light enters through it
  MirrorSpec diamond_mirror;  // plane mirror under the diamond
  double sigma_da = 0.0;      // RMS roughness of the diamond (or coating) surface
  bool ar_coating = false;    // ideal coating: n = sqrt(n_d), quarter-wave
};

struct CavityStack {
  LayerStack stack;
  std::size_t air_layer = 0;      // finite-layer index of the air gap
  std::size_t diamond_layer = 0;  // finite-layer index of the diamond
  std::optional<std::size_t> coating_layer;
};

CavityStack build_cavity_stack(const CavityLayout& layout);

/// Power transmission of a mirror seen from `ambient_index` at lambda0.
double mirror_transmission(const MirrorSpec& mirror, double ambient_index, double lambda0);

struct CavityAnalysis {
  Resonance resonance;
  double energy_length = 0.0;       // m, referenced to the diamond field
  double relative_intensity = 0.0;  // E_max,a^2 / (n_d E_max,d^2)
  double effective_losses = 0.0;    // round-trip fraction inferred from the linewidth
  double finesse = 0.0;
};

/// Energy-distribution length of the stack at c / lambda0, referenced to
/// the diamond field (or the air field when the diamond is absent).
double energy_length(const CavityLayout& layout);

/// Numeric analysis around the design frequency c / lambda0. The scan
/// window is a quarter free spectral range, narrowed to a few dozen
/// bare-cavity linewidths when that is smaller.
CavityAnalysis analyze_cavity(const CavityLayout& layout, const ScanOptions& options = {});

/// Inverse of the hybrid linewidth relation: L = 4 pi n_d L_eff dnu / c.
double losses_from_linewidth(double fwhm, double energy_length, double n_diamond);

}  // namespace hybcav::tmm
