#pragma once

// Emitter-side figures of merit: Purcell factor, ZPL branching ratio,
// averaging over cavity-length noise, outcoupling and the choice of the
// outcoupling-mirror transmission.

#include <cstddef>

#include "hybcav/hybrid.hpp"
#include "hybcav/units.hpp"

namespace hybcav::fom {

struct EmitterParams {
  double beta0 = 0.03;
  double xi = 1.0;
  double zpl_frequency = 470.4e12;  // Hz
  double psb_linewidth = 30e12;     // Hz, not used in any calculation

  bool operator==(const EmitterParams&) const = default;
};

enum class VibrationModel {
  Gaussian,    // static length offsets ~ N(0, sigma^2)
  Sinusoidal,  // harmonic length oscillation with RMS sigma
};

const char* to_string(VibrationModel m);

enum class SensitivityModel {
  ClosedForm,  // two-extreme formula, refuses intermediate thicknesses
  Exact,       // derivative of the ideal resonance condition
};

const char* to_string(SensitivityModel m);

struct VibrationSpec {
  double sigma = 0.1e-9;  // RMS length deviation, m
  int quadrature_points = 41;
  VibrationModel model = VibrationModel::Gaussian;
  SensitivityModel sensitivity = SensitivityModel::ClosedForm;

  bool operator==(const VibrationSpec&) const = default;
  /// Throws InvalidArgument unless sigma >= 0 and the point count is odd and >= 21.
  void validate() const;
};

/// F_p = 3 xi / (pi g0 L).
double purcell_factor(double g0, double effective_losses, double xi = 1.0);

/// F_p = xi 3 c lambda0^2 / (4 pi^2 n_d^3 dnu V) with V = g0 (lambda0/n_d)^2 L_eff.
double purcell_from_linewidth(double linewidth, double g0, double energy_length, double lambda0,
                              double n_diamond, double xi = 1.0);

/// beta = beta0 F_p / (beta0 F_p + 1).
double branching_ratio(double purcell, double beta0);

/// Lorentzian detuning: F_p / (1 + (2 Delta / dnu)^2).
double detuned_purcell(double purcell_resonant, double detuning, double linewidth);

/// dnu = c L / (4 pi n_d L_eff).
double hybrid_linewidth(double effective_losses, double energy_length, double n_diamond);

/// Fourier-limited linewidth 1 / (2 pi tau).
double lifetime_limited_linewidth(double lifetime);

/// <beta> over cavity-length noise; detuning = sensitivity * dL.
double averaged_branching(double purcell_resonant, double linewidth, double sensitivity,
                          double beta0, const VibrationSpec& vib);

/// |d nu / d t_a| of the cavity under the chosen sensitivity model.
double sensitivity(const hybrid::HybridCavity& cavity, SensitivityModel model);

/// Vibration-averaged branching of a cavity with the given transverse
/// factor, effective losses and energy-distribution length. With the
/// closed-form sensitivity, UnclassifiedMode propagates for intermediate
/// thicknesses.
double vibration_averaged_emission(const hybrid::HybridCavity& cavity, double g0,
                                   double effective_losses, double energy_length,
                                   const EmitterParams& emitter, const VibrationSpec& vib);

/// eta_o = T_o / L. Throws InvalidBudget unless 0 < T_o <= L.
double outcoupling_efficiency(double outcoupling, double effective_losses);

/// Everything needed to score one cavity. Losses are round-trip fractions.
struct CavityDesign {
  hybrid::HybridCavity cavity;
  double air_mirror = 0.0;         // L_M,a: all channels of the curved mirror
  double diamond_parasitic = 0.0;  // plane-mirror scatter + absorption
  double outcoupling = 0.0;        // T_o, transmission of the plane mirror
  double sigma_da = 0.0;           // m
  double clipping = 0.0;           // raw clipping at the curved mirror
  double g0 = 0.0;
  double energy_length = 0.0;      // m
  double mode_matching = 1.0;      // free-space collection behind the outcoupler
};

struct FigureOfMerit {
  double effective_losses = 0.0;
  double unwanted_losses = 0.0;
  double purcell = 0.0;
  double branching = 0.0;           // on resonance
  double averaged_branching = 0.0;  // over vibrations
  double eta_out = 0.0;
  double detected_zpl_prob = 0.0;
  double finesse = 0.0;
  double linewidth = 0.0;           // Hz
  double sensitivity = 0.0;         // Hz/m
};

FigureOfMerit evaluate(const CavityDesign& design, const EmitterParams& emitter,
                       const VibrationSpec& vib);

struct OutcouplerOptimum {
  double outcoupling = 0.0;  // T_opt
  FigureOfMerit fom;
  bool at_lower_bound = false;
  bool at_upper_bound = false;
  int evaluations = 0;
};

/// Maximises the detected ZPL probability over T_o in [t_min, t_max]: a
/// log-spaced grid of `grid_points` brackets the maximum, golden-section
/// search on log T_o refines it. The bound flags report an optimum that
/// sits on the edge of the range.
OutcouplerOptimum optimize_outcoupler(CavityDesign design, const EmitterParams& emitter,
                                      const VibrationSpec& vib, double t_min, double t_max,
                                      std::size_t grid_points = 41);

}  // namespace hybcav::fom
