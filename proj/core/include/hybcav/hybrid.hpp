#pragma once

// Closed-form description of the diamond-air cavity: resonance condition,
// field ratio between air and diamond, effective round-trip losses and the
// vibration sensitivity of the two extreme mode types.
//
// Mode naming follows the field at the diamond surface: the diamond-like
// mode has an antinode there (air intensity ratio 1/n_d, maximal
// surface scattering), the air-like mode a node (ratio n_d, no surface
// scattering).

#include "hybcav/units.hpp"

namespace hybcav::hybrid {

enum class ModeClass { DiamondLike, AirLike, Intermediate };

const char* to_string(ModeClass m);

struct HybridCavity {
  double diamond_thickness = 0.0;  // t_d, m
  double air_gap = 0.0;            // t_a, m
  double lambda0 = kZplWavelength;
  double n_diamond = kDiamondIndex;
  int mode_order = 0;              // m in the resonance condition, -1 when t_a was given directly
  bool ar_coated = false;          // ideal index-matched coating

  bool operator==(const HybridCavity&) const = default;
};

/// Phase 2 pi n_d t_d / lambda0 accumulated across the diamond.
double diamond_phase(const HybridCavity& c);

/// Air gap that puts the cavity on resonance at lambda0:
///   t_a = lambda0/(2 pi) atan(-tan(2 pi n_d t_d / lambda0) / n_d) + m lambda0 / 2
/// using the principal branch; at the tan poles the continuous limit
/// atan(-/+inf) = -/+ pi/2 applies. Throws NegativeGap when t_a <= 0.
double resonant_air_gap(double t_d, double lambda0, double n_diamond, int m);

/// Resonant gap for an ideally AR-coated diamond (optical path
/// n_d t_d + lambda0/4 + t_a equal to m lambda0 / 2).
double resonant_air_gap_ar(double t_d, double lambda0, double n_diamond, int m);

/// Smallest mode order whose resonant gap is at least `min_gap`.
int smallest_mode_order(double t_d, double lambda0, double n_diamond, double min_gap,
                        bool ar_coated = false);

/// Resonant cavity with the smallest air gap >= min_gap.
HybridCavity make_resonant(double t_d, double lambda0, double n_diamond, double min_gap,
                           bool ar_coated = false);

/// Diamond thickness of the requested class closest to `t_d`.
double nearest_thickness(double t_d, ModeClass target, double lambda0, double n_diamond);

/// E_max,a^2 / (n_d E_max,d^2) = sin^2(phi)/n_d + n_d cos^2(phi); 1 when AR coated.
double relative_intensity(const HybridCavity& c);

/// -cos(4 pi n_d t_d / lambda0): +1 for a diamond-like mode, -1 for an
/// air-like mode, continuous in between.
double mode_character(const HybridCavity& c);

/// Diamond-like / air-like when |mode_character| >= threshold.
ModeClass classify(const HybridCavity& c, double threshold = 0.9);

/// Air-side mirror losses weighted by the relative intensity plus the
/// diamond-side mirror losses.
double effective_mirror_losses(const HybridCavity& c, double air_mirror, double diamond_mirror);

/// Surface-scattering losses per effective round trip, second order in
/// 4 pi sigma / lambda0. Not defined in closed form for coated diamond.
double effective_scatter_losses(const HybridCavity& c, double sigma_da);

/// Loss channels of a cavity, all as round-trip fractions.
struct LossBudget {
  double mirror_air = 0.0;      // L_M,a: every loss channel of the curved mirror
  double mirror_diamond = 0.0;  // L_M,d: every loss channel of the plane mirror
  double scatter_da = 0.0;      // effective diamond-air scattering (already weighted)
  double clipping = 0.0;        // raw clipping at the curved mirror
  double extra_unwanted = 0.0;  // any further unweighted loss
  double effective_total = 0.0;
};

LossBudget make_loss_budget(const HybridCavity& c, double air_mirror, double diamond_mirror,
                            double sigma_da, double clipping = 0.0, double extra = 0.0);

/// Parasitic channels that do not leave through the outcoupling (plane)
/// mirror.
struct UnwantedLossInputs {
  double air_transmission = 0.0;
  double air_scatter = 0.0;
  double air_absorption = 0.0;
  double diamond_scatter = 0.0;
  double diamond_absorption = 0.0;
  double sigma_da = 0.0;
  double clipping = 0.0;

  double air_mirror_total() const { return air_transmission + air_scatter + air_absorption; }
  double diamond_parasitic() const { return diamond_scatter + diamond_absorption; }
};

/// Effective losses excluding the outcoupler transmission T_o.
double unwanted_losses(const HybridCavity& c, const UnwantedLossInputs& in);

/// True when a diamond-like mode has lower total losses than an air-like
/// one for the given surface roughness and air-side mirror losses.
bool tradeoff_prefers_diamond_like(double sigma_da, double air_mirror, double n_diamond,
                                   double lambda0);

/// Air-side mirror loss at which both mode types have equal total losses.
double tradeoff_boundary_air_loss(double sigma_da, double n_diamond, double lambda0);

/// |d nu / d t_a| in Hz per metre for an explicit mode type:
///   c / ((t_a + n_d t_d) lambda0) (1 +/- (n_d-1)/(n_d+1) 2 n_d t_d / (t_a + n_d t_d)),
/// '+' air-like, '-' diamond-like.
double vibration_sensitivity(double t_d, double t_a, double lambda0, double n_diamond,
                             ModeClass mode);

/// Exact |d nu / d t_a| of the ideal two-layer resonance condition at any
/// diamond thickness: nu / (t_a + n_d t_d / rho) with rho the relative
/// intensity. Reduces to nu / (t_a + t_d) for the air-like and
/// nu / (t_a + n_d^2 t_d) for the diamond-like mode. Coated diamond uses the
/// same bare-cavity form as the closed-form overload.
double vibration_sensitivity_exact(const HybridCavity& c);

/// Sensitivity of a classified cavity. Coated diamond uses the bare-cavity
/// form nu / L with L = t_a + n_d t_d + lambda0 / 2. Throws UnclassifiedMode
/// for intermediate thicknesses.
double vibration_sensitivity(const HybridCavity& c, double threshold = 0.9);

}  // namespace hybcav::hybrid
