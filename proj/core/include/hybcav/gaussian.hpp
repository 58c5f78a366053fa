#pragma once

// Transverse mode of the plane / diamond / air / concave cavity as two
// coupled Gaussian beams: one in the diamond with its waist on the plane
// mirror, one in the air gap whose (virtual) waist sits at dz_a above the
// plane mirror. At the planar diamond surface the widths match and the
// curvatures obey n_d R_a = R_d; at the dimple the air-beam curvature equals
// the mirror ROC.

#include "hybcav/units.hpp"

namespace hybcav::gaussian {

/// Gaussian-profile dimple z(r) = depth exp(-r^2 / (D_d/2)^2), whose
/// central curvature is ROC = (D_d/2)^2 / (2 depth).
struct DimpleGeometry {
  double roc = 0.0;             // m
  double depth = 0.0;           // z_d, m
  double diameter = 0.0;        // D_d, full width at 1/e, m
  double fiber_diameter = 0.0;  // D_f, m
  double tilt = 0.0;            // theta, rad

  static DimpleGeometry from_depth(double roc, double depth, double fiber_diameter = 0.0,
                                   double tilt = 0.0);
  static DimpleGeometry from_diameter(double roc, double diameter, double fiber_diameter = 0.0,
                                      double tilt = 0.0);

  /// Extra length from mirror tilt, D_f/2 sin(theta).
  double tilt_offset() const;
  /// Smallest reachable air gap: dimple depth plus tilt offset.
  double min_air_gap() const;
};

struct ModeSolution {
  double w0_d = 0.0;  // diamond beam waist (on the plane mirror)
  double w0_a = 0.0;  // air beam waist
  double z0_d = 0.0;  // Rayleigh length in diamond, pi n_d w0_d^2 / lambda0
  double z0_a = 0.0;  // Rayleigh length in air, pi w0_a^2 / lambda0
  double dz_a = 0.0;  // air-beam waist position above the plane mirror
  double w_m = 0.0;   // beam radius on the curved mirror
  double r_m = 0.0;   // wavefront radius of curvature at the curved mirror
  double g0 = 0.0;    // (pi w0_d^2 / 4) / (lambda0 / n_d)^2
  int iterations = 0; // Newton iterations (numeric solver only)
};

/// Effective length entering the waist, L' = t_a + t_d / n_d.
double reduced_length(double t_d, double t_a, double n_diamond);

double g0_factor(double w0_d, double lambda0, double n_diamond);

/// Closed-form solution: w0_a = w0_d, dz_a = t_d (1 - 1/n_d),
/// w0_d = sqrt(lambda0/pi) (L' (ROC - L'))^(1/4). Throws UnstableCavity
/// unless 0 < L' < ROC.
ModeSolution solve_modes_analytic(double t_d, double t_a, double roc, double lambda0,
                                  double n_diamond);

struct NewtonOptions {
  int max_iterations = 100;
  double tolerance = 1e-12;  // relative step / residual
};

/// Solves the three matching conditions for (w0_d, w0_a, dz_a) by damped
/// Newton iteration, starting from the plane-concave waist of a cavity of
/// length t_a + t_d. Throws UnstableCavity outside the stable range and
/// NoConvergence when the iteration stalls.
ModeSolution solve_modes_numeric(double t_d, double t_a, double roc, double lambda0,
                                 double n_diamond, const NewtonOptions& options = {});

/// exp(-2 (r / w)^2) for an aperture of radius r.
double clipping_loss(double beam_radius, double aperture_radius);

struct ClippingLosses {
  double raw = 0.0;
  double weighted = 0.0;  // raw * relative intensity in air
};

ClippingLosses clipping_losses(const ModeSolution& mode, const DimpleGeometry& dimple,
                               double relative_intensity);

/// Power overlap of the cavity beam at the dimple with the fiber's
/// fundamental mode (flat phase front, mode-field radius `fiber_mfr`) inside
/// the fiber of index `fiber_index`:
///   4 / ((w_m/w_f + w_f/w_m)^2 + (pi n_f w_m w_f / (lambda0 R_m))^2).
double fiber_mode_matching(const ModeSolution& mode, double fiber_mfr, double lambda0,
                           double fiber_index = 1.45);

}  // namespace hybcav::gaussian
