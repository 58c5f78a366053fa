#include "hybcav/gaussian.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "hybcav/errors.hpp"

namespace hybcav::gaussian {
namespace {

void check_inputs(double t_d, double t_a, double roc, double lambda0, double n_diamond) {
  if (t_d < 0.0 || t_a < 0.0) throw InvalidArgument("layer thicknesses must be >= 0");
  if (!(roc > 0.0)) throw InvalidArgument("ROC must be > 0");
  if (!(lambda0 > 0.0)) throw InvalidArgument("wavelength must be > 0");
  if (!(n_diamond >= 1.0)) throw InvalidArgument("diamond index must be >= 1");
}

void check_stable(double l_red, double roc) {
  if (!(l_red > 0.0) || !(l_red < roc)) {
    throw UnstableCavity("cavity is not stable: L' = " + std::to_string(l_red * 1e6) +
                         " um, ROC = " + std::to_string(roc * 1e6) + " um");
  }
}

// Curvature 1/R of a Gaussian beam at distance z from its waist.
double curvature(double z, double z0) { return z / (z * z + z0 * z0); }

double width(double w0, double z, double z0) { return w0 * std::sqrt(1.0 + (z / z0) * (z / z0)); }

void finish(ModeSolution& s, double t_d, double t_a, double lambda0, double n) {
  s.z0_d = kPi * n * s.w0_d * s.w0_d / lambda0;
  s.z0_a = kPi * s.w0_a * s.w0_a / lambda0;
  const double zm = t_d + t_a - s.dz_a;
  s.w_m = width(s.w0_a, zm, s.z0_a);
  const double k = curvature(zm, s.z0_a);
  s.r_m = k == 0.0 ? HUGE_VAL : 1.0 / k;
  s.g0 = g0_factor(s.w0_d, lambda0, n);
}

}  // namespace

DimpleGeometry DimpleGeometry::from_depth(double roc, double depth, double fiber_diameter,
                                          double tilt) {
  if (!(roc > 0.0) || depth < 0.0 || fiber_diameter < 0.0) {
    throw InvalidArgument("dimple: ROC must be > 0, depth and fiber diameter >= 0");
  }
  return {roc, depth, 2.0 * std::sqrt(2.0 * roc * depth), fiber_diameter, tilt};
}

DimpleGeometry DimpleGeometry::from_diameter(double roc, double diameter, double fiber_diameter,
                                             double tilt) {
  if (!(roc > 0.0) || diameter < 0.0 || fiber_diameter < 0.0) {
    throw InvalidArgument("dimple: ROC must be > 0, diameter and fiber diameter >= 0");
  }
  const double half = diameter / 2.0;
  return {roc, half * half / (2.0 * roc), diameter, fiber_diameter, tilt};
}

double DimpleGeometry::tilt_offset() const { return fiber_diameter / 2.0 * std::sin(tilt); }

double DimpleGeometry::min_air_gap() const { return depth + tilt_offset(); }

double reduced_length(double t_d, double t_a, double n_diamond) { return t_a + t_d / n_diamond; }

double g0_factor(double w0_d, double lambda0, double n_diamond) {
  const double lam_d = lambda0 / n_diamond;
  return kPi * w0_d * w0_d / 4.0 / (lam_d * lam_d);
}

ModeSolution solve_modes_analytic(double t_d, double t_a, double roc, double lambda0,
                                  double n_diamond) {
  check_inputs(t_d, t_a, roc, lambda0, n_diamond);
  const double l_red = reduced_length(t_d, t_a, n_diamond);
  check_stable(l_red, roc);
  ModeSolution s;
  s.w0_d = std::sqrt(lambda0 / kPi) * std::pow(l_red * (roc - l_red), 0.25);
  s.w0_a = s.w0_d;
  s.dz_a = t_d * (1.0 - 1.0 / n_diamond);
  finish(s, t_d, t_a, lambda0, n_diamond);
  return s;
}

ModeSolution solve_modes_numeric(double t_d, double t_a, double roc, double lambda0,
                                 double n_diamond, const NewtonOptions& options) {
  check_inputs(t_d, t_a, roc, lambda0, n_diamond);
  check_stable(reduced_length(t_d, t_a, n_diamond), roc);

  const double n = n_diamond;
  const double lam = lambda0;
  // Unknowns: ln(w0_d / lambda), ln(w0_a / lambda), dz_a / lambda.
  using Vec = Eigen::Vector3d;
  auto residual = [&](const Vec& x) {
    const double w0d = lam * std::exp(x[0]);
    const double w0a = lam * std::exp(x[1]);
    const double dz = lam * x[2];
    const double z0d = kPi * n * w0d * w0d / lam;
    const double z0a = kPi * w0a * w0a / lam;
    const double za = t_d - dz;
    Vec f;
    f[0] = std::log(width(w0d, t_d, z0d)) - std::log(width(w0a, za, z0a));
    f[1] = roc * (curvature(za, z0a) - n * curvature(t_d, z0d));
    f[2] = roc * curvature(za + t_a, z0a) - 1.0;
    return f;
  };

  double l_bare = t_a + t_d;
  if (!(l_bare < roc)) l_bare = 0.5 * roc;
  const double w_guess = std::sqrt(lam / kPi) * std::pow(l_bare * (roc - l_bare), 0.25);
  Vec x(std::log(w_guess / lam), std::log(w_guess / lam), 0.0);
  Vec f = residual(x);
  double norm = f.norm();

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (norm < options.tolerance) break;
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
      Vec xp = x;
      Vec xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.col(j) = (residual(xp) - residual(xm)) / (2.0 * h);
    }
    const Vec step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) break;

    double damping = 1.0;
    Vec trial;
    Vec f_trial;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      trial = x + damping * step;
      f_trial = residual(trial);
      if (f_trial.allFinite() && f_trial.norm() < norm) {
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    if (!accepted) break;
    const double moved = (trial - x).cwiseAbs().maxCoeff();
    x = trial;
    f = f_trial;
    norm = f.norm();
    if (moved < options.tolerance) {
      ++it;
      break;
    }
  }
  if (!(norm < 1e-9)) {
    throw NoConvergence("mode solver did not converge for t_d = " + std::to_string(t_d * 1e6) +
                            " um, t_a = " + std::to_string(t_a * 1e6) + " um",
                        it, norm);
  }

  ModeSolution s;
  s.w0_d = lam * std::exp(x[0]);
  s.w0_a = lam * std::exp(x[1]);
  s.dz_a = lam * x[2];
  s.iterations = it;
  finish(s, t_d, t_a, lambda0, n_diamond);
  return s;
}

double clipping_loss(double beam_radius, double aperture_radius) {
  if (beam_radius < 0.0 || aperture_radius < 0.0) {
    throw InvalidArgument("clipping: radii must be >= 0");
  }
  if (beam_radius == 0.0) return 0.0;
  const double q = aperture_radius / beam_radius;
  return std::exp(-2.0 * q * q);
}

ClippingLosses clipping_losses(const ModeSolution& mode, const DimpleGeometry& dimple,
                               double relative_intensity) {
  ClippingLosses c;
  c.raw = clipping_loss(mode.w_m, dimple.diameter / 2.0);
  c.weighted = c.raw * relative_intensity;
  return c;
}

double fiber_mode_matching(const ModeSolution& mode, double fiber_mfr, double lambda0,
                           double fiber_index) {
  if (!(fiber_mfr > 0.0)) throw InvalidArgument("fiber mode-field radius must be > 0");
  if (!std::isfinite(fiber_mfr)) return 0.0;
  const double wm = mode.w_m;
  const double wf = fiber_mfr;
  const double size = wm / wf + wf / wm;
  const double phase =
      std::isfinite(mode.r_m) ? kPi * fiber_index * wm * wf / (lambda0 * mode.r_m) : 0.0;
  return 4.0 / (size * size + phase * phase);
}

}  // namespace hybcav::gaussian
