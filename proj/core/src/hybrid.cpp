#include "hybcav/hybrid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hybcav/errors.hpp"

namespace hybcav::hybrid {
namespace {

void check_cavity(const HybridCavity& c) {
  if (!(c.lambda0 > 0.0)) throw InvalidArgument("wavelength must be > 0");
  if (!(c.n_diamond >= 1.0)) throw InvalidArgument("diamond index must be >= 1");
  if (c.diamond_thickness < 0.0) throw InvalidArgument("diamond thickness must be >= 0");
}

// Wraps an angle into (-pi/2, pi/2].
double wrap_half_pi(double x) {
  double y = std::remainder(x, kPi);  // [-pi/2, pi/2]
  if (y <= -kPi / 2.0) y += kPi;
  return y;
}

// Roughness coefficient of the scattering term, (4 pi sigma / lambda0)^2.
double roughness_factor(double sigma, double lambda0) {
  return std::pow(4.0 * kPi * sigma / lambda0, 2);
}

}  // namespace

const char* to_string(ModeClass m) {
  switch (m) {
    case ModeClass::DiamondLike:
      return "diamond-like";
    case ModeClass::AirLike:
      return "air-like";
    case ModeClass::Intermediate:
      return "intermediate";
  }
  return "?";
}

double diamond_phase(const HybridCavity& c) {
  return 2.0 * kPi * c.n_diamond * c.diamond_thickness / c.lambda0;
}

double resonant_air_gap(double t_d, double lambda0, double n_diamond, int m) {
  if (t_d < 0.0 || !(lambda0 > 0.0) || n_diamond < 1.0) {
    throw InvalidArgument("resonant_air_gap: invalid cavity parameters");
  }
  const double phi = wrap_half_pi(2.0 * kPi * n_diamond * t_d / lambda0);
  double branch;
  if (std::abs(std::abs(phi) - kPi / 2.0) < 1e-12) {
    branch = -kPi / 2.0;  // atan(-inf)
  } else {
    branch = std::atan(-std::tan(phi) / n_diamond);
  }
  const double t_a = lambda0 / (2.0 * kPi) * branch + m * lambda0 / 2.0;
  if (!(t_a > 0.0)) {
    throw NegativeGap("resonant air gap " + std::to_string(t_a) + " m is not positive for m = " +
                      std::to_string(m));
  }
  return t_a;
}

double resonant_air_gap_ar(double t_d, double lambda0, double n_diamond, int m) {
  if (t_d < 0.0 || !(lambda0 > 0.0) || n_diamond < 1.0) {
    throw InvalidArgument("resonant_air_gap_ar: invalid cavity parameters");
  }
  const double half = lambda0 / 2.0;
  // Reduce the fixed optical path to [0, lambda0/2) so that m counts gaps.
  const double fixed = std::fmod(n_diamond * t_d + lambda0 / 4.0, half);
  const double t_a = m * half - fixed;
  if (!(t_a > 0.0)) {
    throw NegativeGap("resonant air gap " + std::to_string(t_a) + " m is not positive for m = " +
                      std::to_string(m));
  }
  return t_a;
}

int smallest_mode_order(double t_d, double lambda0, double n_diamond, double min_gap,
                        bool ar_coated) {
  for (int m = 0; m < 1'000'000; ++m) {
    try {
      const double t_a = ar_coated ? resonant_air_gap_ar(t_d, lambda0, n_diamond, m)
                                   : resonant_air_gap(t_d, lambda0, n_diamond, m);
      if (t_a >= min_gap) return m;
    } catch (const NegativeGap&) {
    }
  }
  throw InvalidArgument("smallest_mode_order: minimum gap is unreachable");
}

HybridCavity make_resonant(double t_d, double lambda0, double n_diamond, double min_gap,
                           bool ar_coated) {
  HybridCavity c;
  c.diamond_thickness = t_d;
  c.lambda0 = lambda0;
  c.n_diamond = n_diamond;
  c.ar_coated = ar_coated;
  c.mode_order = smallest_mode_order(t_d, lambda0, n_diamond, min_gap, ar_coated);
  c.air_gap = ar_coated ? resonant_air_gap_ar(t_d, lambda0, n_diamond, c.mode_order)
                        : resonant_air_gap(t_d, lambda0, n_diamond, c.mode_order);
  return c;
}

double nearest_thickness(double t_d, ModeClass target, double lambda0, double n_diamond) {
  const double quarter = lambda0 / (4.0 * n_diamond);
  double k;
  switch (target) {
    case ModeClass::AirLike:  // even multiples of the quarter-wave thickness
      k = 2.0 * std::round(t_d / (2.0 * quarter));
      break;
    case ModeClass::DiamondLike:  // odd multiples
      k = 2.0 * std::round((t_d / quarter - 1.0) / 2.0) + 1.0;
      if (k < 1.0) k = 1.0;
      break;
    default:
      throw InvalidArgument("nearest_thickness: target must be diamond-like or air-like");
  }
  return k * quarter;
}

double relative_intensity(const HybridCavity& c) {
  check_cavity(c);
  if (c.ar_coated) return 1.0;
  const double phi = diamond_phase(c);
  const double s = std::sin(phi);
  const double co = std::cos(phi);
  return s * s / c.n_diamond + c.n_diamond * co * co;
}

double mode_character(const HybridCavity& c) {
  check_cavity(c);
  return -std::cos(2.0 * diamond_phase(c));
}

ModeClass classify(const HybridCavity& c, double threshold) {
  const double mc = mode_character(c);
  if (mc >= threshold) return ModeClass::DiamondLike;
  if (mc <= -threshold) return ModeClass::AirLike;
  return ModeClass::Intermediate;
}

double effective_mirror_losses(const HybridCavity& c, double air_mirror, double diamond_mirror) {
  if (air_mirror < 0.0 || diamond_mirror < 0.0) {
    throw InvalidArgument("mirror losses must be >= 0");
  }
  return relative_intensity(c) * air_mirror + diamond_mirror;
}

double effective_scatter_losses(const HybridCavity& c, double sigma_da) {
  check_cavity(c);
  if (sigma_da < 0.0) throw InvalidArgument("roughness must be >= 0");
  if (sigma_da == 0.0) return 0.0;
  if (c.ar_coated) {
    throw InvalidArgument("closed-form scattering losses are not defined for a coated diamond");
  }
  const double n = c.n_diamond;
  const double s = std::sin(diamond_phase(c));
  return s * s * (1.0 + n) / n * (1.0 - n) * (1.0 - n) * roughness_factor(sigma_da, c.lambda0);
}

LossBudget make_loss_budget(const HybridCavity& c, double air_mirror, double diamond_mirror,
                            double sigma_da, double clipping, double extra) {
  if (clipping < 0.0 || extra < 0.0) throw InvalidArgument("loss channels must be >= 0");
  LossBudget b;
  b.mirror_air = air_mirror;
  b.mirror_diamond = diamond_mirror;
  b.scatter_da = effective_scatter_losses(c, sigma_da);
  b.clipping = clipping;
  b.extra_unwanted = extra;
  b.effective_total = effective_mirror_losses(c, air_mirror + clipping, diamond_mirror) +
                      b.scatter_da + extra;
  return b;
}

double unwanted_losses(const HybridCavity& c, const UnwantedLossInputs& in) {
  return make_loss_budget(c, in.air_mirror_total(), in.diamond_parasitic(), in.sigma_da,
                          in.clipping)
      .effective_total;
}

bool tradeoff_prefers_diamond_like(double sigma_da, double air_mirror, double n_diamond,
                                   double lambda0) {
  if (sigma_da < 0.0 || air_mirror < 0.0) throw InvalidArgument("inputs must be >= 0");
  const double n = n_diamond;
  const double scatter = roughness_factor(sigma_da, lambda0) * (n + 1.0) * (n - 1.0) * (n - 1.0) / n;
  return scatter < (n - 1.0 / n) * air_mirror;
}

double tradeoff_boundary_air_loss(double sigma_da, double n_diamond, double lambda0) {
  const double n = n_diamond;
  return roughness_factor(sigma_da, lambda0) * (n + 1.0) * (n - 1.0) * (n - 1.0) / n /
         (n - 1.0 / n);
}

double vibration_sensitivity(double t_d, double t_a, double lambda0, double n_diamond,
                             ModeClass mode) {
  if (mode == ModeClass::Intermediate) {
    throw UnclassifiedMode("vibration sensitivity is only defined for diamond-like or air-like modes");
  }
  const double optical = t_a + n_diamond * t_d;
  if (!(optical > 0.0)) throw InvalidArgument("cavity length must be > 0");
  const double sign = mode == ModeClass::AirLike ? 1.0 : -1.0;
  const double contrast = (n_diamond - 1.0) / (n_diamond + 1.0);
  return kSpeedOfLight / (optical * lambda0) *
         (1.0 + sign * contrast * 2.0 * n_diamond * t_d / optical);
}

double vibration_sensitivity(const HybridCavity& c, double threshold) {
  check_cavity(c);
  if (c.ar_coated) {
    const double length = c.air_gap + c.n_diamond * c.diamond_thickness + c.lambda0 / 2.0;
    return frequency_of(c.lambda0) / length;
  }
  if (c.diamond_thickness == 0.0) {
    return frequency_of(c.lambda0) / c.air_gap;
  }
  const ModeClass mode = classify(c, threshold);
  if (mode == ModeClass::Intermediate) {
    throw UnclassifiedMode("mode character " + std::to_string(mode_character(c)) +
                           " is neither diamond-like nor air-like");
  }
  return vibration_sensitivity(c.diamond_thickness, c.air_gap, c.lambda0, c.n_diamond, mode);
}

double vibration_sensitivity_exact(const HybridCavity& c) {
  check_cavity(c);
  if (c.ar_coated) {
    const double length = c.air_gap + c.n_diamond * c.diamond_thickness + c.lambda0 / 2.0;
    return frequency_of(c.lambda0) / length;
  }
  const double length = c.air_gap + c.n_diamond * c.diamond_thickness / relative_intensity(c);
  if (!(length > 0.0)) throw InvalidArgument("cavity length must be > 0");
  return frequency_of(c.lambda0) / length;
}

}  // namespace hybcav::hybrid
