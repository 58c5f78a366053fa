#include "hybcav/cavity_stack.hpp"

#include <algorithm>
#include <cmath>

#include "hybcav/errors.hpp"

namespace hybcav::tmm {

CavityStack build_cavity_stack(const CavityLayout& layout) {
  if (layout.diamond_thickness < 0.0 || layout.air_gap < 0.0) {
    throw InvalidArgument("cavity layer thicknesses must be >= 0");
  }
  const double lambda0 = layout.lambda0;
  const auto air_mirror = build_dbr(layout.air_mirror.pairs, layout.air_mirror.n_high,
                                    layout.air_mirror.n_low, lambda0,
                                    layout.air_mirror.termination, 1.0,
                                    layout.air_mirror.substrate_index);
  const auto diamond_mirror = build_dbr(layout.diamond_mirror.pairs, layout.diamond_mirror.n_high,
                                        layout.diamond_mirror.n_low, lambda0,
                                        layout.diamond_mirror.termination, layout.n_diamond,
                                        layout.diamond_mirror.substrate_index);

  CavityStack out;
  LayerStack& s = out.stack;
  s = LayerStack(layout.air_mirror.substrate_index, layout.diamond_mirror.substrate_index);
  const auto& am = air_mirror.layers();
  for (auto it = am.rbegin(); it != am.rend(); ++it) s.add_layer(it->index, it->thickness);

  out.air_layer = s.layers().size();
  s.add_layer(1.0, layout.air_gap);

  if (layout.ar_coating) {
    const double n_ar = std::sqrt(layout.n_diamond);
    out.coating_layer = s.layers().size();
    s.add_layer(n_ar, lambda0 / (4.0 * n_ar), layout.sigma_da);
    out.diamond_layer = s.layers().size();
    s.add_layer(layout.n_diamond, layout.diamond_thickness, layout.sigma_da);
  } else {
    out.diamond_layer = s.layers().size();
    s.add_layer(layout.n_diamond, layout.diamond_thickness, layout.sigma_da);
  }
  s.append_layers(diamond_mirror.layers());
  s.validate();
  return out;
}

double mirror_transmission(const MirrorSpec& mirror, double ambient_index, double lambda0) {
  const auto dbr = build_dbr(mirror.pairs, mirror.n_high, mirror.n_low, lambda0,
                             mirror.termination, ambient_index, mirror.substrate_index);
  return transmission(dbr, frequency_of(lambda0));
}

double losses_from_linewidth(double fwhm, double energy_length, double n_diamond) {
  return 4.0 * kPi * n_diamond * energy_length * fwhm / kSpeedOfLight;
}

namespace {

// A bare cavity is referenced to the air field.
std::size_t reference_layer(const CavityLayout& layout, const CavityStack& cav) {
  return layout.diamond_thickness > 0.0 ? cav.diamond_layer : cav.air_layer;
}

double reference_index(const CavityLayout& layout) {
  return layout.diamond_thickness > 0.0 ? layout.n_diamond : 1.0;
}

}  // namespace

double energy_length(const CavityLayout& layout) {
  const auto cav = build_cavity_stack(layout);
  const auto profile = field_profile(cav.stack, frequency_of(layout.lambda0));
  return energy_distribution_length(profile, reference_layer(layout, cav));
}

CavityAnalysis analyze_cavity(const CavityLayout& layout, const ScanOptions& options) {
  const auto cav = build_cavity_stack(layout);
  const double f0 = frequency_of(layout.lambda0);

  double optical = 0.0;
  for (std::size_t i = cav.air_layer; i <= cav.diamond_layer; ++i) {
    const auto& l = cav.stack.layers()[i];
    optical += l.index * l.thickness;
  }
  optical = std::max(optical, layout.lambda0 / 2.0);
  const double fsr = kSpeedOfLight / (2.0 * optical);

  // Upper estimate of the linewidth for windowing only: every air-side
  // channel weighted by n_d, plus a generous roughness allowance.
  const double t_air = mirror_transmission(layout.air_mirror, 1.0, layout.lambda0);
  const double t_dia = mirror_transmission(layout.diamond_mirror, layout.n_diamond, layout.lambda0);
  const double rough = std::pow(4.0 * kPi * layout.sigma_da / layout.lambda0, 2) * 10.0;
  const double loss_guess = layout.n_diamond * t_air + t_dia + rough;
  const double dnu_guess = fsr * loss_guess / (2.0 * kPi);
  const double halfwidth = std::min(0.25 * fsr, std::max(40.0 * dnu_guess, 1e6));

  CavityAnalysis out;
  out.resonance = linewidth_numeric(cav.stack, f0, halfwidth, options);

  const auto profile = field_profile(cav.stack, out.resonance.center);
  out.energy_length = energy_distribution_length(profile, reference_layer(layout, cav));
  const double e_air = profile.max_abs_in_layer(cav.air_layer);
  const double e_dia = profile.max_abs_in_layer(cav.diamond_layer);
  out.relative_intensity = e_air * e_air / (layout.n_diamond * e_dia * e_dia);
  out.effective_losses =
      losses_from_linewidth(out.resonance.fwhm, out.energy_length, reference_index(layout));
  out.finesse = 2.0 * kPi / out.effective_losses;
  return out;
}

}  // namespace hybcav::tmm
