#include "hybcav/fom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybcav/errors.hpp"
#include "hybcav/numerics.hpp"
#include "hybcav/quadrature.hpp"

namespace hybcav::fom {

const char* to_string(VibrationModel m) {
  switch (m) {
    case VibrationModel::Gaussian:
      return "gaussian";
    case VibrationModel::Sinusoidal:
      return "sinusoidal";
  }
  return "?";
}

const char* to_string(SensitivityModel m) {
  switch (m) {
    case SensitivityModel::ClosedForm:
      return "closed-form";
    case SensitivityModel::Exact:
      return "exact";
  }
  return "?";
}

double sensitivity(const hybrid::HybridCavity& cavity, SensitivityModel model) {
  return model == SensitivityModel::Exact ? hybrid::vibration_sensitivity_exact(cavity)
                                          : hybrid::vibration_sensitivity(cavity);
}

void VibrationSpec::validate() const {
  if (!(sigma >= 0.0)) throw InvalidArgument("vibration sigma must be >= 0");
  if (quadrature_points < 21 || quadrature_points % 2 == 0) {
    throw InvalidArgument("quadrature points must be odd and >= 21, got " +
                          std::to_string(quadrature_points));
  }
}

double purcell_factor(double g0, double effective_losses, double xi) {
  if (!(g0 > 0.0) || !(effective_losses > 0.0)) {
    throw InvalidArgument("purcell_factor: g0 and losses must be > 0");
  }
  return 3.0 * xi / (kPi * g0 * effective_losses);
}

double purcell_from_linewidth(double linewidth, double g0, double energy_length, double lambda0,
                              double n_diamond, double xi) {
  if (!(linewidth > 0.0) || !(g0 > 0.0) || !(energy_length > 0.0)) {
    throw InvalidArgument("purcell_from_linewidth: inputs must be > 0");
  }
  const double lam_d = lambda0 / n_diamond;
  const double volume = g0 * lam_d * lam_d * energy_length;
  return xi * 3.0 * kSpeedOfLight * lambda0 * lambda0 /
         (4.0 * kPi * kPi * n_diamond * n_diamond * n_diamond * linewidth * volume);
}

double branching_ratio(double purcell, double beta0) {
  if (purcell < 0.0) throw InvalidArgument("purcell factor must be >= 0");
  if (std::isinf(purcell)) return 1.0;
  const double x = beta0 * purcell;
  return x / (x + 1.0);
}

double detuned_purcell(double purcell_resonant, double detuning, double linewidth) {
  if (!(linewidth > 0.0)) throw InvalidArgument("linewidth must be > 0");
  const double x = 2.0 * detuning / linewidth;
  return purcell_resonant / (1.0 + x * x);
}

double hybrid_linewidth(double effective_losses, double energy_length, double n_diamond) {
  if (!(energy_length > 0.0)) throw InvalidArgument("energy length must be > 0");
  return kSpeedOfLight * effective_losses / (4.0 * kPi * n_diamond * energy_length);
}

double lifetime_limited_linewidth(double lifetime) {
  if (!(lifetime > 0.0)) throw InvalidArgument("lifetime must be > 0");
  return 1.0 / (2.0 * kPi * lifetime);
}

double averaged_branching(double purcell_resonant, double linewidth, double sensitivity,
                          double beta0, const VibrationSpec& vib) {
  vib.validate();
  if (vib.sigma == 0.0 || sensitivity == 0.0) return branching_ratio(purcell_resonant, beta0);
  const auto n = static_cast<std::size_t>(vib.quadrature_points);
  double amplitude = vib.sigma;
  quadrature::Rule rule;
  if (vib.model == VibrationModel::Gaussian) {
    rule = quadrature::gauss_hermite_normal(n);
  } else {
    rule = quadrature::gauss_chebyshev_arcsine(n);
    amplitude *= std::sqrt(2.0);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double detuning = sensitivity * amplitude * rule.nodes[i];
    sum += rule.weights[i] *
           branching_ratio(detuned_purcell(purcell_resonant, detuning, linewidth), beta0);
  }
  return sum;
}

double vibration_averaged_emission(const hybrid::HybridCavity& cavity, double g0,
                                   double effective_losses, double energy_length,
                                   const EmitterParams& emitter, const VibrationSpec& vib) {
  const double fp = purcell_factor(g0, effective_losses, emitter.xi);
  const double dnu = hybrid_linewidth(effective_losses, energy_length, cavity.n_diamond);
  return averaged_branching(fp, dnu, sensitivity(cavity, vib.sensitivity), emitter.beta0, vib);
}

double outcoupling_efficiency(double outcoupling, double effective_losses) {
  if (!(outcoupling > 0.0) || outcoupling > effective_losses * (1.0 + 1e-12)) {
    throw InvalidBudget("outcoupling transmission " + std::to_string(units::to_ppm(outcoupling)) +
                        " ppm must lie in (0, " +
                        std::to_string(units::to_ppm(effective_losses)) + "] ppm");
  }
  return std::min(1.0, outcoupling / effective_losses);
}

FigureOfMerit evaluate(const CavityDesign& d, const EmitterParams& emitter,
                       const VibrationSpec& vib) {
  FigureOfMerit f;
  const double sigma = d.cavity.ar_coated ? 0.0 : d.sigma_da;
  const auto budget = hybrid::make_loss_budget(d.cavity, d.air_mirror,
                                               d.diamond_parasitic + d.outcoupling, sigma,
                                               d.clipping);
  f.effective_losses = budget.effective_total;
  f.unwanted_losses = budget.effective_total - d.outcoupling;
  f.purcell = purcell_factor(d.g0, f.effective_losses, emitter.xi);
  f.branching = branching_ratio(f.purcell, emitter.beta0);
  f.linewidth = hybrid_linewidth(f.effective_losses, d.energy_length, d.cavity.n_diamond);
  f.finesse = 2.0 * kPi / f.effective_losses;
  f.sensitivity = sensitivity(d.cavity, vib.sensitivity);
  f.averaged_branching =
      averaged_branching(f.purcell, f.linewidth, f.sensitivity, emitter.beta0, vib);
  f.eta_out = d.mode_matching * outcoupling_efficiency(d.outcoupling, f.effective_losses);
  f.detected_zpl_prob = f.averaged_branching * f.eta_out;
  return f;
}

OutcouplerOptimum optimize_outcoupler(CavityDesign design, const EmitterParams& emitter,
                                      const VibrationSpec& vib, double t_min, double t_max,
                                      std::size_t grid_points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || t_max > 0.1) {
    throw InvalidArgument("outcoupler range must satisfy 0 < T_min < T_max <= 1e5 ppm");
  }
  grid_points = std::max<std::size_t>(grid_points, 3);
  OutcouplerOptimum out;
  auto score = [&](double log_t) {
    design.outcoupling = std::exp(log_t);
    ++out.evaluations;
    return evaluate(design, emitter, vib).detected_zpl_prob;
  };

  const auto grid = numerics::log_grid(t_min, t_max, grid_points);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = score(std::log(grid[i]));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  const double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  const auto ext =
      numerics::golden_section_minimize([&](double x) { return -score(x); }, lo, hi, 1e-7);

  double log_opt = ext.x;
  if (-ext.value < best_value) log_opt = std::log(grid[best]);
  out.outcoupling = std::exp(log_opt);
  design.outcoupling = out.outcoupling;
  out.fom = evaluate(design, emitter, vib);

  const double edge = 1e-5;
  out.at_lower_bound = log_opt - std::log(t_min) < edge;
  out.at_upper_bound = std::log(t_max) - log_opt < edge;
  return out;
}

}  // namespace hybcav::fom
