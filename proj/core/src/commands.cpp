#include "hybcav/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "hybcav/cavity_stack.hpp"
#include "hybcav/errors.hpp"
#include "hybcav/gaussian.hpp"
#include "hybcav/hybrid.hpp"

namespace hybcav {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string suffix(double sigma_nm) { return "_s" + format_double(sigma_nm) + "nm"; }

std::vector<double> roughness_list(const RunConfig& c) {
  if (!c.sweep_sigma_da_nm.empty()) return c.sweep_sigma_da_nm;
  return {c.sigma_da_nm};
}

void require_variable(const RunConfig& c, std::initializer_list<const char*> allowed,
                      const char* command) {
  if (c.sweep_variable.empty()) return;
  for (const char* a : allowed) {
    if (c.sweep_variable == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError(std::string(command) + " sweeps " + list + ", not " + c.sweep_variable, 0,
                    "sweep.variable");
}

// Commands that move t_d need the gap to follow the resonance.
void require_resonant(const RunConfig& c, const char* command) {
  if (c.t_a_um) {
    throw ConfigError(std::string(command) + " needs cavity.t_a_um = resonant", 0, "cavity.t_a_um");
  }
}

std::vector<double> values_or(const RunConfig& c, const char* variable, double fallback) {
  if (c.sweep_variable == variable) return sweep_values(c);
  return {fallback};
}

const char* bound_flag(const fom::OutcouplerOptimum& o) {
  if (o.at_lower_bound) return "lower";
  if (o.at_upper_bound) return "upper";
  return "none";
}

}  // namespace

std::vector<std::vector<Cell>> parallel_rows(
    std::size_t n, int jobs, const std::function<std::vector<Cell>(std::size_t)>& fn) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

fom::CavityDesign make_design(const RunConfig& c, const hybrid::HybridCavity& cav) {
  fom::CavityDesign d;
  d.cavity = cav;
  d.air_mirror = mirror_total_loss(c, c.air_mirror, 1.0);
  d.diamond_parasitic = units::ppm(c.diamond_mirror.scatter_ppm + c.diamond_mirror.absorption_ppm);
  d.outcoupling = mirror_transmission(c, c.diamond_mirror, c.n_d);
  d.sigma_da = units::nm(c.sigma_da_nm);
  const auto mode = gaussian::solve_modes_analytic(cav.diamond_thickness, cav.air_gap,
                                                   units::um(c.roc_um), cav.lambda0, cav.n_diamond);
  d.g0 = mode.g0;
  d.clipping = gaussian::clipping_losses(mode, dimple(c), 1.0).raw;
  d.energy_length = tmm::energy_length(cavity_layout(c, cav));
  d.mode_matching = c.collection_efficiency;
  return d;
}

Table cmd_sweep_thickness(const RunConfig& cfg, int jobs) {
  require_variable(cfg, {"t_d_um"}, "sweep-thickness");
  require_resonant(cfg, "sweep-thickness");
  if (cfg.air_mirror.transmission_ppm || cfg.diamond_mirror.transmission_ppm) {
    throw ConfigError("sweep-thickness needs DBR mirrors (dbr_pairs) on both sides", 0,
                      "mirrors.air.dbr_pairs");
  }
  RunConfig c = cfg;
  c.snap = SnapMode::None;
  const auto thicknesses = values_or(c, "t_d_um", c.t_d_um);
  const auto sigmas = roughness_list(c);

  Table t;
  t.columns = {"t_d_um", "t_a_um", "mode_order", "mode_character", "rel_intensity_analytic",
               "rel_intensity_tmm", "L_eff_um", "g0"};
  for (double s : sigmas) {
    for (const char* name : {"linewidth_tmm_ghz", "linewidth_analytic_ghz", "losses_tmm_ppm",
                             "losses_analytic_ppm", "purcell_tmm", "purcell_analytic", "beta_tmm",
                             "beta_analytic"}) {
      t.columns.push_back(name + suffix(s));
    }
  }

  const double l_air = mirror_total_loss(c, c.air_mirror, 1.0);
  const double l_dia = mirror_total_loss(c, c.diamond_mirror, c.n_d);
  const double air_extra = units::ppm(c.air_mirror.scatter_ppm + c.air_mirror.absorption_ppm);
  const double dia_extra =
      units::ppm(c.diamond_mirror.scatter_ppm + c.diamond_mirror.absorption_ppm);
  t.summary = {{"mirror_air_ppm", units::to_ppm(l_air)},
               {"mirror_diamond_ppm", units::to_ppm(l_dia)}};

  t.rows = parallel_rows(thicknesses.size(), jobs, [&](std::size_t i) {
    const auto cav = make_cavity(c, units::um(thicknesses[i]));
    const auto mode = gaussian::solve_modes_analytic(cav.diamond_thickness, cav.air_gap,
                                                     units::um(c.roc_um), cav.lambda0, c.n_d);
    std::vector<Cell> row{thicknesses[i],
                          units::to_um(cav.air_gap),
                          static_cast<long long>(cav.mode_order),
                          hybrid::mode_character(cav),
                          hybrid::relative_intensity(cav)};
    std::vector<Cell> per_sigma;
    double rel_tmm = kNaN;
    double l_eff = kNaN;
    for (double s : sigmas) {
      auto layout = cavity_layout(c, cav);
      layout.sigma_da = units::nm(s);
      const auto a = tmm::analyze_cavity(layout);
      if (std::isnan(rel_tmm)) {
        rel_tmm = a.relative_intensity;
        l_eff = a.energy_length;
      }
      const double loss_tmm = a.effective_losses + a.relative_intensity * air_extra + dia_extra;
      const double dnu_tmm = fom::hybrid_linewidth(loss_tmm, a.energy_length, c.n_d);
      const double fp_tmm = fom::purcell_from_linewidth(dnu_tmm, mode.g0, a.energy_length,
                                                        cav.lambda0, c.n_d, c.xi);
      double loss_an = kNaN;
      double dnu_an = kNaN;
      double fp_an = kNaN;
      double beta_an = kNaN;
      if (!(cav.ar_coated && s > 0.0)) {
        loss_an = hybrid::make_loss_budget(cav, l_air, l_dia, units::nm(s)).effective_total;
        dnu_an = fom::hybrid_linewidth(loss_an, a.energy_length, c.n_d);
        fp_an = fom::purcell_factor(mode.g0, loss_an, c.xi);
        beta_an = fom::branching_ratio(fp_an, c.beta0);
      }
      per_sigma.insert(per_sigma.end(),
                       {units::to_ghz(dnu_tmm), units::to_ghz(dnu_an), units::to_ppm(loss_tmm),
                        units::to_ppm(loss_an), fp_tmm, fp_an,
                        fom::branching_ratio(fp_tmm, c.beta0), beta_an});
    }
    row.insert(row.end(), {rel_tmm, units::to_um(l_eff), mode.g0});
    row.insert(row.end(), per_sigma.begin(), per_sigma.end());
    return row;
  });
  return t;
}

Table cmd_losses(const RunConfig& cfg, int jobs) {
  require_variable(cfg, {"t_d_um", "sigma_da_nm"}, "losses");
  RunConfig c = cfg;
  c.snap = SnapMode::None;
  const double lambda0 = units::nm(c.lambda0_nm);
  const double l_air = mirror_total_loss(c, c.air_mirror, 1.0);
  const double l_dia = mirror_total_loss(c, c.diamond_mirror, c.n_d);

  Table t;
  t.summary = {{"mirror_air_ppm", units::to_ppm(l_air)},
               {"mirror_diamond_ppm", units::to_ppm(l_dia)}};
  if (c.sweep_variable == "sigma_da_nm") {
    const auto sigmas = sweep_values(c);
    t.columns = {"sigma_da_nm", "boundary_air_loss_ppm", "prefers_diamond_like"};
    t.rows = parallel_rows(sigmas.size(), jobs, [&](std::size_t i) {
      const double s = units::nm(sigmas[i]);
      const bool dl = hybrid::tradeoff_prefers_diamond_like(s, l_air, c.n_d, lambda0);
      return std::vector<Cell>{sigmas[i],
                               units::to_ppm(hybrid::tradeoff_boundary_air_loss(s, c.n_d, lambda0)),
                               std::string(dl ? "true" : "false")};
    });
    return t;
  }

  const auto thicknesses = values_or(c, "t_d_um", c.t_d_um);
  const auto sigmas = roughness_list(c);
  t.columns = {"t_d_um", "t_a_um", "mode_character", "mode_class", "rel_intensity",
               "mirror_eff_ppm"};
  for (double s : sigmas) {
    t.columns.push_back("scatter_eff_ppm" + suffix(s));
    t.columns.push_back("total_eff_ppm" + suffix(s));
  }
  t.rows = parallel_rows(thicknesses.size(), jobs, [&](std::size_t i) {
    const auto cav = make_cavity(c, units::um(thicknesses[i]));
    const double mirror = hybrid::effective_mirror_losses(cav, l_air, l_dia);
    std::vector<Cell> row{thicknesses[i],
                          units::to_um(cav.air_gap),
                          hybrid::mode_character(cav),
                          std::string(cav.ar_coated ? "ar-coated"
                                                    : hybrid::to_string(hybrid::classify(cav))),
                          hybrid::relative_intensity(cav),
                          units::to_ppm(mirror)};
    for (double s : sigmas) {
      const double scatter = cav.ar_coated && s > 0.0
                                 ? kNaN
                                 : hybrid::effective_scatter_losses(cav, units::nm(s));
      row.emplace_back(units::to_ppm(scatter));
      row.emplace_back(units::to_ppm(mirror + scatter));
    }
    return row;
  });
  return t;
}

Table cmd_modes(const RunConfig& cfg, int jobs) {
  require_variable(cfg, {"t_a_um", "t_d_um"}, "modes");
  const RunConfig& c = cfg;
  const auto dim = dimple(c);
  const double roc = units::um(c.roc_um);
  const double lambda0 = units::nm(c.lambda0_nm);
  const auto base = make_cavity(c);
  const std::vector<double> values = c.sweep_variable.empty() ? std::vector<double>{0.0}
                                                              : sweep_values(c);

  Table t;
  t.columns = {"t_d_um",          "t_a_um",          "L_prime_um",       "status",
               "w0_d_analytic_um", "w0_d_numeric_um", "w0_a_analytic_um", "w0_a_numeric_um",
               "dz_a_analytic_um", "dz_a_numeric_um", "g0_analytic",      "g0_numeric",
               "w_m_analytic_um",  "w_m_numeric_um",  "clipping_raw_ppm", "clipping_weighted_ppm",
               "fiber_matching",   "newton_iterations"};
  t.summary = {{"dimple_diameter_um", units::to_um(dim.diameter)},
               {"dimple_depth_um", units::to_um(dim.depth)},
               {"min_air_gap_um", units::to_um(dim.min_air_gap())}};

  t.rows = parallel_rows(values.size(), jobs, [&](std::size_t i) {
    hybrid::HybridCavity cav = base;
    if (c.sweep_variable == "t_a_um") {
      cav.air_gap = units::um(values[i]);
    } else if (c.sweep_variable == "t_d_um") {
      cav = make_cavity(c, units::um(values[i]));
    }
    const double td = cav.diamond_thickness;
    const double ta = cav.air_gap;
    const double lp = gaussian::reduced_length(td, ta, c.n_d);
    std::vector<Cell> row{units::to_um(td), units::to_um(ta), units::to_um(lp)};
    if (!(lp < roc)) {
      row.emplace_back(std::string("unstable"));
      while (row.size() < t.columns.size()) row.emplace_back(kNaN);
      return row;
    }
    const auto a = gaussian::solve_modes_analytic(td, ta, roc, lambda0, c.n_d);
    const auto n = gaussian::solve_modes_numeric(td, ta, roc, lambda0, c.n_d);
    const auto clip = gaussian::clipping_losses(n, dim, hybrid::relative_intensity(cav));
    row.insert(row.end(),
               {std::string("ok"), units::to_um(a.w0_d), units::to_um(n.w0_d), units::to_um(a.w0_a),
                units::to_um(n.w0_a), units::to_um(a.dz_a), units::to_um(n.dz_a), a.g0, n.g0,
                units::to_um(a.w_m), units::to_um(n.w_m), units::to_ppm(clip.raw),
                units::to_ppm(clip.weighted),
                gaussian::fiber_mode_matching(n, units::um(c.fiber_mfr_um), lambda0, c.fiber_index),
                static_cast<long long>(n.iterations)});
    return row;
  });
  return t;
}

Table cmd_optimize(const RunConfig& cfg, int jobs) {
  require_variable(cfg, {"sigma_vib_nm"}, "optimize");
  require_resonant(cfg, "optimize");
  const RunConfig& c = cfg;
  const auto levels = values_or(c, "sigma_vib_nm", c.sigma_vib_nm);

  struct Variant {
    std::string name;
    fom::CavityDesign design;
  };
  std::vector<Variant> variants;
  if (c.ar_coating) {
    variants.push_back({"ar", make_design(c, make_cavity(c))});
  } else {
    variants.push_back({"diamond_like", make_design(c, make_cavity(c, std::nullopt, SnapMode::DiamondLike))});
    variants.push_back({"air_like", make_design(c, make_cavity(c, std::nullopt, SnapMode::AirLike))});
  }

  Table t;
  t.columns = {"sigma_vib_nm"};
  for (const auto& v : variants) {
    for (const char* name : {"T_opt_ppm", "detected", "beta_avg", "eta_out", "purcell",
                             "losses_ppm", "bound"}) {
      t.columns.push_back(v.name + "_" + name);
    }
    const auto& cav = v.design.cavity;
    t.summary.emplace_back(v.name + "_t_d_um", units::to_um(cav.diamond_thickness));
    t.summary.emplace_back(v.name + "_t_a_um", units::to_um(cav.air_gap));
    t.summary.emplace_back(v.name + "_g0", v.design.g0);
    t.summary.emplace_back(v.name + "_L_eff_um", units::to_um(v.design.energy_length));
    t.summary.emplace_back(v.name + "_clipping_raw_ppm", units::to_ppm(v.design.clipping));
    t.summary.emplace_back(
        v.name + "_unwanted_ppm",
        units::to_ppm(hybrid::make_loss_budget(cav, v.design.air_mirror, v.design.diamond_parasitic,
                                               cav.ar_coated ? 0.0 : v.design.sigma_da,
                                               v.design.clipping)
                          .effective_total));
    t.summary.emplace_back(v.name + "_sensitivity_ghz_per_A",
                           units::to_ghz_per_angstrom(fom::sensitivity(cav, c.sensitivity_model)));
  }

  const auto emit = emitter(c);
  t.rows = parallel_rows(levels.size(), jobs, [&](std::size_t i) {
    auto vib = vibration(c);
    vib.sigma = units::nm(levels[i]);
    std::vector<Cell> row{levels[i]};
    for (const auto& v : variants) {
      const auto o = fom::optimize_outcoupler(v.design, emit, vib, units::ppm(c.t_min_ppm),
                                              units::ppm(c.t_max_ppm),
                                              static_cast<std::size_t>(c.optimize_grid_points));
      row.insert(row.end(), {units::to_ppm(o.outcoupling), o.fom.detected_zpl_prob,
                             o.fom.averaged_branching, o.fom.eta_out, o.fom.purcell,
                             units::to_ppm(o.fom.effective_losses), std::string(bound_flag(o))});
    }
    return row;
  });
  return t;
}

Table cmd_field_profile(const RunConfig& c) {
  require_variable(c, {}, "field-profile");
  const auto cav = make_cavity(c);
  const auto layout = cavity_layout(c, cav);
  const auto stack = tmm::build_cavity_stack(layout);
  const auto profile = tmm::field_profile(stack.stack, frequency_of(cav.lambda0),
                                          units::nm(c.grid_step_nm));

  Table t;
  t.columns = {"z_um", "abs_e", "re_e", "im_e", "n", "layer"};
  t.rows.reserve(profile.z.size());
  for (std::size_t i = 0; i < profile.z.size(); ++i) {
    const auto& e = profile.field[i];
    t.rows.push_back({units::to_um(profile.z[i]), std::abs(e), e.real(), e.imag(),
                      std::sqrt(profile.permittivity[i]), static_cast<long long>(profile.layer[i])});
  }
  const auto& dia = profile.layers[stack.diamond_layer];
  const double e_dia = profile.max_abs_in_layer(stack.diamond_layer);
  const double e_air = profile.max_abs_in_layer(stack.air_layer);
  const auto& air = profile.layers[stack.air_layer];
  t.summary = {
      {"t_d_um", units::to_um(cav.diamond_thickness)},
      {"t_a_um", units::to_um(cav.air_gap)},
      {"air_start_um", units::to_um(air.z_start)},
      {"interface_z_um", units::to_um(dia.z_start)},
      {"diamond_end_um", units::to_um(dia.z_start + dia.thickness)},
      {"mode_character", hybrid::mode_character(cav)},
      {"interface_field_ratio", std::abs(dia.at(0.0)) / e_dia},
      {"rel_intensity_tmm", e_air * e_air / (c.n_d * e_dia * e_dia)},
      {"L_eff_um", units::to_um(tmm::energy_distribution_length(profile, stack.diamond_layer))},
  };
  return t;
}

}  // namespace hybcav
