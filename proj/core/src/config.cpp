#include "hybcav/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>

#include "hybcav/errors.hpp"

namespace hybcav {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Context {
  std::size_t line = 0;
  std::string key;

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(message, line, key); }
};

double to_double(std::string_view v, const Context& ctx) {
  double out = 0.0;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    ctx.fail("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v, const Context& ctx) {
  int out = 0;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    ctx.fail("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v, const Context& ctx) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  ctx.fail("expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_list(std::string_view v, const Context& ctx) {
  std::vector<double> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(to_double(trim(v.substr(0, comma)), ctx));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view, const Context&)>;
using Getter = std::function<std::optional<std::string>(const RunConfig&)>;

struct Key {
  std::string name;
  Setter set;
  Getter get;
};

Key real(std::string name, double RunConfig::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v, const Context& ctx) { c.*field = to_double(v, ctx); },
          [field](const RunConfig& c) -> std::optional<std::string> { return format_double(c.*field); }};
}

Key integer(std::string name, int RunConfig::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v, const Context& ctx) { c.*field = to_int(v, ctx); },
          [field](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.*field); }};
}

Key optional_real(std::string name, std::optional<double> RunConfig::*field) {
  return {std::move(name),
          [field](RunConfig& c, std::string_view v, const Context& ctx) { c.*field = to_double(v, ctx); },
          [field](const RunConfig& c) -> std::optional<std::string> {
            if (!(c.*field)) return std::nullopt;
            return format_double(*(c.*field));
          }};
}

std::vector<Key> mirror_keys(const std::string& prefix, MirrorConfig RunConfig::*mirror) {
  std::vector<Key> keys;
  keys.push_back({prefix + "dbr_pairs",
                  [mirror](RunConfig& c, std::string_view v, const Context& ctx) {
                    (c.*mirror).dbr_pairs = to_int(v, ctx);
                  },
                  [mirror](const RunConfig& c) -> std::optional<std::string> {
                    if (!(c.*mirror).dbr_pairs) return std::nullopt;
                    return std::to_string(*(c.*mirror).dbr_pairs);
                  }});
  keys.push_back({prefix + "transmission_ppm",
                  [mirror](RunConfig& c, std::string_view v, const Context& ctx) {
                    (c.*mirror).transmission_ppm = to_double(v, ctx);
                  },
                  [mirror](const RunConfig& c) -> std::optional<std::string> {
                    if (!(c.*mirror).transmission_ppm) return std::nullopt;
                    return format_double(*(c.*mirror).transmission_ppm);
                  }});
  auto member = [&](const std::string& name, double MirrorConfig::*field) {
    keys.push_back({prefix + name,
                    [mirror, field](RunConfig& c, std::string_view v, const Context& ctx) {
                      (c.*mirror).*field = to_double(v, ctx);
                    },
                    [mirror, field](const RunConfig& c) -> std::optional<std::string> {
                      return format_double((c.*mirror).*field);
                    }});
  };
  member("n_high", &MirrorConfig::n_high);
  member("n_low", &MirrorConfig::n_low);
  keys.push_back({prefix + "termination",
                  [mirror](RunConfig& c, std::string_view v, const Context& ctx) {
                    if (v == "high") {
                      (c.*mirror).termination = tmm::Termination::High;
                    } else if (v == "low") {
                      (c.*mirror).termination = tmm::Termination::Low;
                    } else {
                      ctx.fail("expected high or low");
                    }
                  },
                  [mirror](const RunConfig& c) -> std::optional<std::string> {
                    return (c.*mirror).termination == tmm::Termination::High ? "high" : "low";
                  }});
  member("substrate_index", &MirrorConfig::substrate_index);
  member("scatter_ppm", &MirrorConfig::scatter_ppm);
  member("absorption_ppm", &MirrorConfig::absorption_ppm);
  return keys;
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(real("cavity.t_d_um", &RunConfig::t_d_um));
    k.push_back({"cavity.t_a_um",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "resonant") {
                     c.t_a_um.reset();
                   } else {
                     c.t_a_um = to_double(v, ctx);
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.t_a_um ? format_double(*c.t_a_um) : "resonant";
                 }});
    k.push_back({"cavity.mode_order",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "auto") {
                     c.mode_order.reset();
                   } else {
                     c.mode_order = to_int(v, ctx);
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (c.t_a_um) return std::nullopt;
                   return c.mode_order ? std::to_string(*c.mode_order) : "auto";
                 }});
    k.push_back(optional_real("cavity.min_air_gap_um", &RunConfig::min_air_gap_um));
    k.push_back(real("cavity.lambda0_nm", &RunConfig::lambda0_nm));
    k.push_back(real("cavity.n_d", &RunConfig::n_d));
    k.push_back({"cavity.ar_coating",
                 [](RunConfig& c, std::string_view v, const Context& ctx) { c.ar_coating = to_bool(v, ctx); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.ar_coating ? "true" : "false";
                 }});
    k.push_back(real("cavity.sigma_da_nm", &RunConfig::sigma_da_nm));
    k.push_back({"cavity.snap",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "none") {
                     c.snap = SnapMode::None;
                   } else if (v == "diamond-like") {
                     c.snap = SnapMode::DiamondLike;
                   } else if (v == "air-like") {
                     c.snap = SnapMode::AirLike;
                   } else {
                     ctx.fail("expected none, diamond-like or air-like");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return to_string(c.snap); }});

    for (auto& key : mirror_keys("mirrors.air.", &RunConfig::air_mirror)) k.push_back(std::move(key));
    for (auto& key : mirror_keys("mirrors.diamond.", &RunConfig::diamond_mirror)) {
      k.push_back(std::move(key));
    }
    k.push_back(integer("mirrors.reference_dbr_pairs", &RunConfig::reference_dbr_pairs));

    k.push_back(real("dimple.roc_um", &RunConfig::roc_um));
    k.push_back(optional_real("dimple.depth_um", &RunConfig::depth_um));
    k.push_back(optional_real("dimple.diameter_um", &RunConfig::diameter_um));
    k.push_back(real("dimple.fiber_diameter_um", &RunConfig::fiber_diameter_um));
    k.push_back(real("dimple.tilt_deg", &RunConfig::tilt_deg));
    k.push_back(real("dimple.fiber_mfr_um", &RunConfig::fiber_mfr_um));
    k.push_back(real("dimple.fiber_index", &RunConfig::fiber_index));

    k.push_back(real("emitter.beta0", &RunConfig::beta0));
    k.push_back(real("emitter.xi", &RunConfig::xi));

    k.push_back(real("vibration.sigma_nm", &RunConfig::sigma_vib_nm));
    k.push_back(integer("vibration.quadrature_points", &RunConfig::quadrature_points));
    k.push_back({"vibration.model",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "gaussian") {
                     c.vibration_model = fom::VibrationModel::Gaussian;
                   } else if (v == "sinusoidal") {
                     c.vibration_model = fom::VibrationModel::Sinusoidal;
                   } else {
                     ctx.fail("expected gaussian or sinusoidal");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return fom::to_string(c.vibration_model);
                 }});
    k.push_back({"vibration.sensitivity",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "closed-form") {
                     c.sensitivity_model = fom::SensitivityModel::ClosedForm;
                   } else if (v == "exact") {
                     c.sensitivity_model = fom::SensitivityModel::Exact;
                   } else {
                     ctx.fail("expected closed-form or exact");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return fom::to_string(c.sensitivity_model);
                 }});

    k.push_back({"sweep.variable",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   if (v == "none") {
                     c.sweep_variable.clear();
                   } else if (v == "t_d_um" || v == "t_a_um" || v == "sigma_da_nm" ||
                              v == "sigma_vib_nm") {
                     c.sweep_variable = std::string(v);
                   } else {
                     ctx.fail("expected none, t_d_um, t_a_um, sigma_da_nm or sigma_vib_nm");
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.sweep_variable.empty() ? "none" : c.sweep_variable;
                 }});
    k.push_back(real("sweep.start", &RunConfig::sweep_start));
    k.push_back(real("sweep.stop", &RunConfig::sweep_stop));
    k.push_back(integer("sweep.steps", &RunConfig::sweep_steps));
    k.push_back({"sweep.sigma_da_nm",
                 [](RunConfig& c, std::string_view v, const Context& ctx) {
                   c.sweep_sigma_da_nm = to_list(v, ctx);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (c.sweep_sigma_da_nm.empty()) return std::nullopt;
                   return join(c.sweep_sigma_da_nm);
                 }});

    k.push_back(real("optimize.t_min_ppm", &RunConfig::t_min_ppm));
    k.push_back(real("optimize.t_max_ppm", &RunConfig::t_max_ppm));
    k.push_back(integer("optimize.grid_points", &RunConfig::optimize_grid_points));
    k.push_back(real("optimize.collection_efficiency", &RunConfig::collection_efficiency));

    k.push_back(real("field.grid_step_nm", &RunConfig::grid_step_nm));
    return k;
  }();
  return table;
}

void validate(RunConfig& c, const std::map<std::string, std::size_t>& lines) {
  auto ctx = [&](const std::string& key) {
    const auto it = lines.find(key);
    return Context{it == lines.end() ? 0 : it->second, key};
  };
  auto require = [&](bool ok, const std::string& key, const std::string& what) {
    if (!ok) ctx(key).fail(what);
  };

  require(c.t_d_um >= 0.0, "cavity.t_d_um", "must be >= 0");
  if (c.t_a_um) {
    require(*c.t_a_um > 0.0, "cavity.t_a_um", "must be > 0");
    require(!lines.count("cavity.mode_order") || !c.mode_order, "cavity.mode_order",
            "a mode order only applies to cavity.t_a_um = resonant");
    require(!c.min_air_gap_um, "cavity.min_air_gap_um",
            "a minimum gap only applies to cavity.t_a_um = resonant");
    require(c.snap == SnapMode::None, "cavity.snap",
            "snapping the thickness needs cavity.t_a_um = resonant");
  }
  if (c.mode_order) require(*c.mode_order >= 0, "cavity.mode_order", "must be >= 0");
  if (c.min_air_gap_um) require(*c.min_air_gap_um >= 0.0, "cavity.min_air_gap_um", "must be >= 0");
  require(c.lambda0_nm > 0.0, "cavity.lambda0_nm", "must be > 0");
  require(c.n_d >= 1.0, "cavity.n_d", "must be >= 1");
  require(c.sigma_da_nm >= 0.0, "cavity.sigma_da_nm", "must be >= 0");

  for (const auto* side : {"air", "diamond"}) {
    auto& m = std::string(side) == "air" ? c.air_mirror : c.diamond_mirror;
    const std::string p = std::string("mirrors.") + side + ".";
    require(!(m.dbr_pairs && m.transmission_ppm), p + "transmission_ppm",
            "give either " + p + "dbr_pairs or " + p + "transmission_ppm, not both");
    if (!m.dbr_pairs && !m.transmission_ppm) m.dbr_pairs = 11;
    if (m.dbr_pairs) require(*m.dbr_pairs >= 1, p + "dbr_pairs", "must be >= 1");
    if (m.transmission_ppm) {
      require(*m.transmission_ppm >= 0.0 && *m.transmission_ppm <= 1e6, p + "transmission_ppm",
              "must lie in [0, 1e6]");
    }
    require(m.n_high >= 1.0, p + "n_high", "must be >= 1");
    require(m.n_low >= 1.0, p + "n_low", "must be >= 1");
    require(m.substrate_index >= 1.0, p + "substrate_index", "must be >= 1");
    require(m.scatter_ppm >= 0.0, p + "scatter_ppm", "must be >= 0");
    require(m.absorption_ppm >= 0.0, p + "absorption_ppm", "must be >= 0");
  }
  require(c.reference_dbr_pairs >= 1, "mirrors.reference_dbr_pairs", "must be >= 1");

  require(c.roc_um > 0.0, "dimple.roc_um", "must be > 0");
  require(!(c.depth_um && c.diameter_um), "dimple.diameter_um",
          "give either dimple.depth_um or dimple.diameter_um, not both");
  if (!c.depth_um && !c.diameter_um) c.depth_um = 0.3;
  if (c.depth_um) require(*c.depth_um >= 0.0, "dimple.depth_um", "must be >= 0");
  if (c.diameter_um) require(*c.diameter_um >= 0.0, "dimple.diameter_um", "must be >= 0");
  require(c.fiber_diameter_um >= 0.0, "dimple.fiber_diameter_um", "must be >= 0");
  require(c.fiber_mfr_um > 0.0, "dimple.fiber_mfr_um", "must be > 0");
  require(c.fiber_index >= 1.0, "dimple.fiber_index", "must be >= 1");

  require(c.beta0 > 0.0 && c.beta0 < 1.0, "emitter.beta0", "must lie in (0, 1)");
  require(c.xi >= 0.0 && c.xi <= 1.0, "emitter.xi", "must lie in [0, 1]");

  require(c.sigma_vib_nm >= 0.0, "vibration.sigma_nm", "must be >= 0");
  require(c.quadrature_points >= 21 && c.quadrature_points % 2 == 1,
          "vibration.quadrature_points", "must be odd and >= 21");

  require(c.sweep_steps >= 1, "sweep.steps", "must be >= 1");
  require(c.sweep_steps == 1 || c.sweep_stop >= c.sweep_start, "sweep.stop",
          "must be >= sweep.start");
  for (double s : c.sweep_sigma_da_nm) require(s >= 0.0, "sweep.sigma_da_nm", "must be >= 0");

  require(c.t_min_ppm > 0.0, "optimize.t_min_ppm", "must be > 0");
  require(c.t_max_ppm > c.t_min_ppm && c.t_max_ppm <= 1e5, "optimize.t_max_ppm",
          "must lie in (optimize.t_min_ppm, 1e5]");
  require(c.optimize_grid_points >= 3, "optimize.grid_points", "must be >= 3");
  require(c.collection_efficiency > 0.0 && c.collection_efficiency <= 1.0,
          "optimize.collection_efficiency", "must lie in (0, 1]");
  require(c.grid_step_nm >= 0.0, "field.grid_step_nm", "must be >= 0");
}

}  // namespace

const char* to_string(SnapMode m) {
  switch (m) {
    case SnapMode::None:
      return "none";
    case SnapMode::DiamondLike:
      return "diamond-like";
    case SnapMode::AirLike:
      return "air-like";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, const Key*> by_name;
  for (const auto& key : key_table()) by_name.emplace(key.name, &key);

  RunConfig c;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    Context ctx{line_no, key};
    if (key.empty()) ctx.fail("missing key");
    const auto it = by_name.find(key);
    if (it == by_name.end()) ctx.fail("unknown key");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      ctx.fail("duplicate key (first set on line " + std::to_string(prev->second) + ")");
    }
    if (value.empty()) ctx.fail("missing value");
    it->second->set(c, value, ctx);
    seen.emplace(key, line_no);
  }
  validate(c, seen);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const RunConfig& c) {
  std::string out;
  for (const auto& key : key_table()) {
    if (const auto v = key.get(c)) out += key.name + " = " + *v + "\n";
  }
  return out;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : canonical_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

tmm::MirrorSpec mirror_spec(const MirrorConfig& m, int reference_pairs) {
  tmm::MirrorSpec s;
  s.pairs = m.dbr_pairs.value_or(reference_pairs);
  s.n_high = m.n_high;
  s.n_low = m.n_low;
  s.termination = m.termination;
  s.substrate_index = m.substrate_index;
  return s;
}

tmm::CavityLayout cavity_layout(const RunConfig& c, const hybrid::HybridCavity& cav) {
  tmm::CavityLayout l;
  l.diamond_thickness = cav.diamond_thickness;
  l.air_gap = cav.air_gap;
  l.lambda0 = cav.lambda0;
  l.n_diamond = cav.n_diamond;
  l.air_mirror = mirror_spec(c.air_mirror, c.reference_dbr_pairs);
  l.diamond_mirror = mirror_spec(c.diamond_mirror, c.reference_dbr_pairs);
  l.sigma_da = units::nm(c.sigma_da_nm);
  l.ar_coating = cav.ar_coated;
  return l;
}

gaussian::DimpleGeometry dimple(const RunConfig& c) {
  const double roc = units::um(c.roc_um);
  const double fd = units::um(c.fiber_diameter_um);
  const double tilt = units::deg_to_rad(c.tilt_deg);
  if (c.diameter_um) return gaussian::DimpleGeometry::from_diameter(roc, units::um(*c.diameter_um), fd, tilt);
  return gaussian::DimpleGeometry::from_depth(roc, units::um(c.depth_um.value_or(0.3)), fd, tilt);
}

fom::EmitterParams emitter(const RunConfig& c) {
  fom::EmitterParams e;
  e.beta0 = c.beta0;
  e.xi = c.xi;
  e.zpl_frequency = frequency_of(units::nm(c.lambda0_nm));
  return e;
}

fom::VibrationSpec vibration(const RunConfig& c) {
  fom::VibrationSpec v;
  v.sigma = units::nm(c.sigma_vib_nm);
  v.quadrature_points = c.quadrature_points;
  v.model = c.vibration_model;
  v.sensitivity = c.sensitivity_model;
  return v;
}

hybrid::HybridCavity make_cavity(const RunConfig& c, std::optional<double> t_d,
                                 SnapMode snap_override) {
  const double lambda0 = units::nm(c.lambda0_nm);
  double td = t_d.value_or(units::um(c.t_d_um));
  const SnapMode snap = snap_override != SnapMode::None ? snap_override : c.snap;
  if (snap == SnapMode::DiamondLike) {
    td = hybrid::nearest_thickness(td, hybrid::ModeClass::DiamondLike, lambda0, c.n_d);
  } else if (snap == SnapMode::AirLike) {
    td = hybrid::nearest_thickness(td, hybrid::ModeClass::AirLike, lambda0, c.n_d);
  }

  hybrid::HybridCavity cav;
  cav.diamond_thickness = td;
  cav.lambda0 = lambda0;
  cav.n_diamond = c.n_d;
  cav.ar_coated = c.ar_coating;
  if (c.t_a_um) {
    cav.air_gap = units::um(*c.t_a_um);
    cav.mode_order = -1;
    return cav;
  }
  if (c.mode_order) {
    cav.mode_order = *c.mode_order;
    cav.air_gap = c.ar_coating ? hybrid::resonant_air_gap_ar(td, lambda0, c.n_d, *c.mode_order)
                               : hybrid::resonant_air_gap(td, lambda0, c.n_d, *c.mode_order);
    return cav;
  }
  const double min_gap =
      c.min_air_gap_um ? units::um(*c.min_air_gap_um) : dimple(c).min_air_gap();
  return hybrid::make_resonant(td, lambda0, c.n_d, min_gap, c.ar_coating);
}

double mirror_transmission(const RunConfig& c, const MirrorConfig& m, double ambient_index) {
  if (m.transmission_ppm) return units::ppm(*m.transmission_ppm);
  return tmm::mirror_transmission(mirror_spec(m, c.reference_dbr_pairs), ambient_index,
                                  units::nm(c.lambda0_nm));
}

double mirror_total_loss(const RunConfig& c, const MirrorConfig& m, double ambient_index) {
  return mirror_transmission(c, m, ambient_index) + units::ppm(m.scatter_ppm + m.absorption_ppm);
}

std::vector<double> sweep_values(const RunConfig& c) {
  if (c.sweep_steps <= 1) return {c.sweep_start};
  std::vector<double> out(static_cast<std::size_t>(c.sweep_steps));
  const double span = c.sweep_stop - c.sweep_start;
  for (int i = 0; i < c.sweep_steps; ++i) {
    out[static_cast<std::size_t>(i)] = c.sweep_start + span * i / (c.sweep_steps - 1);
  }
  return out;
}

}  // namespace hybcav
