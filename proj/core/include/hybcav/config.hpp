#pragma once

// Run configuration: a flat `key = value` file with dotted keys whose
// suffix names the unit (_um, _nm, _ppm, _deg). '#' starts a comment.
// Lists are comma separated. Values are kept in file units; the
// conversion to SI happens when the model objects are built.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybcav/cavity_stack.hpp"
#include "hybcav/fom.hpp"
#include "hybcav/gaussian.hpp"
#include "hybcav/hybrid.hpp"

namespace hybcav {

enum class SnapMode { None, DiamondLike, AirLike };

struct MirrorConfig {
  std::optional<int> dbr_pairs;                // DBR layout ...
  std::optional<double> transmission_ppm;      // ... or a direct transmission
  double n_high = kTa2O5Index;
  double n_low = kSiO2Index;
  tmm::Termination termination = tmm::Termination::High;
  double substrate_index = 1.0;
  double scatter_ppm = 0.0;
  double absorption_ppm = 0.0;

  bool operator==(const MirrorConfig&) const = default;
};

struct RunConfig {
  // cavity
  double t_d_um = 4.0;
  std::optional<double> t_a_um;   // empty: resonant
  std::optional<int> mode_order;  // empty: smallest order above the minimum gap
  std::optional<double> min_air_gap_um;
  double lambda0_nm = 637.0;
  double n_d = kDiamondIndex;
  bool ar_coating = false;
  double sigma_da_nm = 0.0;
  SnapMode snap = SnapMode::None;

  // mirrors
  MirrorConfig air_mirror;
  MirrorConfig diamond_mirror;
  int reference_dbr_pairs = 11;  // penetration model for direct-loss mirrors

  // dimple
  double roc_um = 25.0;
  std::optional<double> depth_um;
  std::optional<double> diameter_um;
  double fiber_diameter_um = 0.0;
  double tilt_deg = 0.0;
  double fiber_mfr_um = 2.5;
  double fiber_index = 1.45;

  // emitter
  double beta0 = 0.03;
  double xi = 1.0;

  // vibration
  double sigma_vib_nm = 0.1;
  int quadrature_points = 41;
  fom::VibrationModel vibration_model = fom::VibrationModel::Gaussian;
  fom::SensitivityModel sensitivity_model = fom::SensitivityModel::ClosedForm;

  // sweep
  std::string sweep_variable;  // t_d_um, t_a_um, sigma_da_nm, sigma_vib_nm
  double sweep_start = 0.0;
  double sweep_stop = 0.0;
  int sweep_steps = 1;
  std::vector<double> sweep_sigma_da_nm;

  // optimize
  double t_min_ppm = 10.0;
  double t_max_ppm = 20000.0;
  int optimize_grid_points = 41;
  double collection_efficiency = 1.0;

  // field-profile
  double grid_step_nm = 0.0;  // 0: automatic

  bool operator==(const RunConfig&) const = default;
};

/// Parses configuration text. Throws ConfigError naming the line and key
/// for syntax errors, unknown or duplicate keys, bad values and
/// inconsistent combinations.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Every key with its value, one `key = value` per line, in a fixed order.
/// parse_config(canonical_text(c)) == c.
std::string canonical_text(const RunConfig& c);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& c);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

const char* to_string(SnapMode m);

// Model objects built from a configuration (SI units).
tmm::MirrorSpec mirror_spec(const MirrorConfig& m, int reference_pairs);
tmm::CavityLayout cavity_layout(const RunConfig& c, const hybrid::HybridCavity& cav);
gaussian::DimpleGeometry dimple(const RunConfig& c);
fom::EmitterParams emitter(const RunConfig& c);
fom::VibrationSpec vibration(const RunConfig& c);

/// Cavity with the configured (or snapped) diamond thickness and air gap.
/// `t_d` overrides the configured thickness when given.
hybrid::HybridCavity make_cavity(const RunConfig& c, std::optional<double> t_d = std::nullopt,
                                 SnapMode snap_override = SnapMode::None);

/// Power transmission and total losses of a mirror at lambda0 (fractions).
double mirror_transmission(const RunConfig& c, const MirrorConfig& m, double ambient_index);
double mirror_total_loss(const RunConfig& c, const MirrorConfig& m, double ambient_index);

/// Values of the sweep variable (a single value when steps == 1).
std::vector<double> sweep_values(const RunConfig& c);

}  // namespace hybcav
