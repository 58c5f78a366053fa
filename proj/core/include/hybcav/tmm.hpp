#pragma once

// One-dimensional transfer-matrix engine for layered stacks at normal
// incidence. Interfaces may carry an RMS roughness that damps the Fresnel
// amplitudes (scalar-scattering model); light removed this way is counted
// as scattering loss, so R + T + L_scatter = 1 holds for real indices.
//
// Field convention: E(z) = a exp(i k z) + b exp(-i k z) inside each layer,
// z measured from the layer's left edge, light incident from the left.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hybcav::tmm {

using cplx = std::complex<double>;

struct Layer {
  double index = 1.0;
  double thickness = 0.0;  // m
};

struct Interface {
  double rms_roughness = 0.0;  // m
  double left_index = 1.0;
  double right_index = 1.0;
};

/// Modified amplitude coefficients of one interface, both traversal
/// directions. `r12`/`t12` act on light arriving from medium 1.
struct FresnelCoefficients {
  cplx r12;
  cplx t12;
  cplx r21;
  cplx t21;
};

/// Fresnel coefficients at normal incidence with exponential roughness
/// damping:  r' = r exp(-2 (2 pi sigma n_in / lambda0)^2),
///           t' = t exp(-1/2 (2 pi sigma (n1 - n2) / lambda0)^2).
FresnelCoefficients fresnel_rough(double n1, double n2, double sigma, double lambda0);

/// A stack of finite layers between two semi-infinite media. Light enters
/// from `incident_index` (left) and leaves into `exit_index` (right).
/// `roughness[i]` belongs to the boundary left of medium i+1, so there is one
/// entry per interface (layers.size() + 1). A default-constructed stack is a
/// single 1|1 boundary and reflects nothing.
class LayerStack {
 public:
  LayerStack() = default;
  LayerStack(double incident_index, double exit_index);

  /// Appends a layer on the exit side; `sigma` is the roughness of the
  /// boundary between the previous last medium and the new layer.
  LayerStack& add_layer(double index, double thickness, double sigma = 0.0);
  /// Appends every layer of `other` (its own ambient media are ignored).
  LayerStack& append_layers(std::span<const Layer> other);

  void set_roughness(std::size_t interface, double sigma);
  void set_exit_index(double n);
  void set_incident_index(double n);

  double incident_index() const noexcept { return incident_; }
  double exit_index() const noexcept { return exit_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const std::vector<double>& roughness() const noexcept { return roughness_; }

  std::size_t interface_count() const noexcept { return layers_.size() + 1; }
  Interface interface(std::size_t i) const;

  /// Index of medium i, where 0 is the incident medium and
  /// layers().size() + 1 the exit medium.
  double medium_index(std::size_t i) const;

  double optical_thickness() const;  // sum of n d over finite layers
  double max_index() const;

  /// Mirror image: exit becomes incident, layer order and roughness reversed.
  LayerStack reversed() const;

  /// Throws InvalidArgument when an index is below 1 or a length negative.
  void validate() const;

 private:
  double incident_ = 1.0;
  double exit_ = 1.0;
  std::vector<Layer> layers_;
  std::vector<double> roughness_{0.0};
};

enum class Termination { High, Low };

/// Quarter-wave Bragg mirror seen from `ambient_index` (the medium light
/// arrives from, e.g. air or diamond) and backed by `substrate_index`.
/// Layer order starts with the termination layer followed by `pairs`
/// alternating pairs, so the stack has 2*pairs + 1 layers.
LayerStack build_dbr(int pairs, double n_high, double n_low, double lambda0,
                     Termination termination, double ambient_index = 1.0,
                     double substrate_index = 1.0);

struct Response {
  cplx r;
  cplx t;
  double reflectance = 0.0;
  double transmittance = 0.0;
  double scatter = 0.0;  // 1 - R - T
};

Response response(const LayerStack& stack, double frequency);
double reflectivity(const LayerStack& stack, double frequency);
double transmission(const LayerStack& stack, double frequency);

/// Reflectivity dip found by a numeric frequency scan.
struct Resonance {
  double fwhm = 0.0;       // Hz
  double center = 0.0;     // Hz, position of the reflectivity minimum
  double r_min = 0.0;      // reflectivity at the center
  double r_baseline = 0.0; // off-resonance reflectivity (window edges)
};

struct ScanOptions {
  int coarse_points = 2001;
  int max_zoom_levels = 12;
  int min_points_across_dip = 40;
};

/// Locates the reflectivity dip inside [f_center - halfwidth, f_center +
/// halfwidth] (coarse scan, zoom, golden-section for the minimum, bisection
/// on both flanks at half depth). Throws NoResonanceInWindow when the scan
/// finds no interior minimum below the edge reflectivity.
Resonance linewidth_numeric(const LayerStack& stack, double f_center, double scan_halfwidth,
                            const ScanOptions& options = {});

/// Per-layer plane-wave amplitudes of a solved stack (finite layers only).
struct LayerField {
  cplx forward;    // a at the layer's left edge
  cplx backward;   // b at the layer's left edge
  double wavenumber = 0.0;
  double index = 1.0;
  double z_start = 0.0;
  double thickness = 0.0;

  cplx at(double z_local) const;
  /// Exact maximum of |E| over the layer.
  double max_abs() const;
  /// Exact integral of |E|^2 over the layer.
  double intensity_integral() const;
};

struct FieldProfile {
  std::vector<double> z;
  std::vector<cplx> field;
  std::vector<double> permittivity;  // n(z)^2
  std::vector<std::size_t> layer;    // finite-layer index (0-based) of each sample
  std::vector<LayerField> layers;

  double max_abs_in_layer(std::size_t layer_index) const;
};

/// Standing-wave field for unit incident amplitude. `grid_step` <= 0 selects
/// lambda / (40 n_max).
FieldProfile field_profile(const LayerStack& stack, double frequency, double grid_step = 0.0);

/// Energy-distribution length: the integral of n^2 |E|^2 over every finite
/// layer, normalised by n_ref^2 |E_max,ref|^2 / 2 where ref is
/// `reference_layer` (the diamond layer for hybrid cavities). Integrates the
/// plane-wave amplitudes exactly.
double energy_distribution_length(const FieldProfile& profile, std::size_t reference_layer);

/// Same quantity evaluated by trapezoidal quadrature over the sampled grid.
double energy_distribution_length_sampled(const FieldProfile& profile,
                                          std::size_t reference_layer);

}  // namespace hybcav::tmm
