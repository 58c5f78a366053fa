#include "hybcav/tmm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hybcav/errors.hpp"
#include "hybcav/numerics.hpp"
#include "hybcav/units.hpp"

namespace hybcav::tmm {
namespace {

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Maps right-side amplitudes (a2, b2) to left-side amplitudes (a1, b1):
//   a2 = t12 a1 + r21 b2,  b1 = r12 a1 + t21 b2.
Mat2 interface_matrix(double n1, double n2, double sigma, double lambda0) {
  const auto c = fresnel_rough(n1, n2, sigma, lambda0);
  const cplx inv = 1.0 / c.t12;
  return {inv, -c.r21 * inv, c.r12 * inv, (c.t12 * c.t21 - c.r12 * c.r21) * inv};
}

Mat2 propagation_matrix(double n, double d, double lambda0) {
  const double phase = 2.0 * kPi * n * d / lambda0;
  return {std::polar(1.0, -phase), 0.0, 0.0, std::polar(1.0, phase)};
}

Mat2 system_matrix(const LayerStack& s, double lambda0) {
  Mat2 m{1.0, 0.0, 0.0, 1.0};
  const auto& layers = s.layers();
  for (std::size_t i = 0; i < s.interface_count(); ++i) {
    m = mul(m, interface_matrix(s.medium_index(i), s.medium_index(i + 1), s.roughness()[i],
                                lambda0));
    if (i < layers.size()) m = mul(m, propagation_matrix(layers[i].index, layers[i].thickness,
                                                         lambda0));
  }
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

FresnelCoefficients fresnel_rough(double n1, double n2, double sigma, double lambda0) {
  require(n1 >= 1.0 && n2 >= 1.0, "fresnel_rough: refractive indices must be >= 1");
  require(sigma >= 0.0, "fresnel_rough: roughness must be >= 0");
  require(lambda0 > 0.0, "fresnel_rough: wavelength must be > 0");

  const double k0s = 2.0 * kPi * sigma / lambda0;
  const double r = (n1 - n2) / (n1 + n2);
  const double t12 = 2.0 * n1 / (n1 + n2);
  const double t21 = 2.0 * n2 / (n1 + n2);
  const double tdamp = std::exp(-0.5 * std::pow(k0s * (n1 - n2), 2));

  FresnelCoefficients c;
  c.r12 = r * std::exp(-2.0 * std::pow(k0s * n1, 2));
  c.r21 = -r * std::exp(-2.0 * std::pow(k0s * n2, 2));
  c.t12 = t12 * tdamp;
  c.t21 = t21 * tdamp;
  return c;
}

LayerStack::LayerStack(double incident_index, double exit_index)
    : incident_(incident_index), exit_(exit_index) {}

LayerStack& LayerStack::add_layer(double index, double thickness, double sigma) {
  layers_.push_back({index, thickness});
  roughness_.back() = sigma;
  roughness_.push_back(0.0);
  return *this;
}

LayerStack& LayerStack::append_layers(std::span<const Layer> other) {
  for (const auto& l : other) add_layer(l.index, l.thickness);
  return *this;
}

void LayerStack::set_roughness(std::size_t i, double sigma) {
  if (i >= roughness_.size()) throw InvalidArgument("set_roughness: interface out of range");
  roughness_[i] = sigma;
}

void LayerStack::set_exit_index(double n) { exit_ = n; }
void LayerStack::set_incident_index(double n) { incident_ = n; }

Interface LayerStack::interface(std::size_t i) const {
  if (i >= interface_count()) throw InvalidArgument("interface index out of range");
  return {roughness_[i], medium_index(i), medium_index(i + 1)};
}

double LayerStack::medium_index(std::size_t i) const {
  if (i == 0) return incident_;
  if (i <= layers_.size()) return layers_[i - 1].index;
  return exit_;
}

double LayerStack::optical_thickness() const {
  double sum = 0.0;
  for (const auto& l : layers_) sum += l.index * l.thickness;
  return sum;
}

double LayerStack::max_index() const {
  double n = std::max(incident_, exit_);
  for (const auto& l : layers_) n = std::max(n, l.index);
  return n;
}

LayerStack LayerStack::reversed() const {
  LayerStack out(exit_, incident_);
  out.layers_.assign(layers_.rbegin(), layers_.rend());
  out.roughness_.assign(roughness_.rbegin(), roughness_.rend());
  return out;
}

void LayerStack::validate() const {
  require(incident_ >= 1.0 && exit_ >= 1.0, "LayerStack: ambient indices must be >= 1");
  for (const auto& l : layers_) {
    require(l.index >= 1.0, "LayerStack: layer index must be >= 1");
    require(l.thickness >= 0.0, "LayerStack: layer thickness must be >= 0");
  }
  for (double s : roughness_) require(s >= 0.0, "LayerStack: roughness must be >= 0");
}

LayerStack build_dbr(int pairs, double n_high, double n_low, double lambda0,
                     Termination termination, double ambient_index, double substrate_index) {
  require(pairs >= 1, "build_dbr: at least one pair is required");
  require(n_high >= 1.0 && n_low >= 1.0, "build_dbr: non-physical refractive index");
  require(lambda0 > 0.0, "build_dbr: wavelength must be > 0");

  const double first = termination == Termination::High ? n_high : n_low;
  const double second = termination == Termination::High ? n_low : n_high;
  LayerStack s(ambient_index, substrate_index);
  s.add_layer(first, lambda0 / (4.0 * first));
  for (int p = 0; p < pairs; ++p) {
    s.add_layer(second, lambda0 / (4.0 * second));
    s.add_layer(first, lambda0 / (4.0 * first));
  }
  s.validate();
  return s;
}

Response response(const LayerStack& stack, double frequency) {
  const double lambda0 = wavelength_of(frequency);
  const Mat2 m = system_matrix(stack, lambda0);
  Response out;
  out.r = m[2] / m[0];
  out.t = 1.0 / m[0];
  out.reflectance = std::norm(out.r);
  out.transmittance = stack.exit_index() / stack.incident_index() * std::norm(out.t);
  out.scatter = 1.0 - out.reflectance - out.transmittance;
  return out;
}

double reflectivity(const LayerStack& stack, double frequency) {
  return response(stack, frequency).reflectance;
}

double transmission(const LayerStack& stack, double frequency) {
  return response(stack, frequency).transmittance;
}

namespace {

struct Scan {
  std::vector<double> f;
  std::vector<double> r;
};

Scan scan(const LayerStack& stack, double lo, double hi, int n) {
  Scan s;
  s.f.resize(n);
  s.r.resize(n);
  for (int i = 0; i < n; ++i) {
    s.f[i] = lo + (hi - lo) * i / (n - 1);
    s.r[i] = reflectivity(stack, s.f[i]);
  }
  return s;
}

}  // namespace

Resonance linewidth_numeric(const LayerStack& stack, double f_center, double scan_halfwidth,
                            const ScanOptions& options) {
  require(scan_halfwidth > 0.0 && scan_halfwidth < f_center,
          "linewidth_numeric: scan half-width must be in (0, f_center)");
  require(options.coarse_points >= 5, "linewidth_numeric: need at least 5 scan points");
  stack.validate();

  const int n = options.coarse_points;
  Scan s = scan(stack, f_center - scan_halfwidth, f_center + scan_halfwidth, n);
  const double baseline = 0.5 * (s.r.front() + s.r.back());
  const double window_lo = s.f.front();
  const double window_hi = s.f.back();

  auto argmin = [](const Scan& sc) {
    return static_cast<std::size_t>(std::min_element(sc.r.begin(), sc.r.end()) - sc.r.begin());
  };
  std::size_t imin = argmin(s);
  const double edge = std::min(s.r.front(), s.r.back());
  if (imin == 0 || imin + 1 == s.r.size() || !(s.r[imin] < edge)) {
    throw NoResonanceInWindow("no reflectivity dip between " + std::to_string(window_lo) +
                              " Hz and " + std::to_string(window_hi) + " Hz");
  }

  // Zoom until the dip is sampled by enough points.
  for (int level = 0; level < options.max_zoom_levels; ++level) {
    const double half = 0.5 * (baseline + s.r[imin]);
    const auto below = std::count_if(s.r.begin(), s.r.end(), [&](double r) { return r < half; });
    if (below >= options.min_points_across_dip) break;
    const double step = s.f[1] - s.f[0];
    const double width = std::max<double>(static_cast<double>(below), 1.0) * step;
    const double hw = std::max(4.0 * width, 10.0 * step);
    const double lo = std::max(window_lo, s.f[imin] - hw);
    const double hi = std::min(window_hi, s.f[imin] + hw);
    s = scan(stack, lo, hi, n);
    imin = argmin(s);
  }

  const double step = s.f[1] - s.f[0];
  const double a = imin > 0 ? s.f[imin - 1] : s.f[imin];
  const double b = imin + 1 < s.f.size() ? s.f[imin + 1] : s.f[imin];
  auto refl = [&](double f) { return reflectivity(stack, f); };
  const auto best = numerics::golden_section_minimize(refl, a, b, 1e-9 * step);
  const double f_min = best.value <= s.r[imin] ? best.x : s.f[imin];
  const double r_min = std::min(best.value, s.r[imin]);

  const double half = 0.5 * (baseline + r_min);
  auto g = [&](double f) { return refl(f) - half; };

  // Bracket each flank: first sampled point beyond half depth, or the
  // original window edge when the zoomed scan did not reach it.
  double left = window_lo;
  for (std::size_t i = imin; i-- > 0;) {
    if (s.r[i] > half) {
      left = s.f[i];
      break;
    }
  }
  double right = window_hi;
  for (std::size_t i = imin + 1; i < s.r.size(); ++i) {
    if (s.r[i] > half) {
      right = s.f[i];
      break;
    }
  }
  if (!(g(left) > 0.0) || !(g(right) > 0.0)) {
    throw NoResonanceInWindow("reflectivity dip is not resolved inside the scan window");
  }
  const double tol = 1e-10 * std::max(step, 1.0);
  const double f_lo = numerics::bisect(g, left, f_min, tol);
  const double f_hi = numerics::bisect(g, f_min, right, tol);

  return {f_hi - f_lo, f_min, r_min, baseline};
}

cplx LayerField::at(double z_local) const {
  return forward * std::polar(1.0, wavenumber * z_local) +
         backward * std::polar(1.0, -wavenumber * z_local);
}

double LayerField::max_abs() const {
  // |E|^2 = |a|^2 + |b|^2 + 2|a||b| cos(2kz + phi); maximum at the first
  // crest inside the layer, otherwise at an edge.
  const double aa = std::abs(forward);
  const double bb = std::abs(backward);
  double best = std::max(std::abs(at(0.0)), std::abs(at(thickness)));
  if (aa == 0.0 || bb == 0.0) return best;
  const double phi = std::arg(forward) - std::arg(backward);
  // cos(2kz + phi) = 1 at z = (2 pi m - phi) / (2k)
  const double period = kPi / wavenumber;
  double z = std::fmod(-phi / (2.0 * wavenumber), period);
  if (z < 0.0) z += period;
  if (z <= thickness) best = std::max(best, aa + bb);
  return best;
}

double LayerField::intensity_integral() const {
  const double d = thickness;
  const double a2 = std::norm(forward);
  const double b2 = std::norm(backward);
  if (d == 0.0) return 0.0;
  // 2 Re(a b* \int_0^d e^{2ikz} dz)
  const cplx integral = (std::polar(1.0, 2.0 * wavenumber * d) - 1.0) / cplx(0.0, 2.0 * wavenumber);
  return (a2 + b2) * d + 2.0 * std::real(forward * std::conj(backward) * integral);
}

double FieldProfile::max_abs_in_layer(std::size_t layer_index) const {
  if (layer_index >= layers.size()) throw InvalidArgument("max_abs_in_layer: layer out of range");
  return layers[layer_index].max_abs();
}

FieldProfile field_profile(const LayerStack& stack, double frequency, double grid_step) {
  stack.validate();
  const double lambda0 = wavelength_of(frequency);
  if (grid_step <= 0.0) grid_step = lambda0 / (40.0 * stack.max_index());

  const auto& layers = stack.layers();
  const std::size_t nl = layers.size();
  FieldProfile out;
  out.layers.resize(nl);

  // Back-propagate from the exit medium, where only a forward wave exists.
  cplx a = 1.0;
  cplx b = 0.0;
  for (std::size_t i = stack.interface_count(); i-- > 0;) {
    const Mat2 im = interface_matrix(stack.medium_index(i), stack.medium_index(i + 1),
                                     stack.roughness()[i], lambda0);
    cplx na = im[0] * a + im[1] * b;
    cplx nb = im[2] * a + im[3] * b;
    a = na;
    b = nb;
    if (i == 0) break;
    // now at the right edge of finite layer i-1; move to its left edge
    const Layer& l = layers[i - 1];
    const double phase = 2.0 * kPi * l.index * l.thickness / lambda0;
    a *= std::polar(1.0, -phase);
    b *= std::polar(1.0, phase);
    out.layers[i - 1].forward = a;
    out.layers[i - 1].backward = b;
  }
  const cplx incident = a;  // forward amplitude in the incident medium

  double z0 = 0.0;
  for (std::size_t i = 0; i < nl; ++i) {
    auto& lf = out.layers[i];
    lf.forward /= incident;
    lf.backward /= incident;
    lf.index = layers[i].index;
    lf.wavenumber = 2.0 * kPi * layers[i].index / lambda0;
    lf.z_start = z0;
    lf.thickness = layers[i].thickness;

    const auto steps = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(layers[i].thickness / grid_step)));
    const std::size_t first = (i == 0) ? 0 : 1;  // shared boundary sample belongs to the left layer
    for (std::size_t k = first; k <= steps; ++k) {
      const double zl = layers[i].thickness * static_cast<double>(k) / static_cast<double>(steps);
      out.z.push_back(z0 + zl);
      out.field.push_back(lf.at(zl));
      out.permittivity.push_back(layers[i].index * layers[i].index);
      out.layer.push_back(i);
    }
    z0 += layers[i].thickness;
  }
  return out;
}

double energy_distribution_length(const FieldProfile& profile, std::size_t reference_layer) {
  const double emax = profile.max_abs_in_layer(reference_layer);
  const double nref = profile.layers[reference_layer].index;
  if (emax == 0.0) throw NumericError("energy_distribution_length: reference field vanishes");
  double total = 0.0;
  for (const auto& l : profile.layers) total += l.index * l.index * l.intensity_integral();
  return total / (nref * nref * emax * emax / 2.0);
}

double energy_distribution_length_sampled(const FieldProfile& profile,
                                          std::size_t reference_layer) {
  const double emax = profile.max_abs_in_layer(reference_layer);
  const double nref = profile.layers[reference_layer].index;
  double total = 0.0;
  for (std::size_t k = 1; k < profile.z.size(); ++k) {
    // Samples of a layer are contiguous; the boundary sample closes the left layer.
    const std::size_t li = profile.layer[k];
    const double eps = profile.layers[li].index * profile.layers[li].index;
    const double dz = profile.z[k] - profile.z[k - 1];
    const cplx left = (profile.layer[k - 1] == li)
                          ? profile.field[k - 1]
                          : profile.layers[li].at(0.0);
    total += 0.5 * dz * eps * (std::norm(left) + std::norm(profile.field[k]));
  }
  return total / (nref * nref * emax * emax / 2.0);
}

}  // namespace hybcav::tmm
