#include <doctest.h>

#include <cmath>

#include "hybcav/cavity_stack.hpp"
#include "hybcav/errors.hpp"
#include "hybcav/hybrid.hpp"
#include "hybcav/tmm.hpp"
#include "oracles.hpp"

using namespace hybcav;
using namespace hybcav::tmm;
using doctest::Approx;

namespace {

constexpr double lam = 637e-9;
const double f0 = frequency_of(lam);

CavityLayout layout_for(hybrid::ModeClass cls, double sigma = 0.0) {
  const double td = hybrid::nearest_thickness(4e-6, cls, lam, kDiamondIndex);
  const auto cav = hybrid::make_resonant(td, lam, kDiamondIndex, 2e-6);
  CavityLayout l;
  l.diamond_thickness = cav.diamond_thickness;
  l.air_gap = cav.air_gap;
  l.sigma_da = sigma;
  return l;
}

}  // namespace

TEST_CASE("fresnel coefficients of a smooth interface") {
  const auto a = fresnel_rough(1.0, 2.41, 0.0, lam);
  CHECK(a.r12.real() == Approx(-0.41349).epsilon(1e-4));
  CHECK(a.t12.real() == Approx(0.58651).epsilon(1e-4));
  const auto b = fresnel_rough(2.41, 1.0, 0.0, lam);
  CHECK(b.r12.real() == Approx(0.41349).epsilon(1e-4));
  CHECK(a.r21.real() == Approx(b.r12.real()));
  CHECK(a.t21.real() == Approx(b.t12.real()));
}

TEST_CASE("roughness damps the reflection amplitude by the Gaussian factor") {
  const double sigma = 0.25e-9;
  const auto smooth = fresnel_rough(2.41, 1.0, 0.0, lam);
  const auto rough = fresnel_rough(2.41, 1.0, sigma, lam);
  const double x = 2.0 * oracle::pi * sigma * 2.41 / lam;
  const double expected = 1.0 - std::exp(-2.0 * x * x);
  CHECK(1.0 - std::abs(rough.r12 / smooth.r12) == Approx(expected).epsilon(1e-9));
  CHECK(expected == Approx(7.064e-5).epsilon(1e-3));
  const double y = 2.0 * oracle::pi * sigma * (2.41 - 1.0) / lam;
  CHECK(std::abs(rough.t12 / smooth.t12) == Approx(std::exp(-0.5 * y * y)));
  // The reverse direction damps with the other medium's index.
  const double z = 2.0 * oracle::pi * sigma * 1.0 / lam;
  CHECK(std::abs(rough.r21 / smooth.r21) == Approx(std::exp(-2.0 * z * z)));
}

TEST_CASE("roughness never increases the reflection amplitude") {
  double prev = 1.0;
  for (double s = 0.0; s < 20e-9; s += 0.5e-9) {
    const double r = std::abs(fresnel_rough(1.0, 2.14, s, lam).r12);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("single interface and empty stack") {
  LayerStack single(1.0, 2.41);
  CHECK(reflectivity(single, f0) == Approx(0.17098).epsilon(1e-4));
  CHECK(reflectivity(single, 0.7 * f0) == Approx(0.17098).epsilon(1e-4));
  LayerStack empty;
  CHECK(reflectivity(empty, f0) == 0.0);
  CHECK(transmission(empty, f0) == Approx(1.0));
}

TEST_CASE("DBR layer layout") {
  const auto s = build_dbr(3, 2.14, 1.48, lam, Termination::High, 2.41);
  REQUIRE(s.layers().size() == 7);
  CHECK(s.layers()[0].index == 2.14);
  CHECK(s.layers()[1].index == 1.48);
  CHECK(s.layers()[6].index == 2.14);
  CHECK(s.layers()[0].thickness == Approx(lam / (4 * 2.14)));
  CHECK(s.incident_index() == 2.41);
  const auto low = build_dbr(3, 2.14, 1.48, lam, Termination::Low);
  CHECK(low.layers()[0].index == 1.48);
  CHECK_THROWS_AS(build_dbr(0, 2.14, 1.48, lam, Termination::High), InvalidArgument);
  CHECK_THROWS_AS(build_dbr(3, 0.9, 1.48, lam, Termination::High), InvalidArgument);
}

TEST_CASE("DBR transmission matches the characteristic-matrix oracle") {
  for (int pairs : {1, 5, 10, 11}) {
    for (double ambient : {1.0, 2.41}) {
      for (double sub : {1.0, 1.45}) {
        const auto s = build_dbr(pairs, 2.14, 1.48, lam, Termination::High, ambient, sub);
        const auto o = oracle::abeles(oracle::quarter_wave_dbr(2 * pairs + 1, 2.14, 1.48, lam),
                                      ambient, sub, lam);
        CHECK(transmission(s, f0) == Approx(o.T).epsilon(1e-9));
        CHECK(reflectivity(s, f0) == Approx(o.R).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("23-layer DBR reproduces the mirror transmissions of the design") {
  const auto into_air = build_dbr(11, 2.14, 1.48, lam, Termination::High, 1.0);
  const auto into_diamond = build_dbr(11, 2.14, 1.48, lam, Termination::High, 2.41);
  CHECK(units::to_ppm(transmission(into_air, f0)) == Approx(260).epsilon(0.10));
  CHECK(units::to_ppm(transmission(into_diamond, f0)) == Approx(630).epsilon(0.10));
}

TEST_CASE("degenerate DBR equals the bare interface") {
  // equal indices on both sides of every internal boundary
  const auto s = build_dbr(1, 1.8, 1.8, lam, Termination::High, 1.8, 1.0);
  CHECK(transmission(s, f0) == Approx(transmission(LayerStack(1.8, 1.0), f0)).epsilon(1e-12));
  const auto t = build_dbr(3, 2.0, 2.0, lam, Termination::Low, 2.0, 2.0);
  CHECK(transmission(t, 0.93 * f0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reflectivity of a full cavity matches the oracle off resonance") {
  const auto cav = build_cavity_stack(layout_for(hybrid::ModeClass::DiamondLike));
  std::vector<oracle::Film> films;
  for (const auto& l : cav.stack.layers()) films.push_back({l.index, l.thickness});
  for (double f : {0.99 * f0, f0, 1.013 * f0}) {
    const auto o = oracle::abeles(films, 1.0, 1.0, kSpeedOfLight / f);
    CHECK(reflectivity(cav.stack, f) == Approx(o.R).epsilon(1e-7));
  }
}

TEST_CASE("linewidth agrees with a dense-scan oracle") {
  const auto layout = layout_for(hybrid::ModeClass::DiamondLike);
  const auto cav = build_cavity_stack(layout);
  const auto a = analyze_cavity(layout);
  std::vector<oracle::Film> films;
  for (const auto& l : cav.stack.layers()) films.push_back({l.index, l.thickness});
  const double hw = 200.0 * a.resonance.fwhm;
  const auto [fwhm, center] = oracle::dense_fwhm(
      [&](double f) { return oracle::abeles(films, 1.0, 1.0, kSpeedOfLight / f).R; },
      a.resonance.center - hw, a.resonance.center + hw, 400001);
  CHECK(a.resonance.fwhm == Approx(fwhm).epsilon(2e-3));
  CHECK(a.resonance.center == Approx(center).epsilon(1e-9));
  // Designed with the ideal resonance condition, so the dip sits at lambda0.
  CHECK(a.resonance.center == Approx(f0).epsilon(1e-6));
}

TEST_CASE("doubling mirror transmissions doubles the linewidth") {
  auto layout = layout_for(hybrid::ModeClass::DiamondLike);
  const auto base = analyze_cavity(layout);
  const double t_air = mirror_transmission(layout.air_mirror, 1.0, lam);
  const double t_dia = mirror_transmission(layout.diamond_mirror, 2.41, lam);
  // Higher substrate index raises T; the oracle picks the index that doubles
  // the effective losses.
  double lo = 1.0, hi = 4.0;
  const double target = 2.0 * (0.41494 * t_air + t_dia);
  for (int i = 0; i < 100; ++i) {
    const double ns = 0.5 * (lo + hi);
    auto ta = oracle::abeles(oracle::quarter_wave_dbr(23, 2.14, 1.48, lam), 1.0, ns, lam).T;
    auto td = oracle::abeles(oracle::quarter_wave_dbr(23, 2.14, 1.48, lam), 2.41, ns, lam).T;
    ((0.41494 * ta + td) < target ? lo : hi) = ns;
  }
  layout.air_mirror.substrate_index = lo;
  layout.diamond_mirror.substrate_index = lo;
  const auto doubled = analyze_cavity(layout);
  CHECK(doubled.resonance.fwhm / base.resonance.fwhm == Approx(2.0).epsilon(0.05));
}

TEST_CASE("finesse equals 2 pi over the round-trip losses of a bare cavity") {
  CavityLayout l;
  l.diamond_thickness = 0.0;
  l.air_gap = 10 * lam / 2;
  l.air_mirror.pairs = 10;
  l.diamond_mirror.pairs = 10;
  l.n_diamond = 1.0;
  const auto a = analyze_cavity(l);
  const double t1 = mirror_transmission(l.air_mirror, 1.0, lam);
  CHECK(a.effective_losses == Approx(2 * t1).epsilon(0.01));
  CHECK(a.finesse == Approx(2 * kPi / (2 * t1)).epsilon(0.01));
  // 800 ppm round-trip losses correspond to F ~ 8000.
  CHECK(2 * kPi / 800e-6 == Approx(8000).epsilon(0.02));
}

TEST_CASE("symmetric lossless mirrors give a dip down to zero") {
  CavityLayout l;
  l.diamond_thickness = 0.0;
  l.n_diamond = 1.0;
  l.air_gap = 6 * lam / 2;
  const auto a = analyze_cavity(l);
  CHECK(a.resonance.r_min < 1e-8);
}

TEST_CASE("no dip in the window") {
  const auto s = build_dbr(5, 2.14, 1.48, lam, Termination::High);
  CHECK_THROWS_AS(linewidth_numeric(s, f0, 1e9), NoResonanceInWindow);
}

TEST_CASE("field profile: node and antinode at the diamond surface") {
  for (auto cls : {hybrid::ModeClass::DiamondLike, hybrid::ModeClass::AirLike}) {
    const auto layout = layout_for(cls);
    const auto cav = build_cavity_stack(layout);
    const auto p = field_profile(cav.stack, f0);
    const auto& dia = p.layers[cav.diamond_layer];
    const double at_surface = std::abs(dia.at(0.0)) / p.max_abs_in_layer(cav.diamond_layer);
    if (cls == hybrid::ModeClass::DiamondLike) {
      CHECK(at_surface == Approx(1.0).epsilon(1e-6));
    } else {
      CHECK(at_surface < 1e-3);
    }
  }
}

TEST_CASE("field is continuous at every boundary") {
  const auto cav = build_cavity_stack(layout_for(hybrid::ModeClass::AirLike));
  const auto p = field_profile(cav.stack, f0);
  for (std::size_t i = 0; i + 1 < p.layers.size(); ++i) {
    const auto& a = p.layers[i];
    const auto& b = p.layers[i + 1];
    CHECK(std::abs(a.at(a.thickness) - b.at(0.0)) < 1e-9 * p.max_abs_in_layer(i));
  }
}

TEST_CASE("bare half-wave cavity has a single antinode at the centre") {
  CavityLayout l;
  l.diamond_thickness = 0.0;
  l.n_diamond = 1.0;
  l.air_gap = lam / 2;
  const auto cav = build_cavity_stack(l);
  const auto p = field_profile(cav.stack, f0, lam / 2000);
  const auto& air = p.layers[cav.air_layer];
  double best_z = 0.0, best = 0.0;
  for (double z = 0.0; z <= air.thickness; z += air.thickness / 1000) {
    if (std::abs(air.at(z)) > best) {
      best = std::abs(air.at(z));
      best_z = z;
    }
  }
  CHECK(best_z == Approx(lam / 4).epsilon(2e-3));
  CHECK(std::abs(air.at(0.0)) < 1e-3 * best);
}

TEST_CASE("energy length of a bare cavity equals its length for perfect mirrors") {
  // Very high reflectivity makes the penetration depth the only excess.
  CavityLayout l;
  l.diamond_thickness = 0.0;
  l.n_diamond = 1.0;
  l.air_gap = 20 * lam / 2;
  l.air_mirror = {14, 3.5, 1.2, Termination::High, 1.0};
  l.diamond_mirror = l.air_mirror;
  const double L = energy_length(l);
  // Penetration depth per mirror lambda / (4 (n_h - n_l)) for an H cap seen from air.
  const double pen = lam / (4.0 * (3.5 - 1.2));
  CHECK(L == Approx(l.air_gap + 2.0 * pen).epsilon(0.01));
  CHECK(L > l.air_gap);
}

TEST_CASE("exact and sampled energy lengths agree") {
  const auto layout = layout_for(hybrid::ModeClass::DiamondLike);
  const auto cav = build_cavity_stack(layout);
  const auto p = field_profile(cav.stack, f0);
  const double exact = energy_distribution_length(p, cav.diamond_layer);
  const double sampled = energy_distribution_length_sampled(p, cav.diamond_layer);
  CHECK(sampled == Approx(exact).epsilon(1e-3));
}

TEST_CASE("air-like modes have the longer energy length") {
  const auto d = analyze_cavity(layout_for(hybrid::ModeClass::DiamondLike));
  const auto a = analyze_cavity(layout_for(hybrid::ModeClass::AirLike));
  CHECK(a.energy_length > d.energy_length);
}

TEST_CASE("field ratio from the stack matches the closed form") {
  for (double td : {3.95e-6, 4.0e-6, 4.02e-6, 4.05e-6}) {
    const auto cav = hybrid::make_resonant(td, lam, kDiamondIndex, 2e-6);
    CavityLayout l;
    l.diamond_thickness = cav.diamond_thickness;
    l.air_gap = cav.air_gap;
    const auto a = analyze_cavity(l);
    CHECK(a.relative_intensity == Approx(hybrid::relative_intensity(cav)).epsilon(1e-6));
  }
}

TEST_CASE("stack validation") {
  LayerStack s;
  s.add_layer(0.5, 1e-7);
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  LayerStack t;
  t.add_layer(1.5, -1.0);
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
}
