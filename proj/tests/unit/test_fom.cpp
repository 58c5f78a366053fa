#include <doctest.h>

#include <cmath>
#include <limits>

#include "hybcav/cavity_stack.hpp"
#include "hybcav/errors.hpp"
#include "hybcav/fom.hpp"
#include "hybcav/gaussian.hpp"
#include "hybcav/hybrid.hpp"
#include "hybcav/quadrature.hpp"
#include "oracles.hpp"

using namespace hybcav;
using namespace hybcav::fom;
using doctest::Approx;

namespace {

constexpr double lam = 637e-9;
constexpr double n = kDiamondIndex;
const double quarter = lam / (4.0 * n);

// Optimised design: 84 ppm curved mirror, 34 ppm parasitic on the plane
// mirror, 0.25 nm roughness, ROC 20 um.
CavityDesign design(hybrid::ModeClass cls, double outcoupling = 1000e-6) {
  const double td = hybrid::nearest_thickness(4e-6, cls, lam, n);
  CavityDesign d;
  d.cavity = hybrid::make_resonant(td, lam, n, 2e-6);
  d.air_mirror = 84e-6;
  d.diamond_parasitic = 34e-6;
  d.outcoupling = outcoupling;
  d.sigma_da = 0.25e-9;
  d.g0 = gaussian::solve_modes_analytic(td, d.cavity.air_gap, 20e-6, lam, n).g0;
  d.energy_length = d.cavity.air_gap + (cls == hybrid::ModeClass::DiamondLike ? 0.9 : 0.5) * td;
  return d;
}

double normal_pdf(double x, double s) {
  return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * oracle::pi));
}

}  // namespace

TEST_CASE("branching ratio") {
  CHECK(branching_ratio(0.0, 0.03) == 0.0);
  CHECK(branching_ratio(40.0, 0.03) == Approx(1.2 / 2.2).epsilon(1e-12));
  CHECK(branching_ratio(40.0, 0.03) == Approx(0.545).epsilon(1e-3));
  CHECK(branching_ratio(1e12, 0.03) == Approx(1.0).epsilon(1e-9));
  CHECK(branching_ratio(std::numeric_limits<double>::infinity(), 0.03) == 1.0);
  CHECK_THROWS_AS(branching_ratio(-1.0, 0.03), InvalidArgument);
}

TEST_CASE("purcell factor") {
  CHECK(purcell_factor(10.0, 1e-3, 0.0) == 0.0);
  CHECK(purcell_factor(5.0, 1e-3) == Approx(2.0 * purcell_factor(10.0, 1e-3)));
  CHECK(purcell_factor(10.0, 1e-3) == Approx(3.0 / (oracle::pi * 10.0 * 1e-3)));
  CHECK_THROWS_AS(purcell_factor(0.0, 1e-3), InvalidArgument);
}

TEST_CASE("linewidth form of the purcell factor") {
  const double g0 = 17.0, loss = 900e-6, leff = 4.5e-6;
  const double dnu = hybrid_linewidth(loss, leff, n);
  CHECK(purcell_from_linewidth(dnu, g0, leff, lam, n) == Approx(purcell_factor(g0, loss)).epsilon(1e-12));
  // mode volume in the direct form
  const double w0 = std::sqrt(4.0 * g0 / oracle::pi) * lam / n;
  CHECK(g0 * std::pow(lam / n, 2) * leff == Approx(oracle::pi * w0 * w0 / 4.0 * leff));
}

TEST_CASE("purcell from the numeric linewidth matches the closed form") {
  for (auto cls : {hybrid::ModeClass::DiamondLike, hybrid::ModeClass::AirLike}) {
    const double td = hybrid::nearest_thickness(4e-6, cls, lam, n);
    const auto cav = hybrid::make_resonant(td, lam, n, 2e-6);
    tmm::CavityLayout l;
    l.diamond_thickness = td;
    l.air_gap = cav.air_gap;
    l.sigma_da = 0.25e-9;
    const auto a = tmm::analyze_cavity(l);
    const double g0 = gaussian::solve_modes_analytic(td, cav.air_gap, 25e-6, lam, n).g0;
    const double l_air = tmm::mirror_transmission(l.air_mirror, 1.0, lam);
    const double l_dia = tmm::mirror_transmission(l.diamond_mirror, n, lam);
    const double closed = hybrid::make_loss_budget(cav, l_air, l_dia, 0.25e-9).effective_total;
    const double numeric =
        purcell_from_linewidth(a.resonance.fwhm, g0, a.energy_length, lam, n);
    CHECK(numeric == Approx(purcell_factor(g0, closed)).epsilon(0.03));
  }
}

TEST_CASE("purcell factor of the optimised design") {
  // 139 ppm unwanted plus 1200 ppm outcoupling
  const auto d = design(hybrid::ModeClass::DiamondLike);
  CHECK(purcell_factor(d.g0, 1339e-6) == Approx(40.0).epsilon(0.1));
}

TEST_CASE("detuned purcell factor") {
  CHECK(detuned_purcell(40.0, 0.0, 1e9) == 40.0);
  CHECK(detuned_purcell(40.0, 0.5e9, 1e9) == Approx(20.0));
  CHECK(detuned_purcell(40.0, 5e9, 1e9) == Approx(40.0 / 101.0));
  CHECK_THROWS_AS(detuned_purcell(40.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("linewidths") {
  // bare cavity: dnu = FSR / F
  const double len = 5e-6, loss = 800e-6;
  const double fsr = oracle::c0 / (2.0 * len);
  CHECK(hybrid_linewidth(loss, len, 1.0) == Approx(fsr / (2.0 * oracle::pi / loss)));
  CHECK(lifetime_limited_linewidth(5.2e-9) == Approx(31e6).epsilon(0.02));
}

TEST_CASE("outcoupling efficiency") {
  CHECK(outcoupling_efficiency(139e-6, 278e-6) == Approx(0.5));
  CHECK(outcoupling_efficiency(236e-6, 472e-6) == Approx(0.5));
  CHECK(outcoupling_efficiency(500e-6, 500e-6) == 1.0);
  CHECK_THROWS_AS(outcoupling_efficiency(600e-6, 500e-6), InvalidBudget);
  CHECK_THROWS_AS(outcoupling_efficiency(0.0, 500e-6), InvalidBudget);
}

TEST_CASE("quadrature rules") {
  const auto gh = quadrature::gauss_hermite_normal(41);
  double s0 = 0, s2 = 0, s4 = 0;
  for (std::size_t i = 0; i < 41; ++i) {
    s0 += gh.weights[i];
    s2 += gh.weights[i] * std::pow(gh.nodes[i], 2);
    s4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
  }
  CHECK(s0 == Approx(1.0).epsilon(1e-13));
  CHECK(s2 == Approx(1.0).epsilon(1e-12));
  CHECK(s4 == Approx(3.0).epsilon(1e-12));
  const auto ch = quadrature::gauss_chebyshev_arcsine(21);
  double c2 = 0;
  for (std::size_t i = 0; i < 21; ++i) c2 += ch.weights[i] * ch.nodes[i] * ch.nodes[i];
  CHECK(c2 == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("vibration average against direct integration") {
  const double fp = 45.0, dnu = 5e9, s = 1.3e19, beta0 = 0.03;
  auto beta = [&](double dl) { return branching_ratio(detuned_purcell(fp, s * dl, dnu), beta0); };
  for (double sigma : {0.05e-9, 0.1e-9, 0.3e-9}) {
    VibrationSpec v;
    v.sigma = sigma;
    const double ref = oracle::simpson([&](double x) { return beta(x) * normal_pdf(x, sigma); },
                                       -12 * sigma, 12 * sigma, 1e-14);
    // the wider the noise relative to the linewidth, the more points it takes
    CHECK(averaged_branching(fp, dnu, s, beta0, v) == Approx(ref).epsilon(1e-4));
    v.quadrature_points = 161;
    CHECK(averaged_branching(fp, dnu, s, beta0, v) == Approx(ref).epsilon(1e-9));
    v.quadrature_points = 41;

    v.model = VibrationModel::Sinusoidal;
    const double amp = std::sqrt(2.0) * sigma;
    const double ref_sin = oracle::simpson(
        [&](double phi) { return beta(amp * std::sin(phi)); }, 0.0, 2.0 * oracle::pi, 1e-14) /
                           (2.0 * oracle::pi);
    CHECK(averaged_branching(fp, dnu, s, beta0, v) == Approx(ref_sin).epsilon(1e-9));
  }
}

TEST_CASE("vibration average limits and convergence") {
  const double fp = 45.0, dnu = 5e9, s = 1.3e19;
  VibrationSpec v;
  v.sigma = 0.0;
  CHECK(averaged_branching(fp, dnu, s, 0.03, v) == branching_ratio(fp, 0.03));
  v.sigma = 0.1e-9;
  const double at41 = averaged_branching(fp, dnu, s, 0.03, v);
  v.quadrature_points = 81;
  const double at81 = averaged_branching(fp, dnu, s, 0.03, v);
  CHECK(std::abs(at81 / at41 - 1.0) < 1e-3);
  v.quadrature_points = 20;
  CHECK_THROWS_AS(averaged_branching(fp, dnu, s, 0.03, v), InvalidArgument);

  v.quadrature_points = 41;
  double previous = 1.0;
  for (int i = 0; i <= 20; ++i) {
    v.sigma = 0.025e-9 * i;
    const double b = averaged_branching(fp, dnu, s, 0.03, v);
    CHECK(b <= previous + 1e-15);
    previous = b;
  }
}

TEST_CASE("air-like mode suffers more from vibrations") {
  const auto dia = design(hybrid::ModeClass::DiamondLike);
  const auto air = design(hybrid::ModeClass::AirLike);
  VibrationSpec v;
  // same losses, energy length and g0 for both: only the sensitivity differs
  const double loss = 800e-6;
  const double b_dia = vibration_averaged_emission(dia.cavity, dia.g0, loss, dia.energy_length, {}, v);
  const double b_air = vibration_averaged_emission(air.cavity, dia.g0, loss, dia.energy_length, {}, v);
  CHECK(b_air < b_dia);
  VibrationSpec exact = v;
  exact.sensitivity = SensitivityModel::Exact;
  CHECK(vibration_averaged_emission(air.cavity, dia.g0, loss, dia.energy_length, {}, exact) <
        vibration_averaged_emission(dia.cavity, dia.g0, loss, dia.energy_length, {}, exact));

  auto mid = dia.cavity;
  mid.diamond_thickness = 4e-6;
  CHECK_THROWS_AS(vibration_averaged_emission(mid, dia.g0, loss, dia.energy_length, {}, v),
                  UnclassifiedMode);
  CHECK_NOTHROW(vibration_averaged_emission(mid, dia.g0, loss, dia.energy_length, {}, exact));
}

TEST_CASE("figure of merit factorises") {
  const auto d = design(hybrid::ModeClass::DiamondLike, 1200e-6);
  const auto f = evaluate(d, {}, {});
  CHECK(f.detected_zpl_prob == Approx(f.averaged_branching * f.eta_out).epsilon(1e-15));
  CHECK(f.detected_zpl_prob <= std::min(f.averaged_branching, f.eta_out));
  CHECK(f.unwanted_losses * 1e6 == Approx(137.3).epsilon(0.005));
  CHECK(f.effective_losses == Approx(f.unwanted_losses + 1200e-6));
  CHECK(f.finesse == Approx(2.0 * oracle::pi / f.effective_losses));
  CHECK(f.averaged_branching < f.branching);
}

TEST_CASE("outcoupler optimum against a dense grid") {
  for (auto cls : {hybrid::ModeClass::DiamondLike, hybrid::ModeClass::AirLike}) {
    const auto d = design(cls);
    VibrationSpec v;
    const auto opt = optimize_outcoupler(d, {}, v, 10e-6, 20000e-6);
    CHECK_FALSE(opt.at_lower_bound);
    CHECK_FALSE(opt.at_upper_bound);
    double best_t = 0.0, best = -1.0;
    auto probe = d;
    for (int i = 0; i <= 4000; ++i) {
      probe.outcoupling = 10e-6 * std::pow(2000.0, i / 4000.0);
      const double p = evaluate(probe, {}, v).detected_zpl_prob;
      if (p > best) {
        best = p;
        best_t = probe.outcoupling;
      }
    }
    CHECK(opt.outcoupling == Approx(best_t).epsilon(0.05));
    CHECK(opt.fom.detected_zpl_prob >= best - 1e-9);
  }
}

TEST_CASE("stronger vibrations push the optimum to higher transmission") {
  const auto d = design(hybrid::ModeClass::DiamondLike);
  VibrationSpec v;
  v.sigma = 0.1e-9;
  const double t1 = optimize_outcoupler(d, {}, v, 10e-6, 20000e-6).outcoupling;
  v.sigma = 0.2e-9;
  const double t2 = optimize_outcoupler(d, {}, v, 10e-6, 20000e-6).outcoupling;
  CHECK(t2 > t1);
}

TEST_CASE("without unwanted losses the optimum sits on the lower bound") {
  auto d = design(hybrid::ModeClass::DiamondLike);
  d.air_mirror = 0.0;
  d.diamond_parasitic = 0.0;
  d.sigma_da = 0.0;
  VibrationSpec v;
  v.sigma = 0.0;
  const auto opt = optimize_outcoupler(d, {}, v, 10e-6, 20000e-6);
  CHECK(opt.at_lower_bound);
  CHECK(std::isfinite(opt.outcoupling));
  CHECK(opt.fom.eta_out == Approx(1.0));
  CHECK_THROWS_AS(optimize_outcoupler(d, {}, v, 0.0, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(optimize_outcoupler(d, {}, v, 1e-5, 0.2), InvalidArgument);
}
