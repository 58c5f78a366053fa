#pragma once

// Small 1-D numerical kernels shared by the scan and optimisation code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace hybcav::numerics {

struct Extremum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b]; stops when
/// the bracket is narrower than `tol`.
template <typename F>
Extremum golden_section_minimize(F&& f, double a, double b, double tol, int max_iter = 300) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), evals + 1};
}

/// Bisection for a sign change of g on [lo, hi]. The caller guarantees
/// g(lo) and g(hi) differ in sign.
template <typename G>
double bisect(G&& g, double lo, double hi, double tol, int max_iter = 200) {
  const bool lo_negative = g(lo) < 0.0;
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((g(mid) < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// n points spaced uniformly in log(x) over [lo, hi] (inclusive).
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(a + (b - a) * t);
  }
  return out;
}

}  // namespace hybcav::numerics
