#pragma once

// Fixed-order quadrature rules for averaging over cavity-length noise.

#include <cstddef>
#include <vector>

namespace hybcav::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1 for the probability rules below
};

/// Gauss-Hermite rule for E[f(X)] with X ~ N(0, 1): nodes sqrt(2) x_i and
/// weights w_i / sqrt(pi), computed by the Golub-Welsch eigenvalue method.
Rule gauss_hermite_normal(std::size_t points);

/// Gauss-Chebyshev rule for E[f(sin(phi))] with phi uniform, i.e. the
/// arcsine density on [-1, 1]. All weights are 1 / points.
Rule gauss_chebyshev_arcsine(std::size_t points);

}  // namespace hybcav::quadrature
