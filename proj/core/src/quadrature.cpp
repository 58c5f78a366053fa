#include "hybcav/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "hybcav/errors.hpp"
#include "hybcav/units.hpp"

namespace hybcav::quadrature {

namespace {

Rule golub_welsch_hermite(std::size_t points) {
  const auto n = static_cast<Eigen::Index>(points);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k) / 2.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericError("Gauss-Hermite eigensolver failed");

  Rule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = std::sqrt(2.0) * solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  // Symmetrise: the rule is exactly even, so tidy roundoff.
  for (std::size_t i = 0, j = points - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

}  // namespace

Rule gauss_hermite_normal(std::size_t points) {
  if (points == 0) throw InvalidArgument("quadrature needs at least one point");
  static std::mutex mutex;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, golub_welsch_hermite(points)).first;
  return it->second;
}

Rule gauss_chebyshev_arcsine(std::size_t points) {
  if (points == 0) throw InvalidArgument("quadrature needs at least one point");
  Rule rule;
  rule.nodes.resize(points);
  rule.weights.assign(points, 1.0 / static_cast<double>(points));
  for (std::size_t i = 0; i < points; ++i) {
    rule.nodes[i] = -std::cos((2.0 * static_cast<double>(i) + 1.0) * kPi /
                              (2.0 * static_cast<double>(points)));
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

}  // namespace hybcav::quadrature
