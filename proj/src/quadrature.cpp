#include <cmath>
#include <numbers>
#include <sstream>

#include "paulikern/error.hpp"
#include "paulikern/models.hpp"

namespace paulikern {

std::vector<double> oscillator_polynomials(int nmax, double x) {
  std::vector<double> h(static_cast<std::size_t>(nmax) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25);
  if (nmax >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < nmax; ++k) {
    const auto kk = static_cast<double>(k);
    h[static_cast<std::size_t>(k) + 1] =
        std::sqrt(2.0 / (kk + 1.0)) * x * h[static_cast<std::size_t>(k)] -
        std::sqrt(kk / (kk + 1.0)) * h[static_cast<std::size_t>(k) - 1];
  }
  return h;
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw Error(Errc::invalid_argument, "quadrature order must be >= 1");

  // Golub-Welsch start, then Newton on the orthonormal polynomial h_n.
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k) / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi, Eigen::EigenvaluesOnly);

  GaussHermite rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      const auto h = oscillator_polynomials(n, x);
      const double step = h[static_cast<std::size_t>(n)] /
                          (std::sqrt(2.0 * n) * h[static_cast<std::size_t>(n) - 1]);
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    // Christoffel weight: 1 / sum_{k<n} h_k(x)^2.
    const auto h = oscillator_polynomials(n - 1, x);
    double s = 0.0;
    for (double v : h) s += v * v;
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / s;
  }
  return rule;
}

}  // namespace paulikern
