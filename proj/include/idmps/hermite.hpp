#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "idmps/error.hpp"

namespace idmps {

inline constexpr int max_hermite_degree = 200;

/// Physicist's Hermite polynomial H_j(x), H_{j+1} = 2xH_j − 2jH_{j−1}.
template <typename Real = double>
Real hermite(int j, Real x) {
  if (j < 0 || j > max_hermite_degree)
    throw error(errc::degree_too_large, "Hermite degree " + std::to_string(j) + " outside 0.." +
                                            std::to_string(max_hermite_degree));
  Real prev = 1;
  if (j == 0) return prev;
  Real cur = 2 * x;
  for (int k = 1; k < j; ++k) {
    Real next = 2 * x * cur - 2 * Real(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Normalized oscillator eigenfunctions f_0..f_{count−1} at x,
/// f_k(x) = e^{−x²/2} H_k(x) / (π^{1/4} √(2^k k!)), by the three-term
/// recurrence on the normalized functions (no factorial overflow).
inline std::vector<double> hermite_functions(std::size_t count, double x) {
  std::vector<double> f(count);
  if (count == 0) return f;
  f[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (count > 1) f[1] = std::sqrt(2.0) * x * f[0];
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double kk = static_cast<double>(k);
    f[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * x * f[k] - std::sqrt(kk / (kk + 1.0)) * f[k - 1];
  }
  return f;
}

inline double hermite_function(std::size_t k, double x) { return hermite_functions(k + 1, x)[k]; }

/// Gauss–Hermite rule for ∫ e^{−x²} g(x) dx, exact for polynomials of degree
/// < 2·size(). Nodes come in ± pairs: nodes[i] = −nodes[size−1−i].
struct GaussHermiteRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// Newton iteration on the normalized Hermite recurrence, in extended
/// precision so that integrals with strong cancellation keep ~1e-10 relative
/// accuracy in double.
inline GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw error(errc::insufficient_nodes, "rule needs at least one node");
  using R = long double;
  const R pim4 = 1.0L / std::sqrt(std::sqrt(std::numbers::pi_v<R>));
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0L);
  rule.weights.assign(n, 0.0L);
  const std::size_t half = (n + 1) / 2;
  const R nn = static_cast<R>(n);
  R z = 0.0L;
  for (std::size_t i = 0; i < half; ++i) {
    if (i == 0)
      z = std::sqrt(2.0L * nn + 1.0L) - 1.85575L * std::pow(2.0L * nn + 1.0L, -1.0L / 6.0L);
    else if (i == 1)
      z -= 1.14L * std::pow(nn, 0.426L) / z;
    else if (i == 2)
      z = 1.86L * z - 0.86L * rule.nodes[0];
    else if (i == 3)
      z = 1.91L * z - 0.91L * rule.nodes[1];
    else
      z = 2.0L * z - rule.nodes[i - 2];

    R pp = 0.0L;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      R p1 = pim4, p2 = 0.0L;
      for (std::size_t j = 0; j < n; ++j) {
        const R p3 = p2;
        p2 = p1;
        const R jj = static_cast<R>(j);
        p1 = z * std::sqrt(2.0L / (jj + 1.0L)) * p2 - std::sqrt(jj / (jj + 1.0L)) * p3;
      }
      pp = std::sqrt(2.0L * nn) * p2;
      const R z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-17L * std::max<R>(1.0L, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw error(errc::convergence_failure, "Gauss-Hermite node iteration did not converge");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0L / (pp * pp);
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0L;
  return rule;
}

}  // namespace idmps
