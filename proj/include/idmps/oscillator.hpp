#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "idmps/hermite.hpp"
#include "idmps/mps.hpp"

// Three coupled oscillators in the eigenstate ψ_{0,0,n} (ħ = m = 1). In
// normal-mode coordinates the state is a Gaussian times H_n(√ω̃ q_3), and q_3 is
// the projection u·x onto a unit vector fixed by the mixing angles. The MPS is
// written in the unscaled single-site basis f_k, whose overlaps with the scaled
// functions φ_j(x) = ω̃^{1/4} f_j(√ω̃ x) are C_{k,j} I_{k,j}.

namespace idmps {

struct OscillatorParams {
  int n = 0;                  // quantum number of the excited normal mode
  double omega_tilde = 1.0;   // normal-mode frequency ω̃
  double theta = 0.0;
  double phi = 0.0;
  double varphi = 0.0;
  std::size_t phys_cutoff = 1;  // basis functions kept per site

  void validate() const {
    if (n < 0) throw error(errc::invalid_params, "n must be nonnegative");
    if (!(omega_tilde > 0.0)) throw error(errc::invalid_params, "omega_tilde must be positive");
    if (phys_cutoff < static_cast<std::size_t>(n) + 1)
      throw error(errc::invalid_params, "phys_cutoff must be at least n+1");
    if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(varphi))
      throw error(errc::invalid_params, "angles must be finite");
  }
};

/// Direction u of the excited normal mode in (x_1, x_2, x_3). Its components
/// reproduce the Schmidt weights: α uses u_1² = sin²θ cos²φ, γ uses
/// u_3² = (cosθ cosϕ + sinθ sinφ sinϕ)² with 1 − u_3² = u_2² + u_1².
inline std::array<double, 3> mode_direction(const OscillatorParams& p) {
  using std::cos, std::sin;
  return {sin(p.theta) * cos(p.phi), cos(p.theta) * sin(p.varphi) - sin(p.theta) * sin(p.phi) * cos(p.varphi),
          cos(p.theta) * cos(p.varphi) + sin(p.theta) * sin(p.phi) * sin(p.varphi)};
}

/// f_k at x on any site; the site label only names the coordinate.
inline double basis_f(std::size_t /*site*/, std::size_t k, double x) { return hermite_function(k, x); }

inline double coeff_C_log(int i, int j, double omega_tilde) {
  return 0.5 * (0.5 * std::log(omega_tilde) - std::log(std::numbers::pi) - (i + j) * std::numbers::ln2 -
                std::lgamma(i + 1.0) - std::lgamma(j + 1.0));
}

/// C_{i,j} = √(√ω̃ / (π 2^i 2^j i! j!)).
inline double coeff_C(int i, int j, double omega_tilde) { return std::exp(coeff_C_log(i, j, omega_tilde)); }

namespace detail {

/// Σ over the terms of the generating-function expansion of I_{i,j}, each
/// scaled by e^{log_scale}. Only r ≡ i ≡ j (mod 2), r ≤ min(i,j) survive,
/// with q = (i−r)/2 and p = (j−r)/2.
inline double hermite_integral_sum(int i, int j, double w, double log_scale) {
  if (i < 0 || j < 0) throw error(errc::invalid_params, "Hermite integral indices must be nonnegative");
  if ((i + j) % 2 != 0) return 0.0;
  const double log_pref = 0.5 * std::log(2.0 * std::numbers::pi / (1.0 + w));
  const double log_fact = std::lgamma(i + 1.0) + std::lgamma(j + 1.0);
  const double diff = 1.0 - w;
  double sum = 0.0;
  for (int r = i % 2; r <= std::min(i, j); r += 2) {
    const int q = (i - r) / 2;
    const int p = (j - r) / 2;
    if (p + q > 0 && diff == 0.0) continue;
    double log_term = log_pref + log_fact - std::lgamma(p + 1.0) - std::lgamma(q + 1.0) - std::lgamma(r + 1.0) +
                      r * std::log(4.0 * std::sqrt(w)) - (p + q + r) * std::log1p(w) + log_scale;
    if (p + q > 0) log_term += (p + q) * std::log(std::abs(diff));
    double sign = (p % 2 == 0) ? 1.0 : -1.0;
    if (diff < 0.0 && (p + q) % 2 == 1) sign = -sign;
    sum += sign * std::exp(log_term);
  }
  return sum;
}

}  // namespace detail

/// I_{i,j} = ∫ e^{−(1+ω̃)x²/2} H_i(x) H_j(√ω̃ x) dx in closed form. Exactly
/// zero when i and j have different parity.
inline double integral_I_closed(int i, int j, double omega_tilde) {
  return detail::hermite_integral_sum(i, j, omega_tilde, 0.0);
}

/// C_{i,j} I_{i,j} = ⟨f_i|φ_j⟩, accumulated in log space so it stays finite
/// where I alone would overflow.
inline double basis_overlap(int i, int j, double omega_tilde) {
  return detail::hermite_integral_sum(i, j, omega_tilde, coeff_C_log(i, j, omega_tilde));
}

/// The same integral by Gauss–Hermite quadrature after x = y·√(2/(1+ω̃)).
inline double integral_I_quadrature(int i, int j, double omega_tilde, std::size_t points = 64) {
  if (i < 0 || j < 0) throw error(errc::invalid_params, "Hermite integral indices must be nonnegative");
  if (2 * points < static_cast<std::size_t>(i + j) + 2)
    throw error(errc::insufficient_nodes, std::to_string(points) + " nodes cannot integrate degree " +
                                              std::to_string(i + j) + " exactly");
  using R = long double;
  const auto rule = gauss_hermite(points);
  const R scale = std::sqrt(2.0L / (1.0L + static_cast<R>(omega_tilde)));
  const R root_w = std::sqrt(static_cast<R>(omega_tilde));
  R sum = 0.0L;
  // Pair ±y so odd integrands cancel exactly.
  for (std::size_t k = 0; k < rule.size() / 2; ++k) {
    const R y = rule.nodes[k] * scale;
    const R plus = hermite<R>(i, y) * hermite<R>(j, root_w * y);
    const R minus = hermite<R>(i, -y) * hermite<R>(j, -root_w * y);
    sum += rule.weights[k] * (plus + minus);
  }
  if (rule.size() % 2 == 1) sum += rule.weights[rule.size() / 2] * hermite<R>(i, 0.0L) * hermite<R>(j, 0.0L);
  return static_cast<double>(scale * sum);
}

inline double binomial(int n, int k) {
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// Schmidt weight α_a across (x_1):(x_2, x_3).
inline double alpha(int a, const OscillatorParams& p) {
  if (a < 0 || a > p.n) throw error(errc::index_out_of_range, "alpha index outside 0..n");
  const double s = std::sin(p.theta) * std::cos(p.phi);
  const double base = s * s;
  return binomial(p.n, a) * std::pow(base, a) * std::pow(1.0 - base, p.n - a);
}

/// Schmidt weight γ_b across (x_1, x_2):(x_3).
inline double gamma(int b, const OscillatorParams& p) {
  if (b < 0 || b > p.n) throw error(errc::index_out_of_range, "gamma index outside 0..n");
  using std::cos, std::sin;
  const double c = cos(p.theta) * cos(p.varphi) + sin(p.theta) * sin(p.phi) * sin(p.varphi);
  const double r = cos(p.theta) * sin(p.varphi) - sin(p.theta) * cos(p.varphi) * sin(p.phi);
  const double rest = r * r + cos(p.phi) * cos(p.phi) * sin(p.theta) * sin(p.theta);
  return binomial(p.n, b) * std::pow(c * c, b) * std::pow(rest, p.n - b);
}

struct OscillatorMpsBundle {
  OscillatorParams params;
  Eigen::MatrixXd a1;               // (k, a): C_{k,a} I_{k,a}
  std::vector<Eigen::MatrixXd> a2;  // [l](a, b): 1[a+b≤n] C_{l,n−a−b} I_{l,n−a−b}
  Eigen::MatrixXd a3;               // (m, b): √γ_b C_{m,b} I_{m,b}
  // Bond weights multiplied into the element tables when the MPS is assembled:
  // site 1 gets w1[a], site 2 gets w2[n−a−b], site 3 gets w3[b] in place of √γ_b.
  std::vector<double> w1, w2, w3;
  MatrixProductState mps;
};

/// Element tables and the assembled three-site MPS, truncated to
/// phys_cutoff basis functions per site.
///
/// In the scaled basis the state has coefficients
/// √(n!/(a! l! b!)) u_1^a u_2^l u_3^b on a + l + b = n; factoring them as
/// w1[a]·w2[l]·w3[b] keeps the middle site symmetric in (a, b) and leaves the
/// overlap tables as the only ω̃-dependent part.
inline OscillatorMpsBundle build_bundle(const OscillatorParams& params) {
  params.validate();
  const int n = params.n;
  const auto d = params.phys_cutoff;
  const auto w = params.omega_tilde;
  const auto dn = static_cast<Eigen::Index>(d);
  const auto bond = static_cast<Eigen::Index>(n + 1);

  OscillatorMpsBundle out;
  out.params = params;
  out.a1.resize(dn, bond);
  out.a3.resize(dn, bond);
  out.a2.assign(d, Eigen::MatrixXd::Zero(bond, bond));
  for (Eigen::Index k = 0; k < dn; ++k) {
    for (int a = 0; a <= n; ++a) {
      const double pool = basis_overlap(static_cast<int>(k), a, w);
      out.a1(k, a) = pool;
      out.a3(k, a) = std::sqrt(gamma(a, params)) * pool;
    }
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) out.a2[static_cast<std::size_t>(k)](a, b) = basis_overlap(static_cast<int>(k), n - a - b, w);
  }

  const auto u = mode_direction(params);
  const double log_nfact = std::lgamma(n + 1.0);
  for (int j = 0; j <= n; ++j) {
    const double inv_root_fact = std::exp(-0.5 * std::lgamma(j + 1.0));
    out.w1.push_back(std::exp(0.5 * log_nfact) * std::pow(u[0], j) * inv_root_fact);
    out.w2.push_back(std::pow(u[1], j) * inv_root_fact);
    out.w3.push_back(std::pow(u[2], j) * inv_root_fact);
  }

  SiteTensor s1(d, 1, static_cast<std::size_t>(n + 1));
  SiteTensor s2(d, static_cast<std::size_t>(n + 1), static_cast<std::size_t>(n + 1));
  SiteTensor s3(d, static_cast<std::size_t>(n + 1), 1);
  for (std::size_t k = 0; k < d; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    for (int a = 0; a <= n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      s1(k, 0, ua) = out.a1(kk, a) * out.w1[ua];
      s3(k, ua, 0) = basis_overlap(static_cast<int>(k), a, w) * out.w3[ua];
      for (int b = 0; a + b <= n; ++b)
        s2(k, ua, static_cast<std::size_t>(b)) = out.a2[k](a, b) * out.w2[static_cast<std::size_t>(n - a - b)];
    }
  }
  out.mps.sites = {std::move(s1), std::move(s2), std::move(s3)};
  return out;
}

/// ψ(x_1, x_2, x_3) summed from the MPS coefficients against f_k f_l f_m.
inline double wavefunction_mps(const OscillatorMpsBundle& bundle, double x1, double x2, double x3) {
  const auto& m = bundle.mps;
  const auto d = bundle.params.phys_cutoff;
  const auto f1 = hermite_functions(d, x1), f2 = hermite_functions(d, x2), f3 = hermite_functions(d, x3);
  const auto bond = m.sites[0].right_dim();
  Eigen::VectorXcd left = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bond));
  Eigen::MatrixXcd mid = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bond), static_cast<Eigen::Index>(bond));
  Eigen::VectorXcd right = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(bond));
  for (std::size_t k = 0; k < d; ++k) {
    left += f1[k] * m.sites[0].slice(k).row(0).transpose();
    mid += f2[k] * m.sites[1].slice(k);
    right += f3[k] * m.sites[2].slice(k).col(0);
  }
  return (left.transpose() * mid * right).value().real();
}

namespace detail {

inline std::vector<double> scaled_functions(int count, double x, double omega_tilde) {
  auto f = hermite_functions(static_cast<std::size_t>(count), std::sqrt(omega_tilde) * x);
  const double s = std::sqrt(std::sqrt(omega_tilde));
  for (auto& v : f) v *= s;
  return f;
}

/// Σ_{i+j=m} √(m!/(i! j!)) c_1^i c_2^j g_i h_j: a normalized Schmidt vector
/// of the (c_1, c_2)-rotated mode on two sites.
inline double two_mode_vector(int m, double c1, double c2, const std::vector<double>& g, const std::vector<double>& h) {
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const int j = m - i;
    const double coef = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(j + 1.0)));
    sum += coef * std::pow(c1, i) * std::pow(c2, j) * g[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j)];
  }
  return sum;
}

}  // namespace detail

/// ψ from the Schmidt decomposition across (x_1):(x_2, x_3),
/// Σ_a √α_a φ_a(x_1) Θ_a(x_2, x_3), with no basis truncation.
inline double wavefunction_direct(const OscillatorParams& p, double x1, double x2, double x3) {
  p.validate();
  const auto u = mode_direction(p);
  const double rest = std::sqrt(std::max(0.0, 1.0 - u[0] * u[0]));
  const auto g1 = detail::scaled_functions(p.n + 1, x1, p.omega_tilde);
  const auto g2 = detail::scaled_functions(p.n + 1, x2, p.omega_tilde);
  const auto g3 = detail::scaled_functions(p.n + 1, x3, p.omega_tilde);
  double psi = 0.0;
  for (int a = 0; a <= p.n; ++a) {
    const double weight = alpha(a, p);
    if (weight == 0.0) continue;
    const double sign = (u[0] < 0.0 && a % 2 == 1) ? -1.0 : 1.0;
    const double c2 = rest > 0.0 ? u[1] / rest : 0.0;
    const double c3 = rest > 0.0 ? u[2] / rest : 0.0;
    psi += sign * std::sqrt(weight) * g1[static_cast<std::size_t>(a)] * detail::two_mode_vector(p.n - a, c2, c3, g2, g3);
  }
  return psi;
}

/// ψ from the Schmidt decomposition across (x_1, x_2):(x_3),
/// Σ_b √γ_b Ξ_b(x_1, x_2) χ_b(x_3).
inline double wavefunction_gamma_form(const OscillatorParams& p, double x1, double x2, double x3) {
  p.validate();
  const auto u = mode_direction(p);
  const double rest = std::sqrt(std::max(0.0, 1.0 - u[2] * u[2]));
  const auto g1 = detail::scaled_functions(p.n + 1, x1, p.omega_tilde);
  const auto g2 = detail::scaled_functions(p.n + 1, x2, p.omega_tilde);
  const auto g3 = detail::scaled_functions(p.n + 1, x3, p.omega_tilde);
  double psi = 0.0;
  for (int b = 0; b <= p.n; ++b) {
    const double weight = gamma(b, p);
    if (weight == 0.0) continue;
    const double sign = (u[2] < 0.0 && b % 2 == 1) ? -1.0 : 1.0;
    const double c1 = rest > 0.0 ? u[0] / rest : 0.0;
    const double c2 = rest > 0.0 ? u[1] / rest : 0.0;
    psi += sign * std::sqrt(weight) * detail::two_mode_vector(p.n - b, c1, c2, g1, g2) * g3[static_cast<std::size_t>(b)];
  }
  return psi;
}

enum class Table { A1, A2, A3 };

inline std::string to_string(Table t) {
  switch (t) {
    case Table::A1: return "A1";
    case Table::A2: return "A2";
    case Table::A3: return "A3";
  }
  return "?";
}

struct DecayRow {
  Table which;
  int a = -1;  // lane index; −1 when the table has no such index
  int b = -1;
  std::size_t index = 0;  // physical index k, l or m
  double magnitude = 0.0;
};

/// |element| against the physical index for every lane of one table that is
/// not identically zero.
inline std::vector<DecayRow> element_decay_table(const OscillatorMpsBundle& bundle, Table which) {
  const int n = bundle.params.n;
  const auto d = bundle.params.phys_cutoff;
  std::vector<DecayRow> rows;
  auto emit_lane = [&](int a, int b, auto&& value) {
    bool nonzero = false;
    for (std::size_t k = 0; k < d; ++k) nonzero = nonzero || value(k) != 0.0;
    if (!nonzero) return;
    for (std::size_t k = 0; k < d; ++k) rows.push_back({which, a, b, k, std::abs(value(k))});
  };
  switch (which) {
    case Table::A1:
      for (int a = 0; a <= n; ++a) emit_lane(a, -1, [&](std::size_t k) { return bundle.a1(static_cast<Eigen::Index>(k), a); });
      break;
    case Table::A2:
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b) emit_lane(a, b, [&](std::size_t k) { return bundle.a2[k](a, b); });
      break;
    case Table::A3:
      for (int b = 0; b <= n; ++b) emit_lane(-1, b, [&](std::size_t k) { return bundle.a3(static_cast<Eigen::Index>(k), b); });
      break;
  }
  return rows;
}

}  // namespace idmps
