#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idmps/tensor.hpp"

namespace idmps {

/// Row-major reinterpretation of m as a rows×cols matrix (the element at
/// row-major position f keeps position f).
inline Matrix reshape(const Matrix& m, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(m.size()) != rows * cols)
    throw error(errc::shape_mismatch, "reshape changes the element count");
  Matrix out(rows, cols);
  const auto old_cols = static_cast<std::size_t>(m.cols());
  for (std::size_t f = 0; f < rows * cols; ++f) out(f / cols, f % cols) = m(f / old_cols, f % old_cols);
  return out;
}

/// One site of an open-boundary MPS: the matrices M^{(k)} of size
/// left_dim × right_dim for k < phys_dim.
class SiteTensor {
 public:
  SiteTensor() = default;
  SiteTensor(std::size_t phys_dim, std::size_t left_dim, std::size_t right_dim)
      : phys_(phys_dim), left_(left_dim), right_(right_dim), data_(phys_dim * left_dim * right_dim) {
    if (phys_ == 0 || left_ == 0 || right_ == 0)
      throw error(errc::dim_chain_broken, "site dimensions must be positive");
  }
  SiteTensor(std::size_t phys_dim, std::size_t left_dim, std::size_t right_dim, std::vector<cplx> data)
      : SiteTensor(phys_dim, left_dim, right_dim) {
    if (data.size() != data_.size()) throw error(errc::shape_mismatch, "site data length mismatch");
    data_ = std::move(data);
  }

  std::size_t phys_dim() const noexcept { return phys_; }
  std::size_t left_dim() const noexcept { return left_; }
  std::size_t right_dim() const noexcept { return right_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  cplx operator()(std::size_t k, std::size_t a, std::size_t b) const { return data_[(k * left_ + a) * right_ + b]; }
  cplx& operator()(std::size_t k, std::size_t a, std::size_t b) { return data_[(k * left_ + a) * right_ + b]; }

  Matrix slice(std::size_t k) const {
    if (k >= phys_) throw error(errc::index_out_of_range, "physical index out of range");
    Matrix m(left_, right_);
    for (std::size_t a = 0; a < left_; ++a)
      for (std::size_t b = 0; b < right_; ++b) m(a, b) = (*this)(k, a, b);
    return m;
  }

  /// Rows (a_left·d + k), columns a_right.
  Matrix left_unfold() const {
    Matrix m(left_ * phys_, right_);
    for (std::size_t k = 0; k < phys_; ++k)
      for (std::size_t a = 0; a < left_; ++a)
        for (std::size_t b = 0; b < right_; ++b) m(a * phys_ + k, b) = (*this)(k, a, b);
    return m;
  }

  /// Rows a_left, columns (k·right_dim + a_right).
  Matrix right_unfold() const {
    Matrix m(left_, phys_ * right_);
    for (std::size_t k = 0; k < phys_; ++k)
      for (std::size_t a = 0; a < left_; ++a)
        for (std::size_t b = 0; b < right_; ++b) m(a, k * right_ + b) = (*this)(k, a, b);
    return m;
  }

  static SiteTensor from_left_unfold(const Matrix& m, std::size_t phys_dim) {
    const auto left = static_cast<std::size_t>(m.rows()) / phys_dim;
    SiteTensor s(phys_dim, left, static_cast<std::size_t>(m.cols()));
    for (std::size_t k = 0; k < phys_dim; ++k)
      for (std::size_t a = 0; a < left; ++a)
        for (std::size_t b = 0; b < s.right_; ++b) s(k, a, b) = m(a * phys_dim + k, b);
    return s;
  }

  static SiteTensor from_right_unfold(const Matrix& m, std::size_t phys_dim) {
    const auto right = static_cast<std::size_t>(m.cols()) / phys_dim;
    SiteTensor s(phys_dim, static_cast<std::size_t>(m.rows()), right);
    for (std::size_t k = 0; k < phys_dim; ++k)
      for (std::size_t a = 0; a < s.left_; ++a)
        for (std::size_t b = 0; b < right; ++b) s(k, a, b) = m(a, k * right + b);
    return s;
  }

  friend bool operator==(const SiteTensor&, const SiteTensor&) = default;

 private:
  std::size_t phys_ = 0, left_ = 0, right_ = 0;
  std::vector<cplx> data_;
};

/// Diagonal bond weights Λ^{(n)}; an empty list stands for unit weights.
struct BondSpectrum {
  std::vector<double> values;
  friend bool operator==(const BondSpectrum&, const BondSpectrum&) = default;
};

enum class Form { unknown, left, right, mixed, vidal };

inline std::string to_string(Form f, std::size_t center = 0) {
  switch (f) {
    case Form::left: return "left";
    case Form::right: return "right";
    case Form::mixed: return "mixed:" + std::to_string(center);
    case Form::vidal: return "vidal";
    case Form::unknown: break;
  }
  return "unknown";
}

struct MatrixProductState {
  std::vector<SiteTensor> sites;
  std::vector<BondSpectrum> bonds;  // empty, or one entry per cut
  Form form = Form::unknown;
  std::size_t center = 0;  // mixed form: sites 1..center are left-normalized

  std::size_t size() const noexcept { return sites.size(); }

  Shape phys_dims() const {
    Shape d;
    for (const auto& s : sites) d.push_back(s.phys_dim());
    return d;
  }

  std::vector<std::size_t> bond_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n + 1 < sites.size(); ++n) out.push_back(sites[n].right_dim());
    return out;
  }

  bool has_weight(std::size_t cut) const { return !bonds.empty() && !bonds[cut - 1].values.empty(); }

  void check_chain() const {
    if (sites.empty()) throw error(errc::dim_chain_broken, "MPS has no sites");
    if (sites.front().left_dim() != 1 || sites.back().right_dim() != 1)
      throw error(errc::dim_chain_broken, "boundary sites must be row/column vectors");
    for (std::size_t n = 0; n + 1 < sites.size(); ++n)
      if (sites[n].right_dim() != sites[n + 1].left_dim())
        throw error(errc::dim_chain_broken, "bond " + std::to_string(n + 1) + " dimensions disagree");
    if (!bonds.empty()) {
      if (bonds.size() != sites.size() - 1) throw error(errc::dim_chain_broken, "need one bond spectrum per cut");
      for (std::size_t n = 0; n < bonds.size(); ++n)
        if (!bonds[n].values.empty() && bonds[n].values.size() != sites[n].right_dim())
          throw error(errc::dim_chain_broken, "bond " + std::to_string(n + 1) + " spectrum length mismatch");
    }
    if (form == Form::mixed && (center < 1 || center >= sites.size()))
      throw error(errc::center_out_of_range, "mixed center outside 1..N-1");
  }

  friend bool operator==(const MatrixProductState&, const MatrixProductState&) = default;
};

/// M^{(k)} x at one site: maps a right-bond vector to a left-bond vector.
inline Vector apply_site_map(const MatrixProductState& m, std::size_t site, const Vector& x, std::size_t k) {
  if (site >= m.size()) throw error(errc::index_out_of_range, "site index out of range");
  const auto& s = m.sites[site];
  if (k >= s.phys_dim()) throw error(errc::index_out_of_range, "physical index out of range");
  if (static_cast<std::size_t>(x.size()) != s.right_dim())
    throw error(errc::length_mismatch, "input length " + std::to_string(x.size()) + " != right bond " +
                                           std::to_string(s.right_dim()));
  Vector y = Vector::Zero(static_cast<Eigen::Index>(s.left_dim()));
  for (std::size_t a = 0; a < s.left_dim(); ++a) {
    cplx acc{};
    for (std::size_t b = 0; b < s.right_dim(); ++b) acc += s(k, a, b) * x(static_cast<Eigen::Index>(b));
    y(static_cast<Eigen::Index>(a)) = acc;
  }
  return y;
}

/// c_{k_1..k_N}: the boundary vector at site N is pushed through the interior
/// operators and closed by the boundary functional at site 1.
inline cplx coefficient(const MatrixProductState& m, std::span<const std::size_t> idx) {
  m.check_chain();
  if (idx.size() != m.size()) throw error(errc::index_out_of_range, "need one index per site");
  Vector x = Vector::Ones(1);
  for (std::size_t n = m.size(); n-- > 0;) {
    if (idx[n] >= m.sites[n].phys_dim()) throw error(errc::index_out_of_range, "physical index out of range");
    x = apply_site_map(m, n, x, idx[n]);
    if (n > 0 && m.has_weight(n)) {
      const auto& w = m.bonds[n - 1].values;
      for (std::size_t a = 0; a < w.size(); ++a) x(static_cast<Eigen::Index>(a)) *= w[a];
    }
  }
  return x(0);
}

inline DenseTensor to_dense(const MatrixProductState& m) {
  m.check_chain();
  // acc: rows = flattened physical prefix, columns = open right bond
  Matrix acc = m.sites.front().left_unfold();
  for (std::size_t n = 1; n < m.size(); ++n) {
    if (m.has_weight(n)) {
      const auto& w = m.bonds[n - 1].values;
      for (std::size_t a = 0; a < w.size(); ++a) acc.col(static_cast<Eigen::Index>(a)) *= w[a];
    }
    const auto& s = m.sites[n];
    Matrix next = acc * s.right_unfold();
    acc = reshape(next, static_cast<std::size_t>(acc.rows()) * s.phys_dim(), s.right_dim());
  }
  return DenseTensor(m.phys_dims(), std::vector<cplx>(acc.data(), acc.data() + acc.size()));
}

struct NormalizationReport {
  std::vector<std::optional<double>> residuals;  // per site; empty when not subject to the condition
  std::size_t worst_site = 0;
  double worst_residual = 0.0;
  std::optional<std::size_t> boundary_site;  // site whose condition is the scalar ‖ψ‖² one
  double boundary_norm2 = 0.0;               // its Σ|M|²
  bool boundary_checked = false;
  bool passed = true;
};

namespace detail {

inline double identity_residual(const Matrix& g) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) r = std::max(r, std::abs(g(i, j) - cplx(i == j ? 1.0 : 0.0)));
  return r;
}

inline double left_residual(const SiteTensor& s) {
  Matrix l = s.left_unfold();
  return identity_residual(l.adjoint() * l);
}

inline double right_residual(const SiteTensor& s) {
  Matrix r = s.right_unfold();
  return identity_residual(r * r.adjoint());
}

inline double squared_norm(const SiteTensor& s) {
  double t = 0.0;
  for (const auto& c : s.data()) t += std::norm(c);
  return t;
}

inline void finish(NormalizationReport& rep, double tol, bool assume_normalized) {
  rep.passed = true;
  rep.worst_residual = 0.0;
  for (std::size_t n = 0; n < rep.residuals.size(); ++n) {
    if (!rep.residuals[n]) continue;
    const bool boundary = rep.boundary_site && *rep.boundary_site == n;
    if (boundary && !assume_normalized) continue;
    if (*rep.residuals[n] > rep.worst_residual || !(*rep.residuals[n] == *rep.residuals[n])) {
      rep.worst_residual = *rep.residuals[n];
      rep.worst_site = n;
    }
    if (!(*rep.residuals[n] <= tol)) rep.passed = false;
  }
  rep.boundary_checked = rep.boundary_site.has_value() && assume_normalized;
}

}  // namespace detail

/// Σ_k A^{(k)†}A^{(k)} = 1 on the sites a left-normalized claim covers. The
/// last site of a left-canonical chain only satisfies the scalar condition
/// Σ|A|² = ‖ψ‖², which counts toward `passed` only if `assume_normalized`.
inline NormalizationReport verify_left_normalized(const MatrixProductState& m, double tol = 1e-10,
                                                  bool assume_normalized = false) {
  m.check_chain();
  const auto n_sites = m.size();
  NormalizationReport rep;
  rep.residuals.resize(n_sites);
  std::size_t last = n_sites - 1;  // exclusive end of the bulk range
  if (m.form == Form::mixed) {
    last = m.center;
  } else {
    rep.boundary_site = n_sites - 1;
    const auto& b = m.sites.back();
    rep.boundary_norm2 = detail::squared_norm(b);
    rep.residuals.back() = std::abs(rep.boundary_norm2 - 1.0);
  }
  for (std::size_t n = 0; n < last; ++n) rep.residuals[n] = detail::left_residual(m.sites[n]);
  detail::finish(rep, tol, assume_normalized);
  return rep;
}

/// Σ_k B^{(k)}B^{(k)†} = 1 on the sites a right-normalized claim covers; the
/// first site carries the scalar ‖ψ‖² condition.
inline NormalizationReport verify_right_normalized(const MatrixProductState& m, double tol = 1e-10,
                                                   bool assume_normalized = false) {
  m.check_chain();
  const auto n_sites = m.size();
  NormalizationReport rep;
  rep.residuals.resize(n_sites);
  std::size_t first = 1;
  if (m.form == Form::mixed) {
    first = m.center;
  } else {
    rep.boundary_site = 0;
    rep.boundary_norm2 = detail::squared_norm(m.sites.front());
    rep.residuals.front() = std::abs(rep.boundary_norm2 - 1.0);
  }
  for (std::size_t n = first; n < n_sites; ++n) rep.residuals[n] = detail::right_residual(m.sites[n]);
  detail::finish(rep, tol, assume_normalized);
  return rep;
}

struct VidalReport {
  bool passed = false;
  std::vector<double> left_residuals;   // per cut: ‖L†L − 1‖_max of the left Schmidt family
  std::vector<double> right_residuals;  // per cut: ‖RR† − 1‖_max of the right Schmidt family
  double norm_residual = 0.0;           // spread of Σλ² across cuts, relative
};

/// Checks that at every cut the Γ·Λ chains to the left and right of the bond
/// contract to orthonormal families, so the bond weights form a Schmidt
/// decomposition there, and that all cuts agree on ‖ψ‖² = Σλ².
inline VidalReport verify_vidal(const MatrixProductState& m, double tol = 1e-8) {
  m.check_chain();
  if (m.form != Form::vidal) throw error(errc::form_mismatch, "MPS is not tagged as Vidal form");
  const auto n_sites = m.size();
  if (n_sites > 1 && m.bonds.size() != n_sites - 1) throw error(errc::form_mismatch, "Vidal form needs every bond spectrum");
  for (const auto& b : m.bonds)
    if (b.values.empty()) throw error(errc::form_mismatch, "Vidal form needs every bond spectrum");

  VidalReport rep;
  const std::size_t cuts = n_sites - 1;
  rep.left_residuals.resize(cuts);
  rep.right_residuals.resize(cuts);

  bool positive = true;
  for (const auto& b : m.bonds)
    for (double v : b.values) positive = positive && v > 0.0;

  Matrix left = m.sites.front().left_unfold();
  for (std::size_t cut = 1; cut <= cuts; ++cut) {
    rep.left_residuals[cut - 1] = detail::identity_residual(left.adjoint() * left);
    if (cut == cuts) break;
    Matrix weighted = left;
    const auto& w = m.bonds[cut - 1].values;
    for (std::size_t a = 0; a < w.size(); ++a) weighted.col(static_cast<Eigen::Index>(a)) *= w[a];
    const auto& s = m.sites[cut];
    Matrix next = weighted * s.right_unfold();
    left = reshape(next, static_cast<std::size_t>(weighted.rows()) * s.phys_dim(), s.right_dim());
  }

  Matrix right = m.sites.back().right_unfold();
  for (std::size_t cut = cuts; cut >= 1; --cut) {
    rep.right_residuals[cut - 1] = detail::identity_residual(right * right.adjoint());
    if (cut == 1) break;
    const auto& s = m.sites[cut - 1];
    Matrix weighted = s.left_unfold();
    const auto& w = m.bonds[cut - 1].values;
    for (std::size_t a = 0; a < w.size(); ++a) weighted.col(static_cast<Eigen::Index>(a)) *= w[a];
    Matrix next = weighted * right;  // rows (a_left·d + k), cols suffix
    right = reshape(next, s.left_dim(), s.phys_dim() * static_cast<std::size_t>(right.cols()));
  }

  if (cuts > 0) {
    auto sq = [](const BondSpectrum& b) {
      double t = 0.0;
      for (double v : b.values) t += v * v;
      return t;
    };
    const double ref = sq(m.bonds.front());
    for (const auto& b : m.bonds) rep.norm_residual = std::max(rep.norm_residual, std::abs(sq(b) - ref) / ref);
  }

  rep.passed = positive && rep.norm_residual <= tol;
  for (std::size_t c = 0; c < cuts; ++c)
    rep.passed = rep.passed && rep.left_residuals[c] <= tol && rep.right_residuals[c] <= tol;
  return rep;
}

}  // namespace idmps
