#pragma once

#include <string>
#include <vector>

#include "idmps/canonical.hpp"

namespace idmps {

// Dense state -> MPS. Each construction factorizes the state one cut at a
// time by SVD. A nonempty policy is applied to the exact result with
// truncate(), the chain is brought back to the requested gauge, and the
// discarded weight per cut is written to `errors` (index cut−1) when
// requested.

namespace detail {

inline void require_nonzero(const DenseTensor& t) {
  if (!(t.norm() > 0.0)) throw error(errc::zero_state, "cannot decompose the zero vector");
}

inline void store_errors(std::vector<double>* out, std::vector<double> errors) {
  if (out) *out = std::move(errors);
}

/// Right-canonical sweep over sites last..first+1 of a block whose rows are
/// the physical prefix up to site `last`. Returns the leftover block λ·x.
inline Matrix sweep_right(Matrix cur, const Shape& d, std::size_t first, std::size_t last,
                          std::vector<SiteTensor>& sites, double rank_tol) {
  for (std::size_t n = last; n > first; --n) {
    auto f = svd(cur, rank_tol);
    if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
    sites[n] = SiteTensor::from_right_unfold(f.vh, d[n]);
    Matrix rem = scale_cols(f.u, f.s);
    cur = reshape(rem, static_cast<std::size_t>(rem.rows()) / d[n - 1], d[n - 1] * f.rank);
  }
  return cur;
}

/// Left-canonical sweep over sites first..last−1 of a block whose columns are
/// the physical suffix (and possibly a trailing bond). Returns the leftover
/// (bond·d_last) × rest matrix.
inline Matrix sweep_left(Matrix cur, const Shape& d, std::size_t first, std::size_t last,
                         std::vector<SiteTensor>& sites, double rank_tol) {
  for (std::size_t n = first; n < last; ++n) {
    auto f = svd(cur, rank_tol);
    if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
    sites[n] = SiteTensor::from_left_unfold(f.u, d[n]);
    Matrix rem = scale_rows(f.vh, f.s);
    cur = reshape(rem, f.rank * d[n + 1], static_cast<std::size_t>(rem.cols()) / d[n + 1]);
  }
  return cur;
}

inline Matrix as_row(const DenseTensor& t, std::size_t rows) {
  return reshape(Eigen::Map<const Matrix>(t.data().data(), 1, static_cast<Eigen::Index>(t.size())), rows,
                 t.size() / rows);
}

}  // namespace detail

/// Sites 2..N right-normalized; site 1 carries the weights, so
/// Σ|B^{(k_1)}|² = ‖ψ‖².
inline MatrixProductState from_dense_right_canonical(const DenseTensor& t, const TruncationPolicy& policy = {},
                                                     double rank_tol = default_rank_tol,
                                                     std::vector<double>* errors = nullptr) {
  policy.validate();
  detail::require_nonzero(t);
  const auto& d = t.shape();
  const auto n_sites = d.size();
  MatrixProductState m;
  m.form = Form::right;
  m.sites.resize(n_sites);
  Matrix rest = detail::sweep_right(detail::as_row(t, t.size() / d.back()), d, 0, n_sites - 1, m.sites, rank_tol);
  m.sites[0] = SiteTensor::from_right_unfold(rest, d[0]);
  if (policy.empty()) {
    detail::store_errors(errors, std::vector<double>(n_sites - 1, 0.0));
    return m;
  }
  auto tr = truncate(m, policy, rank_tol);
  if (tr.mps.form != Form::right) {
    detail::right_orthogonalize(tr.mps.sites, rank_tol);
    tr.mps.form = Form::right;
  }
  detail::store_errors(errors, std::move(tr.errors));
  return std::move(tr.mps);
}

/// Sites 1..N−1 left-normalized; site N carries the weights.
inline MatrixProductState from_dense_left_canonical(const DenseTensor& t, const TruncationPolicy& policy = {},
                                                    double rank_tol = default_rank_tol,
                                                    std::vector<double>* errors = nullptr) {
  policy.validate();
  detail::require_nonzero(t);
  const auto& d = t.shape();
  const auto n_sites = d.size();
  MatrixProductState m;
  m.form = Form::left;
  m.sites.resize(n_sites);
  Matrix rest = detail::sweep_left(detail::as_row(t, d.front()), d, 0, n_sites - 1, m.sites, rank_tol);
  m.sites[n_sites - 1] = SiteTensor::from_left_unfold(rest, d.back());
  if (policy.empty()) {
    detail::store_errors(errors, std::vector<double>(n_sites - 1, 0.0));
    return m;
  }
  auto tr = truncate(m, policy, rank_tol);
  detail::store_errors(errors, std::move(tr.errors));
  return std::move(tr.mps);
}

/// A·…·A D B·…·B with sites 1..center left-normalized, sites center+1..N
/// right-normalized and D the Schmidt spectrum across the center cut.
///
/// The right part comes from a right-canonical sweep down to the center; the
/// left block λ·x it leaves behind is then factorized left to right, and the
/// final SVD at the center splits off D (its unitary factor is pushed into
/// the first B site).
inline MatrixProductState from_dense_mixed_canonical(const DenseTensor& t, std::size_t center,
                                                     const TruncationPolicy& policy = {},
                                                     double rank_tol = default_rank_tol,
                                                     std::vector<double>* errors = nullptr) {
  const auto& d = t.shape();
  const auto n_sites = d.size();
  if (center < 1 || center >= n_sites)
    throw error(errc::center_out_of_range,
                "center " + std::to_string(center) + " outside 1.." + std::to_string(n_sites - 1));
  policy.validate();
  detail::require_nonzero(t);

  MatrixProductState m;
  m.form = Form::mixed;
  m.center = center;
  m.sites.resize(n_sites);

  // Leaves (prefix up to site `center`) × (d_center · bond) with the bond last.
  Matrix block = detail::sweep_right(detail::as_row(t, t.size() / d.back()), d, center - 1, n_sites - 1, m.sites,
                                     rank_tol);
  const auto bond = static_cast<std::size_t>(block.cols()) / d[center - 1];
  Matrix lam_x = reshape(block, static_cast<std::size_t>(block.rows()) * d[center - 1], bond);

  Matrix cur = reshape(lam_x, d[0], static_cast<std::size_t>(lam_x.size()) / d[0]);
  cur = detail::sweep_left(cur, d, 0, center - 1, m.sites, rank_tol);

  auto f = svd(cur, rank_tol);
  if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
  m.sites[center - 1] = SiteTensor::from_left_unfold(f.u, d[center - 1]);
  auto& b = m.sites[center];
  b = SiteTensor::from_right_unfold(f.vh * b.right_unfold(), b.phys_dim());
  m.bonds.assign(n_sites - 1, BondSpectrum{});
  m.bonds[center - 1].values = std::move(f.s);
  if (policy.empty()) {
    detail::store_errors(errors, std::vector<double>(n_sites - 1, 0.0));
    return m;
  }
  auto tr = truncate(m, policy, rank_tol);
  detail::store_errors(errors, std::move(tr.errors));
  if (tr.mps.form == Form::mixed) return std::move(tr.mps);
  return detail::mixed_from_left(std::move(tr.mps.sites), center, rank_tol);
}

/// Γ^{(1)} Λ^{(1)} Γ^{(2)} … Λ^{(N−1)} Γ^{(N)} built from the Schmidt
/// decompositions of every cut: Γ^{(1)} holds the left Schmidt vectors of cut
/// 1, Γ^{(N)} the right Schmidt vectors of cut N−1, and an interior
/// Γ^{(k)}_{a,b} is the overlap τ^{(k)}_{a,b} = ⟨k, y^{(n+1)}_b | y^{(n)}_a⟩
/// divided by λ^{(n+1)}_b. Modes with λ below the rank cut never appear, so
/// the division is always defined.
inline MatrixProductState from_dense_vidal(const DenseTensor& t, const TruncationPolicy& policy = {},
                                           double rank_tol = default_rank_tol, std::vector<double>* errors = nullptr) {
  policy.validate();
  detail::require_nonzero(t);
  const auto& d = t.shape();
  const auto n_sites = d.size();

  MatrixProductState m;
  m.form = Form::vidal;
  if (n_sites == 1) {
    m.sites.emplace_back(d[0], 1, 1, std::vector<cplx>(t.data().begin(), t.data().end()));
    detail::store_errors(errors, {});
    return m;
  }

  std::vector<SvdResult> cuts;
  for (std::size_t cut = 1; cut < n_sites; ++cut) {
    cuts.push_back(svd(matricize(t, cut), rank_tol));
    if (cuts.back().rank == 0) throw error(errc::zero_state, "state vanishes");
  }

  m.sites.resize(n_sites);
  m.sites[0] = SiteTensor::from_left_unfold(cuts[0].u, d[0]);
  for (std::size_t n = 1; n + 1 < n_sites; ++n) {
    const auto& in = cuts[n - 1].vh;  // rows: y_a over sites n..N−1
    const auto& out = cuts[n].vh;     // rows: y_b over sites n+1..N−1
    const auto tail = static_cast<Eigen::Index>(out.cols());
    const auto& lam = cuts[n].s;
    SiteTensor g(d[n], cuts[n - 1].rank, cuts[n].rank);
    for (std::size_t k = 0; k < d[n]; ++k) {
      Matrix tau = in.middleCols(static_cast<Eigen::Index>(k) * tail, tail) * out.adjoint();
      for (std::size_t a = 0; a < g.left_dim(); ++a)
        for (std::size_t b = 0; b < g.right_dim(); ++b)
          g(k, a, b) = tau(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / lam[b];
    }
    m.sites[n] = std::move(g);
  }
  m.sites[n_sites - 1] = SiteTensor::from_right_unfold(cuts.back().vh, d.back());
  for (auto& c : cuts) m.bonds.push_back(BondSpectrum{std::move(c.s)});

  if (policy.empty()) {
    detail::store_errors(errors, std::vector<double>(n_sites - 1, 0.0));
    return m;
  }
  auto tr = truncate(m, policy, rank_tol);
  detail::store_errors(errors, std::move(tr.errors));
  return std::move(tr.mps);
}

}  // namespace idmps
