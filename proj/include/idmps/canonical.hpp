#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "idmps/mps.hpp"
#include "idmps/schmidt.hpp"

namespace idmps {

/// Bond truncation: keep at most `max_bond` values per cut and drop the
/// longest tail whose weight √(Σλ²) stays within `weight_tol`. At least one
/// value always survives.
struct TruncationPolicy {
  std::optional<std::size_t> max_bond;
  std::optional<double> weight_tol;

  bool empty() const noexcept { return !max_bond && !weight_tol; }

  void validate() const {
    if (max_bond && *max_bond < 1) throw error(errc::invalid_params, "max_bond must be at least 1");
    if (weight_tol && !(*weight_tol >= 0.0)) throw error(errc::invalid_params, "weight_tol must be nonnegative");
  }

  std::size_t keep(std::span<const double> s) const {
    std::size_t k = s.size();
    if (max_bond) k = std::min(k, *max_bond);
    if (weight_tol && k > 1) {
      std::size_t k_eps = k;
      while (k_eps > 1 && low_rank_error(s, k_eps - 1) <= *weight_tol) --k_eps;
      k = k_eps;
    }
    return k;
  }
};

namespace detail {

inline Matrix scale_rows(Matrix m, std::span<const double> w) {
  for (std::size_t a = 0; a < w.size(); ++a) m.row(static_cast<Eigen::Index>(a)) *= w[a];
  return m;
}

inline Matrix scale_cols(Matrix m, std::span<const double> w) {
  for (std::size_t a = 0; a < w.size(); ++a) m.col(static_cast<Eigen::Index>(a)) *= w[a];
  return m;
}

/// The site chain with every bond weight multiplied into the site on its left.
inline std::vector<SiteTensor> absorb_bonds(const MatrixProductState& m) {
  std::vector<SiteTensor> chain = m.sites;
  for (std::size_t cut = 1; cut < m.size(); ++cut) {
    if (!m.has_weight(cut)) continue;
    auto& s = chain[cut - 1];
    s = SiteTensor::from_left_unfold(scale_cols(s.left_unfold(), m.bonds[cut - 1].values), s.phys_dim());
  }
  return chain;
}

/// Right-to-left sweep leaving sites 2..N right-normalized; the norm ends up
/// on site 1. Returns the singular values found at each cut (index cut−1),
/// which are Schmidt values whenever the chain to their left is an isometry.
inline std::vector<std::vector<double>> right_orthogonalize(std::vector<SiteTensor>& chain, double rank_tol) {
  std::vector<std::vector<double>> spectra(chain.size() > 0 ? chain.size() - 1 : 0);
  for (std::size_t n = chain.size(); n-- > 1;) {
    auto f = svd(chain[n].right_unfold(), rank_tol);
    if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
    chain[n] = SiteTensor::from_right_unfold(f.vh, chain[n].phys_dim());
    Matrix us = scale_cols(f.u, f.s);
    auto& prev = chain[n - 1];
    prev = SiteTensor::from_left_unfold(prev.left_unfold() * us, prev.phys_dim());
    spectra[n - 1] = std::move(f.s);
  }
  return spectra;
}

/// Left-to-right sweep leaving sites 1..N−1 left-normalized, truncating each
/// cut by `policy`, or to `keeps[cut−1]` values when `keeps` is given. Returns
/// the weight discarded at each cut from the state as it stands when the
/// sweep reaches that cut.
inline std::vector<double> left_orthogonalize(std::vector<SiteTensor>& chain, const TruncationPolicy& policy,
                                              double rank_tol, const std::vector<std::size_t>* keeps = nullptr) {
  std::vector<double> errors(chain.size() > 0 ? chain.size() - 1 : 0, 0.0);
  for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
    auto f = svd(chain[n].left_unfold(), rank_tol);
    if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
    const auto keep = keeps ? std::min((*keeps)[n], f.rank) : policy.keep(f.s);
    errors[n] = low_rank_error(f.s, keep);
    chain[n] = SiteTensor::from_left_unfold(f.u.leftCols(keep), chain[n].phys_dim());
    Matrix sv = scale_rows(f.vh.topRows(keep), std::span(f.s).first(keep));
    auto& next = chain[n + 1];
    next = SiteTensor::from_right_unfold(sv * next.right_unfold(), next.phys_dim());
  }
  return errors;
}

/// Right-to-left sweep over sites N..center+1 of a left-canonical chain; the
/// singular values at the center cut become the stored weights.
inline MatrixProductState mixed_from_left(std::vector<SiteTensor> chain, std::size_t center, double rank_tol) {
  MatrixProductState m;
  m.form = Form::mixed;
  m.center = center;
  m.bonds.assign(chain.size() - 1, BondSpectrum{});
  for (std::size_t n = chain.size(); n-- > center;) {
    auto f = svd(chain[n].right_unfold(), rank_tol);
    if (f.rank == 0) throw error(errc::zero_state, "state vanishes");
    chain[n] = SiteTensor::from_right_unfold(f.vh, chain[n].phys_dim());
    auto& prev = chain[n - 1];
    if (n == center) {
      prev = SiteTensor::from_left_unfold(prev.left_unfold() * f.u, prev.phys_dim());
      m.bonds[center - 1].values = std::move(f.s);
    } else {
      prev = SiteTensor::from_left_unfold(prev.left_unfold() * scale_cols(f.u, f.s), prev.phys_dim());
    }
  }
  m.sites = std::move(chain);
  return m;
}

}  // namespace detail

/// Vidal form of any chain, computed by site-local sweeps: left-orthogonalize,
/// then a right-to-left SVD sweep whose singular values are the Schmidt
/// coefficients of each cut; Γ follows by dividing the weights back out.
inline MatrixProductState to_vidal(const MatrixProductState& m, double rank_tol = default_rank_tol) {
  m.check_chain();
  auto chain = detail::absorb_bonds(m);
  detail::left_orthogonalize(chain, TruncationPolicy{}, rank_tol);
  auto spectra = detail::right_orthogonalize(chain, rank_tol);

  MatrixProductState out;
  out.form = Form::vidal;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    if (n + 1 < chain.size()) {
      std::vector<double> inv(spectra[n].size());
      std::transform(spectra[n].begin(), spectra[n].end(), inv.begin(), [](double v) { return 1.0 / v; });
      out.sites.push_back(SiteTensor::from_left_unfold(detail::scale_cols(chain[n].left_unfold(), inv),
                                                       chain[n].phys_dim()));
      out.bonds.push_back(BondSpectrum{spectra[n]});
    } else {
      out.sites.push_back(chain[n]);
    }
  }
  return out;
}

struct TruncationResult {
  MatrixProductState mps;
  std::vector<double> errors;  // discarded Schmidt weight per cut
};

/// Truncates every cut by `policy`. The number of values kept at each cut and
/// the reported error are fixed by the Schmidt spectrum of the input state
/// there; the truncation itself is one left-to-right sweep over the
/// right-normalized chain, so ‖ψ − ψ_trunc‖ ≤ √(Σ errors²) with equality when a
/// single cut loses weight. Vidal input gives Vidal output; anything else comes
/// back left-canonical. When nothing is discarded the input is returned
/// untouched.
inline TruncationResult truncate(const MatrixProductState& m, const TruncationPolicy& policy,
                                 double rank_tol = default_rank_tol) {
  if (policy.empty()) throw error(errc::policy_empty, "truncation policy sets neither max_bond nor weight_tol");
  policy.validate();
  m.check_chain();

  auto chain = detail::absorb_bonds(m);
  detail::left_orthogonalize(chain, TruncationPolicy{}, rank_tol);
  const auto spectra = detail::right_orthogonalize(chain, rank_tol);

  std::vector<std::size_t> keeps;
  std::vector<double> errors;
  for (const auto& s : spectra) {
    keeps.push_back(policy.keep(s));
    errors.push_back(low_rank_error(s, keeps.back()));
  }
  const bool unchanged = std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0.0; });
  if (unchanged) return {m, errors};

  detail::left_orthogonalize(chain, TruncationPolicy{}, rank_tol, &keeps);
  MatrixProductState out;
  out.sites = std::move(chain);
  out.form = Form::left;
  if (m.form == Form::vidal) out = to_vidal(out, rank_tol);
  return {std::move(out), std::move(errors)};
}

/// Schmidt coefficients across (1..cut):(cut+1..N).
inline BondSpectrum bond_spectrum(const MatrixProductState& m, std::size_t cut, double rank_tol = default_rank_tol) {
  m.check_chain();
  if (cut < 1 || cut >= m.size())
    throw error(errc::cut_out_of_range, "cut " + std::to_string(cut) + " outside 1.." + std::to_string(m.size() - 1));
  if (m.form == Form::vidal && m.has_weight(cut)) return m.bonds[cut - 1];
  if (m.form == Form::mixed && cut == m.center && m.has_weight(cut)) return m.bonds[cut - 1];
  return to_vidal(m, rank_tol).bonds[cut - 1];
}

inline double entanglement_entropy(const MatrixProductState& m, std::size_t cut, double rank_tol = default_rank_tol) {
  return schmidt_entropy(bond_spectrum(m, cut, rank_tol).values);
}

}  // namespace idmps
