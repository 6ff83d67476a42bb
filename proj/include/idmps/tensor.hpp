#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "idmps/error.hpp"

namespace idmps {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Shape = std::vector<std::size_t>;

/// Singular values at or below this fraction of the largest one are treated as
/// exact zeros and their modes dropped.
inline constexpr double default_rank_tol = 1e-12;

inline std::size_t shape_size(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

/// Coefficients c_{k_1..k_N} of a state on N sites, stored row-major with k_1
/// varying slowest.
class DenseTensor {
 public:
  DenseTensor(Shape shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) throw error(errc::empty_shape, "tensor needs at least one site");
    for (auto d : shape_)
      if (d == 0) throw error(errc::shape_mismatch, "physical dimensions must be positive");
    if (data_.size() != shape_size(shape_))
      throw error(errc::shape_mismatch, "data length " + std::to_string(data_.size()) +
                                            " does not match shape product " +
                                            std::to_string(shape_size(shape_)));
  }

  static DenseTensor zeros(Shape shape) {
    auto n = shape_size(shape);
    return DenseTensor(std::move(shape), std::vector<cplx>(n));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t sites() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != shape_.size()) throw error(errc::index_out_of_range, "wrong number of indices");
    std::size_t flat = 0;
    for (std::size_t n = 0; n < idx.size(); ++n) {
      if (idx[n] >= shape_[n]) throw error(errc::index_out_of_range, "index exceeds physical dimension");
      flat = flat * shape_[n] + idx[n];
    }
    return flat;
  }

  cplx at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }
  cplx& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }

  /// Hilbert-space norm of the state.
  double norm() const {
    double s = 0.0;
    for (const auto& c : data_) s += std::norm(c);
    return std::sqrt(s);
  }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape shape_;
  std::vector<cplx> data_;
};

inline DenseTensor tensor_new(Shape shape, std::span<const cplx> data) {
  return DenseTensor(std::move(shape), std::vector<cplx>(data.begin(), data.end()));
}

inline double tensor_norm(const DenseTensor& t) { return t.norm(); }

/// ⟨a|b⟩, antilinear in the first argument.
inline cplx inner(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw error(errc::shape_mismatch, "inner product of differently shaped tensors");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

/// ‖a − b‖.
inline double distance(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape()) throw error(errc::shape_mismatch, "distance between differently shaped tensors");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s);
}

/// Groups sites 1..cut into rows and cut+1..N into columns.
inline Matrix matricize(const DenseTensor& t, std::size_t cut) {
  const auto& shape = t.shape();
  if (cut < 1 || cut >= shape.size())
    throw error(errc::cut_out_of_range, "cut " + std::to_string(cut) + " outside 1.." +
                                            std::to_string(shape.size() - 1));
  const auto rows = shape_size(std::span(shape).first(cut));
  const auto cols = shape_size(std::span(shape).subspan(cut));
  Matrix m(rows, cols);
  auto d = t.data();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = d[r * cols + c];
  return m;
}

inline DenseTensor dematricize(const Matrix& m, Shape shape, std::size_t cut) {
  if (cut < 1 || cut >= shape.size()) throw error(errc::cut_out_of_range, "cut outside 1..N-1");
  const auto rows = shape_size(std::span(shape).first(cut));
  const auto cols = shape_size(std::span(shape).subspan(cut));
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
    throw error(errc::shape_mismatch, "matrix size does not match shape at this cut");
  std::vector<cplx> data(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) data[r * cols + c] = m(r, c);
  return DenseTensor(std::move(shape), std::move(data));
}

struct SvdResult {
  Matrix u;               // columns: left singular vectors
  std::vector<double> s;  // nonincreasing, all above the rank cut
  Matrix vh;              // rows: conjugated right singular vectors
  std::size_t rank = 0;
};

/// Thin SVD m = u·diag(s)·vh with numerically-zero modes removed.
///
/// Each (u column, vh row) pair is rotated so the largest-magnitude entry of
/// the u column is real and positive, which fixes the output up to rotations
/// inside degenerate blocks of s.
inline SvdResult svd(const Matrix& m, double rank_tol = default_rank_tol) {
  if (m.size() == 0) throw error(errc::shape_mismatch, "svd of an empty matrix");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success)
    throw error(errc::convergence_failure, "SVD did not converge");

  const auto& sv = solver.singularValues();
  std::size_t keep = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cutoff = rank_tol * sv(0);
    while (keep < static_cast<std::size_t>(sv.size()) && sv(keep) > cutoff) ++keep;
  }

  SvdResult out;
  out.rank = keep;
  out.u = solver.matrixU().leftCols(keep);
  out.vh = solver.matrixV().leftCols(keep).adjoint();
  out.s.assign(sv.data(), sv.data() + keep);

  for (std::size_t k = 0; k < keep; ++k) {
    Eigen::Index pivot = 0;
    out.u.col(k).cwiseAbs2().maxCoeff(&pivot);
    const cplx z = out.u(pivot, k);
    const cplx phase = std::conj(z) / std::abs(z);
    out.u.col(k) *= phase;
    out.vh.row(k) *= std::conj(phase);
  }
  return out;
}

/// ‖m − best rank-`keep` approximation‖_F given the singular values of m.
inline double low_rank_error(std::span<const double> s, std::size_t keep) {
  if (keep > s.size())
    throw error(errc::keep_out_of_range, "keep " + std::to_string(keep) + " exceeds " + std::to_string(s.size()));
  double tail = 0.0;
  for (std::size_t k = s.size(); k > keep; --k) tail += s[k - 1] * s[k - 1];
  return std::sqrt(tail);
}

}  // namespace idmps
