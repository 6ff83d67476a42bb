#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "idmps/tensor.hpp"

namespace idmps {

/// ψ = Σ_k λ_k |e_k⟩ ⊗ |f_k⟩ across the bipartition (1..cut):(cut+1..N).
struct SchmidtDecomposition {
  std::vector<double> coefficients;  // λ_k, strictly positive, nonincreasing
  Matrix left_vectors;               // column k = |e_k⟩
  Matrix right_vectors;              // column k = |f_k⟩
  std::size_t cut = 0;
};

inline SchmidtDecomposition schmidt_decompose(const DenseTensor& t, std::size_t cut,
                                              double rank_tol = default_rank_tol) {
  auto f = svd(matricize(t, cut), rank_tol);
  SchmidtDecomposition sd;
  sd.coefficients = std::move(f.s);
  sd.left_vectors = std::move(f.u);
  // ψ = U S V†, so row k of V† holds the components of |f_k⟩.
  sd.right_vectors = f.vh.transpose();
  sd.cut = cut;
  return sd;
}

/// Von Neumann entropy (nats) of the normalized weights p_k = λ_k² / Σλ².
inline double schmidt_entropy(std::span<const double> lambda) {
  double total = 0.0;
  for (double l : lambda) total += l * l;
  if (!(total > 0.0)) throw error(errc::zero_state, "entropy of a zero spectrum");
  double h = 0.0;
  for (double l : lambda) {
    const double p = l * l / total;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

inline double schmidt_entropy(const SchmidtDecomposition& sd) { return schmidt_entropy(sd.coefficients); }

inline DenseTensor schmidt_reconstruct(const SchmidtDecomposition& sd, Shape shape) {
  const auto k = sd.coefficients.size();
  if (static_cast<std::size_t>(sd.left_vectors.cols()) != k ||
      static_cast<std::size_t>(sd.right_vectors.cols()) != k)
    throw error(errc::shape_mismatch, "Schmidt vector count differs from coefficient count");
  if (sd.cut < 1 || sd.cut >= shape.size()) throw error(errc::shape_mismatch, "cut incompatible with shape");
  const auto rows = shape_size(std::span(shape).first(sd.cut));
  const auto cols = shape_size(std::span(shape).subspan(sd.cut));
  if (static_cast<std::size_t>(sd.left_vectors.rows()) != rows ||
      static_cast<std::size_t>(sd.right_vectors.rows()) != cols)
    throw error(errc::shape_mismatch, "Schmidt vector lengths do not match shape");

  Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(sd.coefficients.data(), k);
  Matrix m = sd.left_vectors * lambda.cast<cplx>().asDiagonal() * sd.right_vectors.transpose();
  return dematricize(m, std::move(shape), sd.cut);
}

}  // namespace idmps
