// Decomposes a three-qubit GHZ state in all four canonical forms and prints
// the bond spectra, the normalization residuals and a χ = 1 truncation.

#include <cmath>
#include <cstdio>

#include "idmps/idmps.hpp"

int main() {
  using namespace idmps;
  auto ghz = DenseTensor::zeros({2, 2, 2});
  ghz.data()[0] = ghz.data()[7] = 1.0 / std::sqrt(2.0);

  const auto left = from_dense_left_canonical(ghz);
  const auto right = from_dense_right_canonical(ghz);
  const auto mixed = from_dense_mixed_canonical(ghz, 1);
  const auto vidal = from_dense_vidal(ghz);

  for (const auto* m : {&left, &right, &mixed, &vidal}) {
    std::printf("%-8s residual %.2e  bonds", to_string(m->form, m->center).c_str(), distance(to_dense(*m), ghz));
    for (std::size_t cut = 1; cut < m->size(); ++cut) {
      std::printf("  [");
      for (double v : bond_spectrum(*m, cut).values) std::printf(" %.6f", v);
      std::printf(" ]");
    }
    std::printf("\n");
  }

  std::printf("left-normalized: %s\n", verify_left_normalized(left, 1e-10, true).passed ? "yes" : "no");
  std::printf("vidal conditions: %s\n", verify_vidal(vidal).passed ? "yes" : "no");

  TruncationPolicy chi1;
  chi1.max_bond = 1;
  const auto cut = truncate(left, chi1);
  std::printf("chi=1 errors:");
  for (double e : cut.errors) std::printf(" %.8f", e);
  std::printf("  dense distance %.8f\n", distance(to_dense(cut.mps), ghz));
}
