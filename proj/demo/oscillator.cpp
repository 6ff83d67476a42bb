// Builds the three-oscillator eigenstate MPS and prints its norm, its bond
// spectra next to √α and √γ, and the first few A1 magnitudes.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "idmps/idmps.hpp"

int main(int argc, char** argv) {
  using namespace idmps;
  OscillatorParams p;
  p.n = argc > 1 ? std::atoi(argv[1]) : 2;
  p.omega_tilde = argc > 2 ? std::atof(argv[2]) : 1.3;
  p.theta = 0.7;
  p.phi = 0.3;
  p.varphi = 1.1;
  p.phys_cutoff = static_cast<std::size_t>(argc > 3 ? std::atoi(argv[3]) : 24);

  const auto bundle = build_bundle(p);
  std::printf("n=%d omega=%.3f d=%zu  |psi| = %.12f\n", p.n, p.omega_tilde, p.phys_cutoff,
              to_dense(bundle.mps).norm());

  for (std::size_t cut = 1; cut <= 2; ++cut) {
    std::printf("cut %zu schmidt:", cut);
    for (double v : bond_spectrum(bundle.mps, cut).values) std::printf(" %.6f", v);
    std::printf("\n");
  }
  std::printf("sqrt alpha:");
  for (int a = 0; a <= p.n; ++a) std::printf(" %.6f", std::sqrt(alpha(a, p)));
  std::printf("\nsqrt gamma:");
  for (int b = 0; b <= p.n; ++b) std::printf(" %.6f", std::sqrt(gamma(b, p)));
  std::printf("\n");

  std::printf("psi(0.3,-0.2,0.5): mps %.10f  direct %.10f\n", wavefunction_mps(bundle, 0.3, -0.2, 0.5),
              wavefunction_direct(p, 0.3, -0.2, 0.5));

  for (const auto& row : element_decay_table(bundle, Table::A1))
    if (row.a == 0 && row.index < 12) std::printf("A1 a=0 k=%2zu  %.3e\n", row.index, row.magnitude);
}
