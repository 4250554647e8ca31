// Walks the Terfenol-D superlattice through the whole chain: gap, bound
// surface mode, quantization, NV-ensemble coupling and the swap gate.

#include <cstdio>

#include "sphp/sphp.hpp"

int main() {
  using namespace sphp;
  const SuperlatticeSpec spec(terfenol_d(), 0.5e-6);
  const auto& r = spec.resonances();
  std::printf("gap: %.4f - %.4f GHz\n", r.perp_L / constants::two_pi / 1e9, r.perp_o / constants::two_pi / 1e9);

  const auto seg = bound_segment(spec);
  std::printf("bound segment: %.4f - %.4f GHz\n", seg.omega_lo / constants::two_pi / 1e9,
              seg.omega_hi / constants::two_pi / 1e9);

  SpinEnsembleSpec ens;
  ens.n = 2e24;
  ens.h = 1e-3;
  ens.l = 20e-3;
  ens.gamma_s = dephasing_estimate(1e25);
  const auto design = optimal_coupling(spec, NvParams{}, ens);
  const auto& p = design.point;
  std::printf("design point: %.4f GHz, wavelength %.3f mm, mode length %.4g m\n",
              p.omega / constants::two_pi / 1e9, 1e3 * constants::two_pi / p.kp.real(), design.mode.mode_length);
  std::printf("G = 2 pi x %.3f MHz (quadrature %.3f MHz)\n", design.coupling.G / constants::two_pi / 1e6,
              design.coupling.G_quadrature / constants::two_pi / 1e6);

  const double kappa = 1e-3 * r.perp_L;
  const CoupledSystem sys{p.omega, p.omega, design.coupling.G, ens.gamma_s, kappa};
  const auto c = cooperativity(sys);
  std::printf("gamma_s = %.3g rad/s, kappa = %.3g rad/s, C = %.3g, strong coupling: %s\n", ens.gamma_s, kappa, c.C,
              c.strong ? "yes" : "no");
  std::printf("swap fidelity: %.4f\n", swap_fidelity(sys));
}
