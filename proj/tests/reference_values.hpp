// Generated by tests/oracles/generate_reference.py. Do not edit by hand.
#pragma once

namespace sphp::reference {

// Terfenol-D, d = 0.5 um, lossless
inline constexpr double omega_perp_L = 1.5337704369425911776e+10;
inline constexpr double omega_perp_o = 1.5428144531549213594e+10;
inline constexpr double omega_par_L = 1.5337704369425911776e+10;
inline constexpr double omega_par_o = 1.5696338706009356996e+10;
inline constexpr double mu_perp_static = 5.0163156280966874415;
inline constexpr double omega_mid = 1.5382924450487562685e+10;  // (omega_perp_L + omega_perp_o) / 2
inline constexpr double mu_perp_mid = -4.9722716532068000496;
inline constexpr double mu_par_mid = -3.476211603666830323e+1;
inline constexpr double omega_asymptote = 1.5426958685194887141e+10;  // mu_perp * mu_par = 1

// Dispersion at midgap
inline constexpr double kp_mid = 7.3160685808035574728e+2;
inline constexpr double k1z_abs_mid = 7.2980523593579131893e+2;
inline constexpr double k2z_abs_mid = 3.6287898870054358622e+3;
inline constexpr double omega_below_L = 1.5322366665056485864e+10;  // omega_perp_L * (1 - 1e-3)
inline constexpr double k1z_sq_below_L = 7.6193602707766382303e+4;
inline constexpr double omega_at_6mm = 1.5398273883531336169e+10;  // kp = 2 pi / 6 mm
inline constexpr double vg_mid = 6.1370910753819738638e+4;
inline constexpr double propagation_length_mid = 4.0013100575961123199e-3;  // kappa = 1e-3 omega_perp_L
inline constexpr double wavelength_mid = 8.5881990276387968553e-3;

// Quantization at midgap
inline constexpr double ratio_hx_h1z_mid = 9.9508095412759424337e-1;
inline constexpr double ratio_hx_h2z_mid = 1.2024605131392455171e+3;
inline constexpr double F_mid = 3.4146653528419352136e+2;
inline constexpr double M_mid = 3.4012932956823915966e+3;
inline constexpr double mode_length_mid = 2.3452183874641023461e-1;
inline constexpr double b_probe_z = 5.0e-4;
inline constexpr double b_probe_x = 1.4473735423400172134e-15;  // real x component at z = 0.5 mm
inline constexpr double b_probe_z_imag = 1.4509465781267402552e-15;  // imaginary z component at z = 0.5 mm

// Spin coupling
inline constexpr double g0_mid = 2.5927594361341916601e-4;
inline constexpr double G_mid = 4.2045250360784057651e+6;  // n = 2e24 m^-3, h = 1 mm, resonant fraction 1/4
inline constexpr double gamma_dipolar_1e25 = 3.2622629049162324725e+6;  // n_N = 1e25 m^-3
inline constexpr double zeeman_B_3p4GHz = 1.8933649778780412487e-2;
inline constexpr double cooperativity_example = 7.9411764705882352941;  // G = 9, gamma = 3, kappa = 3.4 (units of 2 pi MHz)

// Lindblad single-excitation oracle (superoperator exponential)
inline constexpr double swap_fidelity_rates_0p1 = 9.0723614357811710134e-1;  // G = 1, gamma_s = kappa = 0.1, T = pi / 2
inline constexpr double lossy_swap_pop_magnon_t3 = 6.0001163542833927065e-2;  // G = 2 pi 9 MHz, gamma_s = 0.2 G, kappa = 0.3 G, t = 3 / G
inline constexpr double lossy_swap_pop_polariton_t3 = 5.9124521579680744366e-1;
inline constexpr double lossy_swap_pop_vacuum_t3 = 3.4875362066035862927e-1;

}  // namespace sphp::reference
