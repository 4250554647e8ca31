#pragma once

#include <numbers>

namespace sphp::constants {

// CODATA 2018, SI.
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double mu_B = 9.2740100783e-24;
inline constexpr double mu0 = 1.25663706212e-6;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Vacuum half-space.
inline constexpr double mu1 = 1.0;
inline constexpr double eps1 = 1.0;

}  // namespace sphp::constants
