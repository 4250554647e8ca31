#pragma once

// NV-center spins coupled to quantized surface modes.
//
// A single spin at height z0 couples to mode k with
//   g(k, z0) = (mu_B g_s / 2) sqrt(omega mu0 / (hbar L)) exp(-Im(k1z) z0)
// (per sqrt(S); the quantization area cancels once the ensemble is summed).
// For a slab of thickness h and volume density n, of which a fraction f is
// resonant, the collective coupling is
//   G = sqrt(f) sqrt(n int_0^h |g(z)|^2 dz)
//     = sqrt(f) g(0) sqrt(n (1 - exp(-2 kz h)) / (2 kz)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sphp/constants.hpp"
#include "sphp/dispersion.hpp"
#include "sphp/errors.hpp"
#include "sphp/materials.hpp"
#include "sphp/parallel.hpp"
#include "sphp/quantization.hpp"
#include "sphp/table.hpp"

namespace sphp {

struct NvParams {
  double D_zfs = constants::two_pi * 2.87e9;  // rad/s
  double g_s = 2.0;
  double mu_B = constants::mu_B;  // J/T
  double B_z = 0.0;               // T

  /// omega0 = D + mu_B g_s B_z / hbar.
  double omega0() const { return D_zfs + mu_B * g_s * B_z / constants::hbar; }

  void validate() const {
    if (!(B_z >= 0.0)) throw ValidationError("B_z", "must be >= 0");
    if (!(g_s > 0.0)) throw ValidationError("g_s", "must be > 0");
    if (!(omega0() > 0.0)) throw ValidationError("D_zfs", "omega0 must be > 0");
  }
};

struct SpinEnsembleSpec {
  double n = 0.0;        // NV volume density, 1/m^3
  double h = 0.0;        // slab thickness, m
  double l = 0.0;        // slab extent along x, m
  double gamma_s = 0.0;  // dephasing rate, rad/s
  double resonant_fraction = 0.25;

  void validate() const {
    if (!(n > 0.0)) throw ValidationError("n", "must be > 0");
    if (!(h > 0.0)) throw ValidationError("h", "must be > 0");
    if (!(l > 0.0)) throw ValidationError("l", "must be > 0");
    if (!(gamma_s >= 0.0)) throw ValidationError("gamma_s", "must be >= 0");
    if (!(resonant_fraction > 0.0 && resonant_fraction <= 1.0))
      throw ValidationError("resonant_fraction", "must lie in (0, 1]");
  }
};

/// Spin-wave mode coupled to one surface mode.
struct CoupledSystem {
  double omega_spin = 0.0;
  double omega_mode = 0.0;
  double G = 0.0;
  double gamma_s = 0.0;
  double kappa_sphp = 0.0;

  void validate() const {
    if (!(G >= 0.0)) throw DomainError("coupled system requires G >= 0");
    if (!(gamma_s >= 0.0) || !(kappa_sphp >= 0.0)) throw DomainError("coupled system requires rates >= 0");
  }
};

// ---------------------------------------------------------------------------
// Zeeman tuning of the |0> <-> |+1> transition

struct ZeemanTuning {
  double B_z_required = 0.0;  // T
  double validity = 0.0;      // |Delta/2 + D - omega| / (Delta/2)
  bool warning = false;       // validity > 0.1
};

inline constexpr double kZeemanValidityWarning = 0.1;

/// Two-level validity ratio for a given bias field; small values mean the
/// |-1> level is far enough detuned to be dropped.
inline double zeeman_validity(const NvParams& nv, double B_z, double omega_mode) {
  const double half_splitting = nv.mu_B * nv.g_s * B_z / constants::hbar;
  return std::abs(half_splitting + nv.D_zfs - omega_mode) / half_splitting;
}

inline ZeemanTuning zeeman_resonance(const NvParams& nv, double omega_mode) {
  if (!(omega_mode > nv.D_zfs))
    throw DomainError("the |+1> transition only tunes upward: omega_mode must exceed D");
  ZeemanTuning t;
  const double half_splitting = omega_mode - nv.D_zfs;
  t.B_z_required = constants::hbar * half_splitting / (nv.mu_B * nv.g_s);
  t.validity = std::abs(half_splitting + nv.D_zfs - omega_mode) / half_splitting;
  t.warning = t.validity > kZeemanValidityWarning;
  return t;
}

// ---------------------------------------------------------------------------
// Single-spin and collective coupling

/// Single-spin coupling times sqrt(S) [rad/s m].
inline double g_single(const ModeQuantization& mode, const NvParams& nv, double z0) {
  if (!(z0 >= 0.0)) throw DomainError("g_single requires z0 >= 0");
  if (!(mode.mode_length > 0.0)) throw DomainError("g_single requires a positive mode length");
  const double g0 =
      0.5 * nv.mu_B * nv.g_s * std::sqrt(mode.omega * constants::mu0 / (constants::hbar * mode.mode_length));
  return g0 * std::exp(-mode.kz_decay_vac * z0);
}

/// Closed form sqrt(f) g0 sqrt(n (1 - exp(-2 kz h)) / (2 kz)).
inline double collective_coupling_closed_form(double g0, double kz, double n, double h, double fraction) {
  return std::sqrt(fraction) * g0 * std::sqrt(n * -std::expm1(-2.0 * kz * h) / (2.0 * kz));
}

/// Same quantity with the thickness integral evaluated by adaptive
/// Gauss-Kronrod quadrature.
inline double collective_coupling_quadrature(double g0, double kz, double n, double h, double fraction) {
  auto integrand = [&](double z) {
    const double g = g0 * std::exp(-kz * z);
    return g * g;
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, h, 15, 1e-12);
  return std::sqrt(fraction) * std::sqrt(n * integral);
}

/// h -> infinity limit of the collective coupling.
inline double collective_coupling_saturated(double g0, double kz, double n, double fraction) {
  return std::sqrt(fraction) * g0 * std::sqrt(n / (2.0 * kz));
}

struct CollectiveCoupling {
  double G = 0.0;             // closed form, rad/s
  double G_quadrature = 0.0;  // independent route, rad/s
};

inline CollectiveCoupling g_collective(const ModeQuantization& mode, const NvParams& nv,
                                       const SpinEnsembleSpec& ens) {
  ens.validate();
  if (!(mode.kz_decay_vac > 0.0)) throw DomainError("g_collective requires a bound (decaying) mode");
  const double g0 = g_single(mode, nv, 0.0);
  const double kz = mode.kz_decay_vac;
  return {collective_coupling_closed_form(g0, kz, ens.n, ens.h, ens.resonant_fraction),
          collective_coupling_quadrature(g0, kz, ens.n, ens.h, ens.resonant_fraction)};
}

// ---------------------------------------------------------------------------
// Spin-wave mode overlap

/// D = (1/N) sum_i exp(i (kp_b - kp_a) x_i); D(a, a) = 1 and |D| <= 1.
inline complex mode_overlap(std::span<const double> positions, double kp_a, double kp_b) {
  if (positions.empty()) throw DomainError("mode_overlap requires at least one spin position");
  const double dk = kp_b - kp_a;
  double re = 0.0;
  double im = 0.0;
  for (double x : positions) {
    re += std::cos(dk * x);
    im += std::sin(dk * x);
  }
  const double inv = 1.0 / static_cast<double>(positions.size());
  return {re * inv, im * inv};
}

/// N positions uniformly distributed on [-l/2, l/2).
inline std::vector<double> uniform_spin_positions(std::size_t count, double l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5 * l, 0.5 * l);
  std::vector<double> x(count);
  for (auto& xi : x) xi = dist(rng);
  return x;
}

/// N positions on a regular grid covering one full length l.
inline std::vector<double> equally_spaced_spin_positions(std::size_t count, double l) {
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i)
    x[i] = -0.5 * l + l * static_cast<double>(i) / static_cast<double>(count);
  return x;
}

// ---------------------------------------------------------------------------
// Dephasing and cooperativity

/// Dipolar dephasing scale mu0 g_s^2 mu_B^2 n_N / (4 pi hbar) [rad/s].
inline double dephasing_estimate(double n_impurity, double g_s = 2.0) {
  if (!(n_impurity > 0.0)) throw DomainError("dephasing_estimate requires an impurity density > 0");
  return constants::mu0 * g_s * g_s * constants::mu_B * constants::mu_B * n_impurity /
         (4.0 * constants::pi * constants::hbar);
}

struct Cooperativity {
  double C = 0.0;
  bool strong = false;  // G > max(gamma_s, kappa)
};

inline Cooperativity cooperativity(const CoupledSystem& sys) {
  if (!(sys.gamma_s > 0.0) || !(sys.kappa_sphp > 0.0))
    throw DomainError("cooperativity requires gamma_s > 0 and kappa_sphp > 0");
  return {sys.G * sys.G / (sys.gamma_s * sys.kappa_sphp), sys.G > std::max(sys.gamma_s, sys.kappa_sphp)};
}

// ---------------------------------------------------------------------------
// Design point and period sweep

struct CouplingDesignPoint {
  DispersionPoint point;
  ModeQuantization mode;
  CollectiveCoupling coupling;
};

inline constexpr std::size_t kDesignGridPoints = 200;
inline constexpr double kDesignRelativeTolerance = 1e-6;

/// Frequency maximizing G over the bound segment: a 200-point grid search,
/// then golden-section refinement until the bracket is below 1e-6 of the
/// segment width.
inline CouplingDesignPoint optimal_coupling(const SuperlatticeSpec& spec, const NvParams& nv,
                                            const SpinEnsembleSpec& ens) {
  const SuperlatticeSpec lossless = spec.without_damping();
  const BoundSegment seg = bound_segment(lossless);
  if (seg.empty()) throw DomainError("no bound segment: the negative-permeability gap is closed");

  auto evaluate = [&](double omega) {
    CouplingDesignPoint dp;
    dp.point = wavenumbers(lossless, omega);
    dp.mode = quantize(lossless, dp.point);
    dp.coupling = g_collective(dp.mode, nv, ens);
    return dp;
  };
  auto coupling_at = [&](double omega) {
    try {
      return evaluate(omega).coupling.G;
    } catch (const DomainError&) {
      return -1.0;
    }
  };

  const double width = seg.omega_hi - seg.omega_lo;
  auto grid = [&](std::size_t i) {
    return seg.omega_lo + width * (static_cast<double>(i) + 0.5) / static_cast<double>(kDesignGridPoints);
  };
  std::size_t best = 0;
  double best_G = -1.0;
  for (std::size_t i = 0; i < kDesignGridPoints; ++i) {
    const double G = coupling_at(grid(i));
    if (G > best_G) {
      best_G = G;
      best = i;
    }
  }
  if (!(best_G > 0.0)) throw DomainError("collective coupling could not be evaluated on the bound segment");

  double a = best == 0 ? seg.omega_lo : grid(best - 1);
  double b = best + 1 == kDesignGridPoints ? seg.omega_hi : grid(best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = coupling_at(x1);
  double f2 = coupling_at(x2);
  while (b - a > kDesignRelativeTolerance * width) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = coupling_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = coupling_at(x1);
    }
  }
  const double refined = 0.5 * (a + b);
  return coupling_at(refined) >= best_G ? evaluate(refined) : evaluate(grid(best));
}

struct CooperativityRow {
  double d = 0.0;
  double period = 0.0;
  double omega_eval = 0.0;
  double G = 0.0;
  double gamma_s = 0.0;
  double kappa = 0.0;
  double C = 0.0;
  bool strong = false;
  bool skipped = false;  // no bound segment at this d
};

/// Cooperativity against superlattice half-period. For each d the damping is
/// kappa = kappa_coefficient * omega_perp_L(d) and G is evaluated at the
/// design point of optimal_coupling.
inline std::vector<CooperativityRow> sweep_cooperativity_vs_period(const MaterialParams& material,
                                                                   std::span<const double> d_values,
                                                                   const NvParams& nv, const SpinEnsembleSpec& ens,
                                                                   double kappa_coefficient, unsigned threads = 1) {
  if (!(kappa_coefficient > 0.0)) throw DomainError("kappa coefficient must be > 0");
  for (double d : d_values)
    if (!(d > 0.0)) throw DomainError("superlattice half-periods must be > 0");
  std::vector<CooperativityRow> rows(d_values.size());
  parallel_for(d_values.size(), threads, [&](std::size_t i) {
    const SuperlatticeSpec spec(material, d_values[i]);
    CooperativityRow& row = rows[i];
    row.d = spec.d();
    row.period = spec.period();
    row.gamma_s = ens.gamma_s;
    row.kappa = kappa_coefficient * spec.resonances().perp_L;
    if (bound_segment(spec).empty()) {
      row.skipped = true;
      return;
    }
    const auto design = optimal_coupling(spec, nv, ens);
    row.omega_eval = design.point.omega;
    row.G = design.coupling.G;
    const auto c = cooperativity({design.point.omega, design.point.omega, row.G, ens.gamma_s, row.kappa});
    row.C = c.C;
    row.strong = c.strong;
  });
  return rows;
}

inline Table cooperativity_table(std::span<const CooperativityRow> rows) {
  Table t;
  t.columns = {"period_m", "omega_eval_rad_s", "G_rad_s", "gamma_s_rad_s", "kappa_rad_s", "C", "strong_coupling"};
  for (const auto& r : rows) {
    if (r.skipped) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      t.add_row({r.period, nan, nan, r.gamma_s, r.kappa, nan, 0.0});
      continue;
    }
    t.add_row({r.period, r.omega_eval, r.G, r.gamma_s, r.kappa, r.C, r.strong ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace sphp
