#pragma once

// Quantization of a lossless bound surface mode.
//
// The time-averaged energy stored per unit interface area, integrated over z
// on both sides, is written two ways:
//   <U1> + <U2> = (mu0 / 8) |H2|^2 / |k2z| * M = (mu0 / 8) |H1|^2 / |k1z| * F
// where F and M collect the permeabilities, eps2 and the dispersive terms
// omega dmu/domega. The mode length
//   L = F / (4 |k1z|) * (1 + |kp|^2 / |k1z|^2)
// is the normalization that turns the surface-wave energy into the energy of
// one harmonic oscillator per mode, after which each photon carries the field
//   B = sqrt(hbar omega mu0 / 2S) L^(-1/2) exp(-Im(k1z) z) (e_x - kp/k1z e_z).

#include <array>
#include <cmath>
#include <complex>

#include "sphp/constants.hpp"
#include "sphp/dispersion.hpp"
#include "sphp/errors.hpp"
#include "sphp/materials.hpp"

namespace sphp {

struct FieldRatios {
  double hx_h1z_sq = 0.0;  // |Hx|^2 / |H1z|^2
  double hx_h2z_sq = 0.0;  // |Hx|^2 / |H2z|^2
};

struct EnergyFunctions {
  double F = 0.0;
  double M = 0.0;
};

struct ModeQuantization {
  double omega = 0.0;
  double F_val = 0.0;
  double M_val = 0.0;
  double mode_length = 0.0;  // m
  double ratio_Hx_H1z_sq = 0.0;
  double ratio_Hx_H2z_sq = 0.0;
  double kz_decay_vac = 0.0;  // Im(k1z), 1/m
};

/// Per-photon magnetic-field envelope above the interface at height z.
/// `polarization` is b(z) itself [m^-1/2]; `b_vec` includes the
/// sqrt(hbar omega mu0 / 2) prefactor, with the 1/sqrt(S) left symbolic.
struct FieldSample {
  double z = 0.0;
  std::array<complex, 2> polarization{};
  std::array<complex, 2> b_vec{};
};

namespace detail {

inline void require_lossless_bound(const DispersionPoint& p, const char* op) {
  if (!p.bound) throw DomainError(std::string(op) + " requires a bound surface mode");
  if (p.mu_perp.imag() != 0.0 || p.mu_par.imag() != 0.0)
    throw DomainError(std::string(op) + " requires lossless permeabilities");
}

// Shorthands shared by the closed forms (mu1 = 1 keeps its symbol).
struct MuTerms {
  double mu1, mu_perp, mu_par, eps2;
  double a;  // mu1 eps2 - mu_perp
  double b;  // mu1 - mu_par eps2
  double p;  // 2 mu1 mu_par eps2 - mu_perp mu_par - mu1^2
  double q;  // mu1 (mu1 eps2 - mu_perp) - mu_par (mu1 - mu_par eps2)
};

inline MuTerms mu_terms(double mu_perp, double mu_par, double eps2) {
  const double mu1 = constants::mu1;
  MuTerms t{mu1, mu_perp, mu_par, eps2, 0, 0, 0, 0};
  t.a = mu1 * eps2 - mu_perp;
  t.b = mu1 - mu_par * eps2;
  t.p = 2.0 * mu1 * mu_par * eps2 - mu_perp * mu_par - mu1 * mu1;
  t.q = mu1 * t.a - mu_par * t.b;
  return t;
}

}  // namespace detail

/// Field-magnitude ratios of the bound mode.
inline FieldRatios field_ratios(const DispersionPoint& point) {
  detail::require_lossless_bound(point, "field_ratios");
  const auto m = detail::mu_terms(point.mu_perp.real(), point.mu_par.real(), point.eps2);
  FieldRatios r;
  r.hx_h1z_sq = -m.mu1 * m.b / (m.mu_par * m.a);
  r.hx_h2z_sq = -m.mu_par * m.b / (m.mu1 * m.a);
  if (!(r.hx_h1z_sq > 0.0) || !(r.hx_h2z_sq > 0.0) || !std::isfinite(r.hx_h1z_sq) || !std::isfinite(r.hx_h2z_sq))
    throw DomainError("field ratios are not positive: the point is not a bound mode");
  return r;
}

/// Closed-form F and M from permeabilities, their analytic omega-derivatives and eps2.
inline EnergyFunctions energy_functions(double omega, double mu_perp, double mu_par, double dmu_perp,
                                        double dmu_par, double eps2) {
  const auto t = detail::mu_terms(mu_perp, mu_par, eps2);
  const double mu1 = t.mu1;
  EnergyFunctions e;
  e.M = (2.0 * mu1 * mu1 * mu_par * t.a - 2.0 * mu_par * mu_par * mu_perp * t.a) / (mu1 * t.q) -
        omega * mu_par * t.b / t.q * dmu_perp + omega * mu1 * t.a / t.q * dmu_par;
  const double denom = mu_perp * t.p;
  e.F = (2.0 * mu1 * mu_perp * mu_par * t.a - 2.0 * mu1 * mu1 * mu1 * t.a) / denom +
        omega * mu1 * mu1 * mu_par * t.b / (mu_par * denom) * dmu_perp -
        omega * mu1 * mu1 * mu1 * t.a / (mu_par * denom) * dmu_par;
  return e;
}

inline EnergyFunctions energy_functions(const SuperlatticeSpec& spec, const DispersionPoint& point) {
  detail::require_lossless_bound(point, "energy_functions");
  const double w = point.omega;
  return energy_functions(w, point.mu_perp.real(), point.mu_par.real(), dmu_perp_domega(spec, w),
                          dmu_par_domega(spec, w), spec.material().eps2);
}

/// Mode length from F, the permeabilities and |k1z| [m].
inline double mode_length(double F, double mu_perp, double mu_par, double eps2, double k1z_abs) {
  const double mu1 = constants::mu1;
  const double bracket = mu1 * (mu_par * eps2 - mu1) + mu_par * (mu1 * eps2 - mu_perp);
  return bracket / (4.0 * k1z_abs * mu1 * (mu_par * eps2 - mu1)) * F;
}

inline double mode_length(const SuperlatticeSpec& spec, const DispersionPoint& point) {
  const auto e = energy_functions(spec, point);
  const double L = mode_length(e.F, point.mu_perp.real(), point.mu_par.real(), spec.material().eps2,
                               std::abs(point.k1z));
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("mode length is not positive at this point");
  return L;
}

/// Fraction of the mode energy stored in the vacuum half-space.
inline double vacuum_energy_fraction(const SuperlatticeSpec& spec, const DispersionPoint& point) {
  const auto e = energy_functions(spec, point);
  const auto t = detail::mu_terms(point.mu_perp.real(), point.mu_par.real(), spec.material().eps2);
  return 2.0 * t.mu1 * t.mu_par * t.a / (t.p * e.F);
}

/// Full quantization record of the lossless mode at `point`. A damped spec is
/// reduced to its lossless counterpart first.
inline ModeQuantization quantize(const SuperlatticeSpec& spec, const DispersionPoint& point) {
  const SuperlatticeSpec lossless = spec.without_damping();
  const DispersionPoint p = spec.lossless() ? point : wavenumbers(lossless, point.omega);
  const auto ratios = field_ratios(p);
  const auto e = energy_functions(lossless, p);
  ModeQuantization q;
  q.omega = p.omega;
  q.F_val = e.F;
  q.M_val = e.M;
  q.mode_length = mode_length(lossless, p);
  q.ratio_Hx_H1z_sq = ratios.hx_h1z_sq;
  q.ratio_Hx_H2z_sq = ratios.hx_h2z_sq;
  q.kz_decay_vac = p.k1z.imag();
  return q;
}

inline ModeQuantization quantize(const SuperlatticeSpec& spec, double omega) {
  return quantize(spec, wavenumbers(spec.without_damping(), omega));
}

inline FieldSample b_field_profile(const DispersionPoint& point, const ModeQuantization& mode, double z) {
  detail::require_lossless_bound(point, "b_field_profile");
  if (!(z >= 0.0)) throw DomainError("b_field_profile requires z >= 0");
  FieldSample s;
  s.z = z;
  const double envelope = std::exp(-point.k1z.imag() * z) / std::sqrt(mode.mode_length);
  s.polarization = {complex(envelope, 0.0), -envelope * point.kp / point.k1z};
  const double prefactor = std::sqrt(constants::hbar * point.omega * constants::mu0 / 2.0);
  s.b_vec = {prefactor * s.polarization[0], prefactor * s.polarization[1]};
  return s;
}

}  // namespace sphp
