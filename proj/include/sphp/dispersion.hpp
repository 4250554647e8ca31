#pragma once

// TE surface phonon polaritons on the vacuum / superlattice interface.
//
// With the in-plane wavevector along x, the wavenumbers follow from
//   kp^2 + k1z^2 = k0^2                       (vacuum, mu1 = eps1 = 1)
//   kp^2 / mu_par + k2z^2 / mu_perp = eps2 k0^2 (superlattice)
// and the field-matching conditions, giving closed forms for kp^2, k1z^2 and
// k2z^2 with the common denominator mu1^2 - mu_perp mu_par.
//
// Branch convention: fields go as exp(i kp x + i kz z). The vacuum root takes
// Im(k1z) >= 0 (decay for z -> +inf) and the superlattice root Im(k2z) <= 0
// (decay for z -> -inf). Continuity of E_y additionally ties the two roots by
// k2z = mu_perp k1z, which is what singles out a true surface mode among the
// sign choices allowed by the squared relations.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sphp/constants.hpp"
#include "sphp/errors.hpp"
#include "sphp/materials.hpp"
#include "sphp/parallel.hpp"
#include "sphp/table.hpp"

namespace sphp {

inline constexpr double kBranchDegenerateTolerance = 1e-10;
inline constexpr double kLightLineMargin = 1e-9;
inline constexpr double kImaginaryTolerance = 1e-6;
inline constexpr double kDampedBoundRatio = 0.5;

struct DispersionPoint {
  double omega = 0.0;
  complex kp;
  complex k1z;
  complex k2z;
  complex mu_perp;
  complex mu_par;
  double eps2 = 1.0;  // superlattice dielectric constant used for this point
  bool bound = false;
  /// Set by trace_curve when the point sits on a pole or on the asymptote;
  /// the wavenumbers are NaN in that case.
  bool degenerate = false;

  double k0() const noexcept { return omega / constants::c; }
};

struct DispersionCurve {
  std::vector<DispersionPoint> points;
  double omega_lo = 0.0;
  double omega_hi = 0.0;
};

namespace detail {

inline complex root_with_nonnegative_imag(complex sq) {
  complex r = std::sqrt(sq);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

inline complex root_with_nonpositive_imag(complex sq) {
  complex r = std::sqrt(sq);
  if (r.imag() > 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

inline complex root_forward(complex sq) {
  complex r = std::sqrt(sq);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

inline bool classify_bound(const DispersionPoint& p, bool lossless) {
  const double k0 = p.k0();
  if (!(p.kp.real() > k0 * (1.0 + kLightLineMargin))) return false;
  if (!(p.k1z.imag() > 0.0) || !(p.k2z.imag() < 0.0)) return false;
  // E_y continuity picks k2z = +mu_perp k1z rather than -mu_perp k1z.
  const complex matched = p.mu_perp * p.k1z;
  if (std::abs(p.k2z - matched) > std::abs(p.k2z + matched)) return false;
  if (lossless) {
    return std::abs(p.kp.imag()) <= kImaginaryTolerance * p.kp.real() &&
           std::abs(p.k1z.real()) < kImaginaryTolerance * std::abs(p.k1z.imag()) &&
           std::abs(p.k2z.real()) < kImaginaryTolerance * std::abs(p.k2z.imag());
  }
  return p.kp.imag() / p.kp.real() < kDampedBoundRatio;
}

}  // namespace detail

/// Wavenumbers and bound-mode flag at one frequency.
inline DispersionPoint wavenumbers(const SuperlatticeSpec& spec, double omega,
                                   double pole_guard = kDefaultPoleGuard) {
  DispersionPoint p;
  p.omega = omega;
  p.mu_perp = mu_perp(spec, omega, pole_guard);
  p.mu_par = mu_par(spec, omega, pole_guard);
  p.eps2 = spec.material().eps2;

  const double mu1 = constants::mu1;
  const double eps2 = spec.material().eps2;
  const complex product = p.mu_perp * p.mu_par;
  const complex den = mu1 * mu1 - product;
  if (std::abs(den) < kBranchDegenerateTolerance * std::max(1.0, std::abs(product)))
    throw BranchDegenerate("mu1^2 - mu_perp mu_par vanishes at omega = " + format_double(omega));

  const double k0sq = (omega / constants::c) * (omega / constants::c);
  const complex kp_sq = (mu1 * eps2 - p.mu_perp) * p.mu_par * mu1 / den * k0sq;
  const complex kz_common = (mu1 - p.mu_par * eps2) / den * k0sq;
  const complex k1z_sq = kz_common * mu1 * mu1;
  const complex k2z_sq = kz_common * p.mu_perp * p.mu_perp;

  p.kp = detail::root_forward(kp_sq);
  p.k1z = detail::root_with_nonnegative_imag(k1z_sq);
  p.k2z = detail::root_with_nonpositive_imag(k2z_sq);
  p.bound = detail::classify_bound(p, spec.lossless());
  return p;
}

inline bool is_bound(const SuperlatticeSpec& spec, double omega) {
  try {
    return wavenumbers(spec, omega).bound;
  } catch (const DomainError&) {
    return false;
  }
}

/// Frequency window supporting bound surface modes in the lossless limit.
struct BoundSegment {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  bool empty() const noexcept { return !(omega_hi > omega_lo); }
};

/// Locates the bound window inside the negative-mu_perp gap
/// (omega_perp_L, omega_perp_o) of the lossless spec: a uniform sign scan
/// followed by bisection of both edges on the bound predicate.
inline BoundSegment bound_segment(const SuperlatticeSpec& spec, std::size_t scan_points = 4096) {
  const SuperlatticeSpec lossless = spec.without_damping();
  const auto& r = lossless.resonances();
  const double lo = r.perp_L;
  const double hi = r.perp_o;
  if (!(hi > lo)) return {};

  auto sample = [&](std::size_t i) {
    return lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(scan_points);
  };
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t i = 0; i < scan_points; ++i) {
    if (!is_bound(lossless, sample(i))) {
      if (first) break;
      continue;
    }
    if (!first) first = i;
    last = i;
  }
  if (!first) return {};

  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      (is_bound(lossless, mid) ? inside : outside) = mid;
    }
    return inside;
  };
  const double below = *first == 0 ? lo : sample(*first - 1);
  const double above = last + 1 == scan_points ? hi : sample(last + 1);
  return {refine(sample(*first), below), refine(sample(last), above)};
}

/// Uniform-in-omega scan over [omega_lo, omega_hi]. Points on a pole or on the
/// asymptote are kept and flagged `degenerate` instead of failing the scan.
inline DispersionCurve trace_curve(const SuperlatticeSpec& spec, double omega_lo, double omega_hi,
                                   std::size_t n_points, unsigned threads = 1) {
  if (!(omega_lo < omega_hi)) throw DomainError("trace_curve requires omega_lo < omega_hi");
  if (!(omega_lo > 0.0)) throw DomainError("trace_curve requires omega_lo > 0");
  if (n_points < 2) throw DomainError("trace_curve requires n_points >= 2");

  DispersionCurve curve;
  curve.omega_lo = omega_lo;
  curve.omega_hi = omega_hi;
  curve.points.resize(n_points);
  parallel_for(n_points, threads, [&](std::size_t i) {
    const double omega = i + 1 == n_points
                             ? omega_hi
                             : omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) /
                                              static_cast<double>(n_points - 1);
    try {
      curve.points[i] = wavenumbers(spec, omega);
    } catch (const DomainError&) {
      DispersionPoint p;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      p.omega = omega;
      p.eps2 = spec.material().eps2;
      p.kp = p.k1z = p.k2z = p.mu_perp = p.mu_par = complex(nan, nan);
      p.degenerate = true;
      curve.points[i] = p;
    }
  });
  return curve;
}

/// Frequency at which the bound-mode in-plane wavenumber equals kp_target.
inline double solve_omega_at_kp(const SuperlatticeSpec& spec, double kp_target, double rel_tol = 1e-12) {
  const SuperlatticeSpec lossless = spec.without_damping();
  const BoundSegment seg = bound_segment(lossless);
  if (seg.empty()) throw OutOfRange("no bound segment: the negative-permeability gap is closed");
  auto kp_at = [&](double w) { return wavenumbers(lossless, w).kp.real(); };
  double lo = seg.omega_lo;
  double hi = seg.omega_hi;
  const double kp_lo = kp_at(lo);
  const double kp_hi = kp_at(hi);
  if (!(kp_target >= kp_lo && kp_target <= kp_hi))
    throw OutOfRange("kp_target " + format_double(kp_target) + " outside attainable range [" +
                     format_double(kp_lo) + ", " + format_double(kp_hi) + "]");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double k = kp_at(mid);
    if (std::abs(k - kp_target) <= rel_tol * kp_target) return mid;
    (k < kp_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// d(omega)/d(kp) on a traced curve [m/s]: central differences at the grid
/// points bracketing omega, linearly interpolated. All four points involved
/// must be bound.
inline double group_velocity(const DispersionCurve& curve, double omega) {
  const auto& pts = curve.points;
  if (pts.size() < 3) throw OutOfRange("group_velocity needs at least three curve points");
  auto it = std::upper_bound(pts.begin(), pts.end(), omega,
                             [](double w, const DispersionPoint& p) { return w < p.omega; });
  if (it == pts.begin() || it == pts.end())
    throw OutOfRange("omega " + format_double(omega) + " outside the traced curve");
  const std::size_t i = static_cast<std::size_t>(it - pts.begin()) - 1;  // pts[i].omega <= omega
  auto central = [&](std::size_t j) {
    if (j == 0 || j + 1 >= pts.size()) throw OutOfRange("omega at the edge of the bound segment");
    for (std::size_t k = j - 1; k <= j + 1; ++k)
      if (!pts[k].bound) throw OutOfRange("omega at the edge of the bound segment");
    return (pts[j + 1].omega - pts[j - 1].omega) / (pts[j + 1].kp.real() - pts[j - 1].kp.real());
  };
  if (omega == pts[i].omega) return central(i);
  const double t = (omega - pts[i].omega) / (pts[i + 1].omega - pts[i].omega);
  return (1.0 - t) * central(i) + t * central(i + 1);
}

/// L_SPhP = v_g / kappa_sphp [m].
inline double propagation_length(double v_g, double kappa_sphp) {
  if (!(v_g > 0.0)) throw DomainError("propagation_length requires v_g > 0");
  if (!(kappa_sphp > 0.0)) throw DomainError("propagation_length requires kappa_sphp > 0");
  return v_g / kappa_sphp;
}

inline Table dispersion_table(const DispersionCurve& curve) {
  Table t;
  t.columns = {"omega_rad_s", "freq_GHz",   "kp_re",      "kp_im",      "k1z_re",     "k1z_im", "k2z_re",
               "k2z_im",      "mu_perp_re", "mu_perp_im", "mu_par_re",  "mu_par_im",  "bound"};
  for (const auto& p : curve.points) {
    t.add_row({p.omega, p.omega / constants::two_pi / 1e9, p.kp.real(), p.kp.imag(), p.k1z.real(), p.k1z.imag(),
               p.k2z.real(), p.k2z.imag(), p.mu_perp.real(), p.mu_perp.imag(), p.mu_par.real(), p.mu_par.imag(),
               p.bound ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace sphp
