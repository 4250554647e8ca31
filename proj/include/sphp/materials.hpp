#pragma once

// Piezomagnetic superlattice parameters and its effective permeability tensor.
//
// The superlattice alternates the sign of the piezomagnetic coefficient with
// half-period d. In the long-wavelength limit it behaves as a homogeneous
// uniaxial medium with Lorentz-type permeabilities
//
//   mu_perp(w) = (mu11_s / mu0) (w_perp_o^2 - w^2 - i k w) / (w_perp_L^2 - w^2 - i k w)
//   mu_par(w)  = (mu33_s / mu0) (w_par_o^2  - w^2 - i k w) / (w_par_L^2  - w^2 - i k w)
//
// with w_L^2 = c pi^2 / (rho d^2) and w_o^2 = w_L^2 + q^2 / (d^2 rho mu_s).
// All permeabilities returned here are relative (divided by mu0).

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <string_view>

#include "sphp/constants.hpp"
#include "sphp/errors.hpp"
#include "sphp/keyvalue.hpp"

namespace sphp {

using complex = std::complex<double>;

inline constexpr double kDefaultPoleGuard = 1e-12;
/// Damping used by the "lossy default", as a fraction of omega_perp_L.
inline constexpr double kLossyDefaultFraction = 1e-3;

struct MaterialParams {
  std::string name;
  double rho = 0.0;     // kg/m^3
  double c11 = 0.0;     // N/m^2
  double c33 = 0.0;     // N/m^2
  double q31 = 0.0;     // N/(A m)
  double q33 = 0.0;     // N/(A m)
  double mu11_s = 0.0;  // absolute, same unit as mu0
  double mu33_s = 0.0;  // absolute, same unit as mu0
  double eps2 = 1.0;    // relative

  void validate() const {
    auto positive = [](const char* field, double v) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and > 0");
    };
    positive("rho", rho);
    positive("c11", c11);
    positive("c33", c33);
    positive("mu11_s", mu11_s);
    positive("mu33_s", mu33_s);
    if (!std::isfinite(q31)) throw ValidationError("q31", "must be finite");
    if (!std::isfinite(q33)) throw ValidationError("q33", "must be finite");
    if (!(eps2 >= 1.0) || !std::isfinite(eps2)) throw ValidationError("eps2", "must be finite and >= 1");
  }

  friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

/// Terfenol-D.
inline MaterialParams terfenol_d() {
  MaterialParams m;
  m.name = "terfenol-d";
  m.rho = 9.23e3;
  m.c11 = 5.5e10;
  m.c33 = 5.5e10;
  m.q31 = -200.0;
  m.q33 = 400.0;
  m.mu11_s = 6.23e-6;
  m.mu33_s = 6.23e-6;
  m.eps2 = 1e3;
  return m;
}

inline bool is_material_preset(std::string_view name) { return name == "terfenol-d"; }

inline MaterialParams material_preset(std::string_view name) {
  if (name == "terfenol-d") return terfenol_d();
  throw ValidationError("material", "unknown preset `" + std::string(name) + "`");
}

/// Parses the flat material config. Required keys: rho, c11, c33, q31, q33,
/// mu11_s, mu33_s, eps2. Optional: name.
inline MaterialParams load_material(std::string_view text) {
  const KeyValueMap kv = parse_key_values(text);
  MaterialParams m;
  struct Slot {
    const char* key;
    double MaterialParams::*field;
  };
  static constexpr Slot slots[] = {
      {"rho", &MaterialParams::rho},       {"c11", &MaterialParams::c11},       {"c33", &MaterialParams::c33},
      {"q31", &MaterialParams::q31},       {"q33", &MaterialParams::q33},       {"mu11_s", &MaterialParams::mu11_s},
      {"mu33_s", &MaterialParams::mu33_s}, {"eps2", &MaterialParams::eps2},
  };
  for (const auto& [key, entry] : kv) {
    if (key == "name") continue;
    bool known = false;
    for (const auto& s : slots) known = known || key == s.key;
    if (!known) throw ParseError("unknown key `" + key + "`", entry.line);
  }
  for (const auto& s : slots) {
    const auto it = kv.find(s.key);
    if (it == kv.end()) throw ValidationError(s.key, "required key missing");
    m.*(s.field) = parse_double(s.key, it->second);
  }
  if (const auto it = kv.find("name"); it != kv.end()) m.name = it->second.value;

  try {
    m.validate();
  } catch (const ValidationError& e) {
    const auto it = kv.find(e.field());
    throw ValidationError(e.field(), "must satisfy its invariant (got " + it->second.value + ")", it->second.line);
  }
  return m;
}

/// Inverse of load_material; values carry 17 significant digits.
inline std::string serialize(const MaterialParams& m) {
  std::string out;
  char buf[64];
  if (!m.name.empty()) out += "name = " + m.name + "\n";
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += std::string(key) + " = " + buf + "\n";
  };
  put("rho", m.rho);
  put("c11", m.c11);
  put("c33", m.c33);
  put("q31", m.q31);
  put("q33", m.q33);
  put("mu11_s", m.mu11_s);
  put("mu33_s", m.mu33_s);
  put("eps2", m.eps2);
  return out;
}

struct Resonances {
  double perp_L = 0.0;
  double perp_o = 0.0;
  double par_L = 0.0;
  double par_o = 0.0;
};

inline Resonances resonance_frequencies(const MaterialParams& m, double d) {
  const double pi = constants::pi;
  Resonances r;
  const double perp_L2 = m.c11 * pi * pi / (m.rho * d * d);
  const double par_L2 = m.c33 * pi * pi / (m.rho * d * d);
  r.perp_L = std::sqrt(perp_L2);
  r.perp_o = std::sqrt(perp_L2 + m.q31 * m.q31 / (d * d * m.rho * m.mu11_s));
  r.par_L = std::sqrt(par_L2);
  r.par_o = std::sqrt(par_L2 + m.q33 * m.q33 / (d * d * m.rho * m.mu33_s));
  return r;
}

/// Material plus domain half-period d (period L = 2d) and damping constant.
class SuperlatticeSpec {
 public:
  SuperlatticeSpec(MaterialParams material, double d, double kappa_damp = 0.0)
      : material_(std::move(material)), d_(d), kappa_(kappa_damp) {
    material_.validate();
    if (!(d_ > 0.0) || !std::isfinite(d_)) throw ValidationError("d", "must be finite and > 0");
    if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) throw ValidationError("kappa_damp", "must be finite and >= 0");
    res_ = resonance_frequencies(material_, d_);
  }

  /// Damped spec with kappa = fraction * omega_perp_L.
  static SuperlatticeSpec lossy_default(MaterialParams material, double d,
                                        double fraction = kLossyDefaultFraction) {
    const double wL = resonance_frequencies(material, d).perp_L;
    return SuperlatticeSpec(std::move(material), d, fraction * wL);
  }

  const MaterialParams& material() const noexcept { return material_; }
  double d() const noexcept { return d_; }
  double period() const noexcept { return 2.0 * d_; }
  double kappa_damp() const noexcept { return kappa_; }
  bool lossless() const noexcept { return kappa_ == 0.0; }
  const Resonances& resonances() const noexcept { return res_; }

  SuperlatticeSpec without_damping() const { return SuperlatticeSpec(material_, d_, 0.0); }
  SuperlatticeSpec with_damping(double kappa) const { return SuperlatticeSpec(material_, d_, kappa); }

 private:
  MaterialParams material_;
  double d_;
  double kappa_;
  Resonances res_;
};

inline Resonances resonance_frequencies(const SuperlatticeSpec& spec) { return spec.resonances(); }

struct Permeability {
  complex mu_perp;
  complex mu_par;
  double omega = 0.0;
};

namespace detail {

// static_rel * (wo^2 - w^2 - i k w) / (wL^2 - w^2 - i k w); differences of
// squares are factored to keep precision next to the resonances.
inline complex lorentz(double static_rel, double wL, double wo, double kappa, double omega, double pole_guard) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("omega must be finite and > 0");
  const double num = (wo - omega) * (wo + omega);
  const double den = (wL - omega) * (wL + omega);
  if (kappa == 0.0) {
    if (std::abs(omega - wL) / wL < pole_guard)
      throw PoleError("lossless permeability evaluated at its pole omega_L = " + std::to_string(wL));
    return {static_rel * num / den, 0.0};
  }
  const complex loss(0.0, -kappa * omega);
  return static_rel * (num + loss) / (den + loss);
}

// d/dw of the lossless Lorentz form.
inline double lorentz_derivative(double static_rel, double wL, double wo, double omega) {
  const double den = (wL - omega) * (wL + omega);
  return static_rel * 2.0 * omega * (wo - wL) * (wo + wL) / (den * den);
}

}  // namespace detail

inline complex mu_perp(const SuperlatticeSpec& spec, double omega, double pole_guard = kDefaultPoleGuard) {
  const auto& r = spec.resonances();
  return detail::lorentz(spec.material().mu11_s / constants::mu0, r.perp_L, r.perp_o, spec.kappa_damp(), omega,
                         pole_guard);
}

inline complex mu_par(const SuperlatticeSpec& spec, double omega, double pole_guard = kDefaultPoleGuard) {
  const auto& r = spec.resonances();
  return detail::lorentz(spec.material().mu33_s / constants::mu0, r.par_L, r.par_o, spec.kappa_damp(), omega,
                         pole_guard);
}

inline Permeability permeability(const SuperlatticeSpec& spec, double omega, double pole_guard = kDefaultPoleGuard) {
  return {mu_perp(spec, omega, pole_guard), mu_par(spec, omega, pole_guard), omega};
}

/// Analytic d(mu_perp)/d(omega) of the lossless form [s/rad].
inline double dmu_perp_domega(const SuperlatticeSpec& spec, double omega) {
  const auto& r = spec.resonances();
  return detail::lorentz_derivative(spec.material().mu11_s / constants::mu0, r.perp_L, r.perp_o, omega);
}

/// Analytic d(mu_par)/d(omega) of the lossless form [s/rad].
inline double dmu_par_domega(const SuperlatticeSpec& spec, double omega) {
  const auto& r = spec.resonances();
  return detail::lorentz_derivative(spec.material().mu33_s / constants::mu0, r.par_L, r.par_o, omega);
}

}  // namespace sphp
