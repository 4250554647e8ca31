#pragma once

// Coupled magnon-polariton dynamics: the 2x2 non-Hermitian spectrum, Lindblad
// evolution in a truncated two-mode Fock space, swap-gate storage and
// two-channel storage.
//
// The master equation is written in the frame rotating at the mode frequency:
//   drho/dt = -i [H, rho] + gamma_s D[L_s] rho + kappa D[a] rho
//   H = Delta S^dag S + G (S^dag a + a^dag S),  Delta = omega_spin - omega_mode
//   D[o] rho = o rho o^dag - (o^dag o rho + rho o^dag o) / 2
// where L_s is S^dag S (number dephasing, the default) or S (lowering).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphp/constants.hpp"
#include "sphp/errors.hpp"
#include "sphp/materials.hpp"
#include "sphp/spin_coupling.hpp"
#include "sphp/table.hpp"

namespace sphp {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kDefaultTruncation = 2;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kPositivityTolerance = 1e-9;
inline constexpr double kPositivityWarning = 1e-7;
inline constexpr double kLeakTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Truncated Fock basis {|n_m, n_p> : n_m + n_p <= N_max}

class FockBasis {
 public:
  struct Level {
    int magnons;
    int polaritons;
  };

  explicit FockBasis(int n_max = kDefaultTruncation) : n_max_(n_max) {
    if (n_max < 1) throw ValidationError("N_max", "truncation level must be >= 1");
    for (int shell = 0; shell <= n_max; ++shell)
      for (int m = shell; m >= 0; --m) levels_.push_back({m, shell - m});
  }

  int n_max() const noexcept { return n_max_; }
  int dim() const noexcept { return static_cast<int>(levels_.size()); }
  const Level& level(int i) const { return levels_.at(static_cast<std::size_t>(i)); }

  int index(int magnons, int polaritons) const {
    if (magnons < 0 || polaritons < 0 || magnons + polaritons > n_max_)
      throw DomainError("Fock level outside the truncated basis");
    const int shell = magnons + polaritons;
    return shell * (shell + 1) / 2 + (shell - magnons);
  }

  /// Magnon (spin-wave) annihilation operator.
  ComplexMatrix magnon_lowering() const { return lowering(true); }
  /// Polariton annihilation operator.
  ComplexMatrix polariton_lowering() const { return lowering(false); }

 private:
  ComplexMatrix lowering(bool magnon) const {
    ComplexMatrix op = ComplexMatrix::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
      const auto [m, p] = levels_[static_cast<std::size_t>(j)];
      const int n = magnon ? m : p;
      if (n == 0) continue;
      const int i = magnon ? index(m - 1, p) : index(m, p - 1);
      op(i, j) = std::sqrt(static_cast<double>(n));
    }
    return op;
  }

  int n_max_;
  std::vector<Level> levels_;
};

// ---------------------------------------------------------------------------
// Density matrix

class TwoModeState {
 public:
  TwoModeState(FockBasis basis, ComplexMatrix rho) : basis_(std::move(basis)), rho_(std::move(rho)) {
    if (rho_.rows() != basis_.dim() || rho_.cols() != basis_.dim())
      throw ValidationError("density_matrix", "dimension does not match the truncated basis");
  }

  /// Pure Fock state |n_m, n_p>.
  static TwoModeState fock(int magnons, int polaritons, int n_max = kDefaultTruncation) {
    FockBasis basis(n_max);
    ComplexMatrix rho = ComplexMatrix::Zero(basis.dim(), basis.dim());
    const int i = basis.index(magnons, polaritons);
    rho(i, i) = 1.0;
    return TwoModeState(std::move(basis), std::move(rho));
  }

  const FockBasis& basis() const noexcept { return basis_; }
  const ComplexMatrix& rho() const noexcept { return rho_; }
  ComplexMatrix& rho() noexcept { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }

  double population(int magnons, int polaritons) const {
    const int i = basis_.index(magnons, polaritons);
    return rho_(i, i).real();
  }

  /// Mean magnon number Tr(rho S^dag S).
  double mean_magnons() const {
    double sum = 0.0;
    for (int i = 0; i < basis_.dim(); ++i) sum += basis_.level(i).magnons * rho_(i, i).real();
    return sum;
  }

  /// Mean polariton number Tr(rho a^dag a).
  double mean_polaritons() const {
    double sum = 0.0;
    for (int i = 0; i < basis_.dim(); ++i) sum += basis_.level(i).polaritons * rho_(i, i).real();
    return sum;
  }

  /// Total population of the n_m + n_p = shell subspace.
  double shell_population(int shell) const {
    double sum = 0.0;
    for (int i = 0; i < basis_.dim(); ++i) {
      const auto& lv = basis_.level(i);
      if (lv.magnons + lv.polaritons == shell) sum += rho_(i, i).real();
    }
    return sum;
  }

  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    const ComplexMatrix h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  void validate() const {
    if (hermiticity_error() > kHermiticityTolerance)
      throw ValidationError("density_matrix", "not Hermitian");
    if (std::abs(trace() - 1.0) > kTraceTolerance) throw ValidationError("density_matrix", "trace differs from 1");
    if (min_eigenvalue() < -kPositivityTolerance) throw ValidationError("density_matrix", "not positive semidefinite");
  }

 private:
  FockBasis basis_;
  ComplexMatrix rho_;
};

// ---------------------------------------------------------------------------
// Non-Hermitian spectrum

struct EigenPair {
  complex E_plus;
  complex E_minus;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double linewidth_plus = 0.0;
  double linewidth_minus = 0.0;
};

/// Eigenvalues of [[omega_spin - i gamma_s, G], [G, omega_mode - i kappa]],
/// sorted by real part, descending.
inline EigenPair eigenfrequencies(const CoupledSystem& sys) {
  sys.validate();
  // Shifting by the mean frequency keeps the 2x2 problem well scaled.
  const double shift = 0.5 * (sys.omega_spin + sys.omega_mode);
  Eigen::Matrix2cd m;
  m << complex(sys.omega_spin - shift, -sys.gamma_s), complex(sys.G, 0.0), complex(sys.G, 0.0),
      complex(sys.omega_mode - shift, -sys.kappa_sphp);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m, false);
  complex e0 = es.eigenvalues()(0) + shift;
  complex e1 = es.eigenvalues()(1) + shift;
  if (e1.real() > e0.real()) std::swap(e0, e1);
  return {e0, e1, e0.real(), e1.real(), -2.0 * e0.imag(), -2.0 * e1.imag()};
}

struct CrossingRow {
  double detuning = 0.0;
  EigenPair pair;
};

/// Tunes the spin across the mode: omega_spin = omega_mode + delta on a grid
/// that is exactly symmetric about the centre of [delta_lo, delta_hi].
inline std::vector<CrossingRow> avoided_crossing(const CoupledSystem& tmpl, double delta_lo, double delta_hi,
                                                 std::size_t n_points) {
  if (n_points < 3) throw DomainError("avoided_crossing requires at least 3 points");
  if (!(delta_hi > delta_lo)) throw DomainError("avoided_crossing requires a non-empty detuning range");
  const double center = 0.5 * (delta_lo + delta_hi);
  const double half = 0.5 * (delta_hi - delta_lo);
  const double last = static_cast<double>(n_points - 1);
  std::vector<CrossingRow> rows(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double delta = center + half * (2.0 * static_cast<double>(i) - last) / last;
    CoupledSystem s = tmpl;
    s.omega_spin = tmpl.omega_mode + delta;
    rows[i] = {delta, eigenfrequencies(s)};
  }
  return rows;
}

inline Table crossing_table(std::span<const CrossingRow> rows) {
  Table t;
  t.columns = {"detuning_rad_s", "omega_plus", "omega_minus", "lw_plus", "lw_minus"};
  for (const auto& r : rows)
    t.add_row({r.detuning, r.pair.omega_plus, r.pair.omega_minus, r.pair.linewidth_plus, r.pair.linewidth_minus});
  return t;
}

// ---------------------------------------------------------------------------
// Lindblad evolution

enum class SpinDissipator {
  NumberDephasing,  // gamma_s D[S^dag S]
  Lowering,         // gamma_s D[S]
};

struct LindbladOptions {
  double dt = 0.0;  // 0 selects min(0.01/G, 0.01/kappa, 0.01/gamma_s)
  std::size_t record_every = 1;
  SpinDissipator spin_dissipator = SpinDissipator::NumberDephasing;
};

struct TrajectorySample {
  double t = 0.0;
  double pop_magnon = 0.0;
  double pop_polariton = 0.0;
  double pop_vacuum = 0.0;
  double trace = 0.0;
  double purity = 0.0;
};

struct LindbladResult {
  std::vector<TrajectorySample> trajectory;
  TwoModeState final_state;
  double dt = 0.0;
  std::size_t steps = 0;
  bool positivity_warning = false;  // an eigenvalue fell below -1e-7: reduce dt
};

inline double default_time_step(const CoupledSystem& sys) {
  double dt = std::numeric_limits<double>::infinity();
  for (double rate : {sys.G, sys.kappa_sphp, sys.gamma_s, std::abs(sys.omega_spin - sys.omega_mode)})
    if (rate > 0.0) dt = std::min(dt, 0.01 / rate);
  return dt;
}

namespace detail {

struct LindbladGenerator {
  ComplexMatrix H;
  std::vector<std::pair<double, ComplexMatrix>> jumps;
  std::vector<ComplexMatrix> jump_norms;  // L^dag L per jump

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    const complex i_unit(0.0, 1.0);
    ComplexMatrix out = -i_unit * (H * rho - rho * H);
    for (std::size_t k = 0; k < jumps.size(); ++k) {
      const auto& [rate, L] = jumps[k];
      const ComplexMatrix& LdL = jump_norms[k];
      out += rate * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
    }
    return out;
  }
};

inline LindbladGenerator make_generator(const FockBasis& basis, const CoupledSystem& sys, SpinDissipator diss) {
  const ComplexMatrix S = basis.magnon_lowering();
  const ComplexMatrix a = basis.polariton_lowering();
  LindbladGenerator g;
  const double delta = sys.omega_spin - sys.omega_mode;
  g.H = delta * (S.adjoint() * S) + sys.G * (S.adjoint() * a + a.adjoint() * S);
  if (sys.gamma_s > 0.0)
    g.jumps.emplace_back(sys.gamma_s, diss == SpinDissipator::NumberDephasing ? ComplexMatrix(S.adjoint() * S) : S);
  if (sys.kappa_sphp > 0.0) g.jumps.emplace_back(sys.kappa_sphp, a);
  for (const auto& [rate, L] : g.jumps) g.jump_norms.push_back(L.adjoint() * L);
  return g;
}

inline TrajectorySample sample(double t, const TwoModeState& s) {
  return {t, s.mean_magnons(), s.mean_polaritons(), s.population(0, 0), s.trace(), s.purity()};
}

inline void check_truncation(const TwoModeState& s, double t) {
  const double leak = s.shell_population(s.basis().n_max());
  if (leak > kLeakTolerance)
    throw TruncationError("population " + format_double(leak) + " in the truncation shell at t = " +
                          format_double(t) + " s; increase N_max");
}

}  // namespace detail

/// Fixed-step RK4 integration from t = 0 to t_final. The step is rounded down
/// so that an integer number of steps lands exactly on t_final.
inline LindbladResult lindblad_evolve(const TwoModeState& initial, const CoupledSystem& sys, double t_final,
                                      const LindbladOptions& options = {}) {
  sys.validate();
  initial.validate();
  if (!(t_final >= 0.0)) throw DomainError("lindblad_evolve requires t_final >= 0");
  if (options.dt < 0.0) throw DomainError("lindblad_evolve requires dt > 0");
  if (options.record_every == 0) throw DomainError("record_every must be >= 1");

  const double dt_request = options.dt > 0.0 ? options.dt : default_time_step(sys);
  std::size_t steps = 0;
  double dt = 0.0;
  if (t_final > 0.0) {
    steps = std::isfinite(dt_request) ? static_cast<std::size_t>(std::ceil(t_final / dt_request - 1e-9)) : 1;
    steps = std::max<std::size_t>(steps, 1);
    dt = t_final / static_cast<double>(steps);
  }

  const auto gen = detail::make_generator(initial.basis(), sys, options.spin_dissipator);
  LindbladResult result{{}, initial, dt, steps, false};
  TwoModeState& state = result.final_state;
  detail::check_truncation(state, 0.0);
  result.trajectory.push_back(detail::sample(0.0, state));

  ComplexMatrix& rho = state.rho();
  for (std::size_t n = 1; n <= steps; ++n) {
    const ComplexMatrix k1 = gen(rho);
    const ComplexMatrix k2 = gen(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = gen(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = gen(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t = n == steps ? t_final : dt * static_cast<double>(n);
    detail::check_truncation(state, t);
    if (std::abs(state.trace() - 1.0) > kTraceTolerance)
      throw NumericalError("trace drifted to " + format_double(state.trace()) + " at t = " + format_double(t));
    if (state.hermiticity_error() > kHermiticityTolerance)
      throw NumericalError("density matrix lost Hermiticity at t = " + format_double(t));
    if (n % options.record_every == 0 || n == steps) {
      if (state.min_eigenvalue() < -kPositivityWarning) result.positivity_warning = true;
      result.trajectory.push_back(detail::sample(t, state));
    }
  }
  return result;
}

inline Table trajectory_table(std::span<const TrajectorySample> samples) {
  Table t;
  t.columns = {"t_s", "pop_magnon", "pop_polariton", "pop_vacuum", "trace", "purity"};
  for (const auto& s : samples) t.add_row({s.t, s.pop_magnon, s.pop_polariton, s.pop_vacuum, s.trace, s.purity});
  return t;
}

// ---------------------------------------------------------------------------
// Storage

/// Swap-gate duration pi / (2G).
inline double swap_time(double G) {
  if (!(G > 0.0)) throw DomainError("swap gate requires G > 0");
  return constants::pi / (2.0 * G);
}

/// Population of |1_magnon, 0_polariton> after evolving |0, 1> for pi / (2G).
inline double swap_fidelity(const CoupledSystem& sys, const LindbladOptions& options = {}) {
  const double T = swap_time(sys.G);
  const auto result = lindblad_evolve(TwoModeState::fock(0, 1), sys, T, options);
  return result.final_state.population(1, 0);
}

struct StorageChannel {
  double kp = 0.0;  // in-plane wavenumber of the stored mode, 1/m
  CoupledSystem system;
};

/// Channel for the mode at `point`, with the spin tuned into resonance.
inline StorageChannel storage_channel(const DispersionPoint& point, double G, double gamma_s, double kappa) {
  return {point.kp.real(), {point.omega, point.omega, G, gamma_s, kappa}};
}

struct StorageReport {
  double fidelity_a = 0.0;
  double fidelity_b = 0.0;
  double crosstalk = 0.0;  // |D|^2
  complex overlap;
  double delta_k = 0.0;
  double delta_k_target = 0.0;  // 2 pi / l
};

inline constexpr double kStorageDeltaKTolerance = 0.1;
inline constexpr double kMaxIndependentOverlap = 0.1;

inline StorageReport two_mode_storage(const SpinEnsembleSpec& ens, const StorageChannel& a, const StorageChannel& b,
                                      std::span<const double> positions, const LindbladOptions& options = {}) {
  ens.validate();
  StorageReport r;
  r.delta_k = std::abs(a.kp - b.kp);
  r.delta_k_target = constants::two_pi / ens.l;
  if (std::abs(r.delta_k - r.delta_k_target) > kStorageDeltaKTolerance * r.delta_k_target)
    throw DomainError("|kp_a - kp_b| = " + format_double(r.delta_k) + " 1/m is not within 10% of 2 pi / l = " +
                      format_double(r.delta_k_target) + " 1/m");
  r.overlap = mode_overlap(positions, a.kp, b.kp);
  if (std::abs(r.overlap) > kMaxIndependentOverlap)
    throw OverlapError("spin-wave overlap |D| = " + format_double(std::abs(r.overlap)) +
                       " exceeds 0.1; the channels are not independent");
  r.crosstalk = std::norm(r.overlap);
  r.fidelity_a = swap_fidelity(a.system, options);
  r.fidelity_b = swap_fidelity(b.system, options);
  return r;
}

}  // namespace sphp
