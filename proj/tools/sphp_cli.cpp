// Command-line front end: one subcommand per stage of the pipeline, each a
// pure function of its run configuration, emitting CSV (default) or a JSON
// envelope.
//
// Exit codes: 0 success, 2 configuration error, 3 domain error, 4 numerical
// failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "sphp/sphp.hpp"

namespace {

using namespace sphp;

constexpr const char* kToolVersion = "1.0.0";

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumerical = 4;

/// Missing input file named on the command line or in a config.
class MissingFile : public Error {
 public:
  explicit MissingFile(const std::string& path) : Error("cannot open file: " + path) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Run configuration

// Every recognised key with its default. A zero in an "auto" slot means the
// subcommand derives the value from the superlattice.
const std::map<std::string, std::string>& config_defaults() {
  static const std::map<std::string, std::string> defaults = {
      {"material", "terfenol-d"},
      {"d", "5e-7"},
      {"kappa_fraction", "1e-3"},
      {"lossy", "0"},
      {"omega_min", "0"},
      {"omega_max", "0"},
      {"points", "0"},
      {"n", "2e24"},
      {"h", "1e-3"},
      {"l", "0.02"},
      {"resonant_fraction", "0.25"},
      {"gamma_s", "0"},
      {"n_impurity", "1e25"},
      {"zfs_hz", "2.87e9"},
      {"depths", "0,2.5e-4,5e-4,1e-3,2e-3,4e-3"},
      {"d_min", "5e-7"},
      {"d_max", "2e-6"},
      {"d_points", "7"},
      {"coupling", "56548667.764616276"},
      {"gamma_over_G", "0.2"},
      {"kappa_over_G", "0.3"},
      {"omega_mode", "0"},
      {"detuning_span_over_G", "10"},
      {"n_max", "2"},
      {"record_every", "1"},
      {"t_over_swap", "1"},
      {"spins", "100000"},
      {"positions", "random"},
      {"kp_a", "0"},
  };
  return defaults;
}

class RunConfig {
 public:
  RunConfig() {
    for (const auto& [k, v] : config_defaults()) values_[k] = {v, 0};
  }

  void merge_text(std::string_view text) {
    for (const auto& [key, entry] : parse_key_values(text)) set(key, entry.value, entry.line);
  }

  void set(const std::string& key, const std::string& value, int line = 0) {
    if (!config_defaults().contains(key)) throw ParseError("unknown configuration key `" + key + "`", line);
    values_[key] = {value, line};
  }

  const std::string& text(const std::string& key) const { return values_.at(key).value; }

  double number(const std::string& key) const { return parse_double(key, values_.at(key)); }

  double positive(const std::string& key) const {
    const double v = number(key);
    if (!(v > 0.0)) throw ValidationError(key, "must be > 0", values_.at(key).line);
    return v;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t minimum) const {
    const double v = number(key);
    if (v == 0.0) return fallback;
    if (!(v >= static_cast<double>(minimum)) || v != std::floor(v) || v > 1e8)
      throw ValidationError(key, "must be an integer >= " + std::to_string(minimum), values_.at(key).line);
    return static_cast<std::size_t>(v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::string_view s = text(key);
    while (!s.empty()) {
      const auto comma = s.find(',');
      KeyValueEntry item{std::string(detail::trim(s.substr(0, comma))), values_.at(key).line};
      out.push_back(parse_double(key, item));
      s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    }
    if (out.empty()) throw ValidationError(key, "list must not be empty");
    return out;
  }

  /// Sorted `key = value` lines; the digest input.
  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v.value + "\n";
    return out;
  }

 private:
  std::map<std::string, KeyValueEntry> values_;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

struct Context {
  RunConfig config;
  MaterialParams material;
  std::string subcommand;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  SuperlatticeSpec lossless() const { return SuperlatticeSpec(material, config.positive("d")); }
  double kappa_sphp() const { return config.positive("kappa_fraction") * lossless().resonances().perp_L; }
  SuperlatticeSpec field_spec() const {
    return config.number("lossy") != 0.0 ? lossless().with_damping(kappa_sphp()) : lossless();
  }

  NvParams nv() const {
    NvParams p;
    p.D_zfs = constants::two_pi * config.positive("zfs_hz");
    return p;
  }

  SpinEnsembleSpec ensemble() const {
    SpinEnsembleSpec e;
    e.n = config.positive("n");
    e.h = config.positive("h");
    e.l = config.positive("l");
    const double gamma = config.number("gamma_s");
    e.gamma_s = gamma > 0.0 ? gamma : dephasing_estimate(config.positive("n_impurity"));
    e.resonant_fraction = config.number("resonant_fraction");
    e.validate();
    return e;
  }

  /// Canonical form of everything that determines the output.
  std::string canonical() const {
    return "subcommand = " + subcommand + "\nseed = " + std::to_string(seed) + "\n" + config.canonical() +
           "[material]\n" + serialize(material);
  }
};

// ---------------------------------------------------------------------------
// Subcommands

std::pair<double, double> omega_range(const Context& ctx, double auto_lo, double auto_hi) {
  const double lo = ctx.config.number("omega_min");
  const double hi = ctx.config.number("omega_max");
  const std::pair<double, double> r{lo > 0.0 ? lo : auto_lo, hi > 0.0 ? hi : auto_hi};
  if (!(r.first > 0.0) || !(r.second > r.first)) throw ValidationError("omega_max", "frequency range is empty");
  return r;
}

BoundSegment require_segment(const SuperlatticeSpec& spec) {
  const auto seg = bound_segment(spec);
  if (seg.empty()) throw DomainError("no bound surface-mode segment: the negative-permeability gap is closed");
  return seg;
}

/// n frequencies at cell centres of the bound segment.
std::vector<double> segment_grid(const BoundSegment& seg, std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = seg.omega_lo + (seg.omega_hi - seg.omega_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return w;
}

Table cmd_permeability(const Context& ctx) {
  const auto spec = ctx.field_spec();
  const auto& r = spec.resonances();
  const auto [lo, hi] = omega_range(ctx, 0.9 * r.perp_L, 1.1 * std::max(r.par_o, r.perp_o));
  const std::size_t n = ctx.config.count("points", 1000, 2);
  Table t;
  t.columns = {"omega_rad_s", "freq_GHz", "mu_perp_re", "mu_perp_im", "mu_par_re", "mu_par_im"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    try {
      const auto p = permeability(spec, w);
      t.add_row({w, w / constants::two_pi / 1e9, p.mu_perp.real(), p.mu_perp.imag(), p.mu_par.real(),
                 p.mu_par.imag()});
    } catch (const PoleError&) {
      t.add_row({w, w / constants::two_pi / 1e9, nan, nan, nan, nan});
    }
  }
  t.note("omega_perp_L_rad_s", format_double(r.perp_L));
  t.note("omega_perp_o_rad_s", format_double(r.perp_o));
  t.note("omega_par_L_rad_s", format_double(r.par_L));
  t.note("omega_par_o_rad_s", format_double(r.par_o));
  t.note("kappa_damp_rad_s", format_double(spec.kappa_damp()));
  return t;
}

Table cmd_dispersion(const Context& ctx) {
  const auto spec = ctx.field_spec();
  const auto lossless = ctx.lossless();
  const auto& r = spec.resonances();
  const auto seg = bound_segment(lossless);
  const auto [lo, hi] = omega_range(ctx, 0.98 * r.perp_L, 1.02 * r.perp_o);
  const auto curve = trace_curve(spec, lo, hi, ctx.config.count("points", 1000, 2), ctx.threads);
  Table t = dispersion_table(curve);
  t.note("bound_segment_rad_s", seg.empty() ? "empty" : format_double(seg.omega_lo) + " " + format_double(seg.omega_hi));
  if (!seg.empty()) {
    const double mid = 0.5 * (r.perp_L + r.perp_o);
    const auto p = wavenumbers(lossless, mid);
    if (p.bound) {
      t.note("midgap_omega_rad_s", format_double(mid));
      t.note("midgap_wavelength_m", format_double(constants::two_pi / p.kp.real()));
    }
    try {
      const double w6 = solve_omega_at_kp(lossless, constants::two_pi / 6e-3);
      t.note("omega_at_wavelength_6mm_rad_s", format_double(w6));
      t.note("freq_at_wavelength_6mm_GHz", format_double(w6 / constants::two_pi / 1e9));
    } catch (const OutOfRange&) {
      t.note("omega_at_wavelength_6mm_rad_s", "unreachable");
    }
  }
  t.note("comparison_target", "lambda_p ~ 6 mm near 3.4 GHz; compare midgap_wavelength_m and freq_at_wavelength_6mm_GHz");
  return t;
}

Table cmd_mode(const Context& ctx) {
  const auto spec = ctx.lossless();
  const auto grid = segment_grid(require_segment(spec), ctx.config.count("points", 200, 2));
  Table t;
  t.columns = {"omega_rad_s", "freq_GHz",         "kp_re",          "F",
               "M",           "L_mode_m",         "ratio_hx_h1z_sq", "ratio_hx_h2z_sq",
               "kz_decay_vac", "vacuum_energy_fraction"};
  for (double w : grid) {
    const auto p = wavenumbers(spec, w);
    const auto q = quantize(spec, p);
    t.add_row({w, w / constants::two_pi / 1e9, p.kp.real(), q.F_val, q.M_val, q.mode_length, q.ratio_Hx_H1z_sq,
               q.ratio_Hx_H2z_sq, q.kz_decay_vac, vacuum_energy_fraction(spec, p)});
  }
  return t;
}

Table cmd_coupling(const Context& ctx) {
  const auto spec = ctx.lossless();
  const auto grid = segment_grid(require_segment(spec), ctx.config.count("points", 50, 2));
  const auto depths = ctx.config.list("depths");
  for (double z : depths)
    if (!(z >= 0.0)) throw ValidationError("depths", "depths must be >= 0");
  const auto nv = ctx.nv();
  SpinEnsembleSpec ens = ctx.ensemble();
  Table t;
  t.columns = {"omega_rad_s", "freq_GHz", "depth_m", "g_single_rad_s_m", "G_rad_s"};
  for (double w : grid) {
    const auto mode = quantize(spec, w);
    const double g0 = g_single(mode, nv, 0.0);
    for (double z : depths) {
      // The same length is the spin height for g and the slab thickness for G.
      const double G = z > 0.0 ? collective_coupling_closed_form(g0, mode.kz_decay_vac, ens.n, z,
                                                                 ens.resonant_fraction)
                               : 0.0;
      t.add_row({w, w / constants::two_pi / 1e9, z, g_single(mode, nv, z), G});
    }
  }
  const auto design = optimal_coupling(spec, nv, ens);
  t.note("design_omega_rad_s", format_double(design.point.omega));
  t.note("design_G_rad_s", format_double(design.coupling.G));
  t.note("design_G_quadrature_rad_s", format_double(design.coupling.G_quadrature));
  t.note("design_G_saturated_rad_s",
         format_double(collective_coupling_saturated(g_single(design.mode, nv, 0.0), design.mode.kz_decay_vac, ens.n,
                                                     ens.resonant_fraction)));
  t.note("comparison_target", "G up to 2 pi x 9 MHz = 5.6548667764616276e7 rad/s");
  return t;
}

Table cmd_cooperativity(const Context& ctx) {
  const double d_min = ctx.config.positive("d_min");
  const double d_max = ctx.config.positive("d_max");
  const std::size_t n = ctx.config.count("d_points", 7, 1);
  if (n > 1 && !(d_max > d_min)) throw ValidationError("d_max", "period range is empty");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = n == 1 ? d_min : d_min + (d_max - d_min) * static_cast<double>(i) / static_cast<double>(n - 1);
  const auto ens = ctx.ensemble();
  const auto rows =
      sweep_cooperativity_vs_period(ctx.material, d, ctx.nv(), ens, ctx.config.positive("kappa_fraction"), ctx.threads);
  Table t = cooperativity_table(rows);
  t.note("evaluation_frequency", "maximum of G over the bound segment");
  t.note("kappa_rule", ctx.config.text("kappa_fraction") + " * omega_perp_L(d)");
  return t;
}

CoupledSystem crossing_system(const Context& ctx) {
  const double G = ctx.config.positive("coupling");
  double omega = ctx.config.number("omega_mode");
  if (!(omega > 0.0)) {
    const Resonances r = ctx.lossless().resonances();
    omega = 0.5 * (r.perp_L + r.perp_o);
  }
  return {omega, omega, G, ctx.config.number("gamma_over_G") * G, ctx.config.number("kappa_over_G") * G};
}

Table cmd_crossing(const Context& ctx) {
  const auto sys = crossing_system(ctx);
  sys.validate();
  const double span = ctx.config.positive("detuning_span_over_G") * sys.G;
  const auto rows = avoided_crossing(sys, -span, span, ctx.config.count("points", 201, 3));
  Table t = crossing_table(rows);
  const double dg = sys.gamma_s - sys.kappa_sphp;
  t.note("omega_mode_rad_s", format_double(sys.omega_mode));
  t.note("resonant_gap_closed_form_rad_s", format_double(2.0 * std::sqrt(sys.G * sys.G - dg * dg / 4.0)));
  if (sys.gamma_s > 0.0 && sys.kappa_sphp > 0.0) t.note("cooperativity", format_double(cooperativity(sys).C));
  return t;
}

Table cmd_store(const Context& ctx) {
  const auto sys = crossing_system(ctx);
  LindbladOptions opt;
  opt.record_every = ctx.config.count("record_every", 1, 1);
  const double n_max = ctx.config.count("n_max", 2, 1);
  const double T = swap_time(sys.G);
  const double t_final = ctx.config.positive("t_over_swap") * T;
  const auto result =
      lindblad_evolve(TwoModeState::fock(0, 1, static_cast<int>(n_max)), sys, t_final, opt);
  Table t = trajectory_table(result.trajectory);
  t.note("swap_time_s", format_double(T));
  t.note("swap_fidelity", format_double(swap_fidelity(sys, opt)));
  t.note("dt_s", format_double(result.dt));
  t.note("positivity_warning", result.positivity_warning ? "1" : "0");

  const auto ens = ctx.ensemble();
  double kp_a = ctx.config.number("kp_a");
  if (!(kp_a > 0.0)) {
    const auto spec = ctx.lossless();
    const auto& r = spec.resonances();
    kp_a = wavenumbers(spec, 0.5 * (r.perp_L + r.perp_o)).kp.real();
  }
  const double kp_b = kp_a + constants::two_pi / ens.l;
  const std::size_t spins = ctx.config.count("spins", 100000, 1);
  const std::string& layout = ctx.config.text("positions");
  std::vector<double> x;
  if (layout == "random")
    x = uniform_spin_positions(spins, ens.l, ctx.seed);
  else if (layout == "equal")
    x = equally_spaced_spin_positions(spins, ens.l);
  else
    throw ValidationError("positions", "must be `random` or `equal`");
  const auto report = two_mode_storage(ens, {kp_a, sys}, {kp_b, sys}, x, opt);
  t.note("two_mode_delta_k_per_m", format_double(report.delta_k));
  t.note("two_mode_fidelity_a", format_double(report.fidelity_a));
  t.note("two_mode_fidelity_b", format_double(report.fidelity_b));
  t.note("two_mode_crosstalk", format_double(report.crosstalk));
  return t;
}

Table run(const Context& ctx) {
  const std::string& c = ctx.subcommand;
  if (c == "permeability") return cmd_permeability(ctx);
  if (c == "dispersion") return cmd_dispersion(ctx);
  if (c == "mode") return cmd_mode(ctx);
  if (c == "coupling") return cmd_coupling(ctx);
  if (c == "cooperativity") return cmd_cooperativity(ctx);
  if (c == "crossing") return cmd_crossing(ctx);
  return cmd_store(ctx);
}

// ---------------------------------------------------------------------------
// Output

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render(const Context& ctx, Table table, const std::string& format) {
  const std::string digest = sha256_hex(ctx.canonical());
  if (format == "csv") {
    Table t;
    t.note("tool", std::string("sphp_cli ") + kToolVersion);
    t.note("subcommand", ctx.subcommand);
    t.note("config_sha256", digest);
    for (auto& n : table.notes) t.notes.push_back(std::move(n));
    table.notes = std::move(t.notes);
    return to_csv(table);
  }
  nlohmann::ordered_json j;
  j["tool"] = "sphp_cli";
  j["version"] = kToolVersion;
  j["subcommand"] = ctx.subcommand;
  j["config_sha256"] = digest;
  j["timestamp"] = utc_timestamp();
  j["columns"] = table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v))
        r.push_back(v);
      else
        r.push_back(nullptr);
    }
    j["rows"].push_back(std::move(r));
  }
  j["notes"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.notes) j["notes"][k] = v;
  return j.dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface phonon-polariton / NV-ensemble coupling toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string material_arg;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Run configuration (key = value text)");
  app.add_option("--material", material_arg, "Material preset name or material config path");
  app.add_option("--out", out_path, "Output path (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Seed for random spin positions");
  app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::Range(1u, 256u));
  app.add_option("--set", overrides, "Override a configuration key: key=value");

  const char* names[][2] = {
      {"permeability", "Effective permeabilities over a frequency grid"},
      {"dispersion", "Surface-mode dispersion curve"},
      {"mode", "Mode quantization along the bound segment"},
      {"coupling", "Single-spin and collective coupling tables"},
      {"cooperativity", "Cooperativity against superlattice period"},
      {"crossing", "Avoided-crossing eigenfrequencies"},
      {"store", "Swap-gate storage trajectory and two-mode report"},
  };
  for (const auto& [name, help] : names) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Context ctx;
    ctx.subcommand = app.get_subcommands().front()->get_name();
    ctx.seed = seed;
    ctx.threads = threads;
    if (!config_path.empty()) ctx.config.merge_text(read_file(config_path));
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ParseError("--set expects key=value, got `" + o + "`", 0);
      ctx.config.set(std::string(detail::trim(o.substr(0, eq))), std::string(detail::trim(o.substr(eq + 1))));
    }
    if (!material_arg.empty()) ctx.config.set("material", material_arg);
    const std::string& source = ctx.config.text("material");
    ctx.material = is_material_preset(source) ? material_preset(source) : load_material(read_file(source));

    const std::string text = render(ctx, run(ctx), format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw MissingFile(out_path);
      out << text;
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingFile& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
