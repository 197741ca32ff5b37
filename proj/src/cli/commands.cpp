#include <algorithm>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kerrpair/cli.hpp"
#include "kerrpair/continuum.hpp"
#include "kerrpair/error.hpp"
#include "kerrpair/lattice.hpp"
#include "kerrpair/lindblad.hpp"

#ifndef KERRPAIR_VERSION
#define KERRPAIR_VERSION "unknown"
#endif

namespace kerrpair::cli {
namespace {

std::string fmt(double v, int digits = 10) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Reads parameters of one section and remembers the effective values.
class Params {
 public:
  Params(const Config& c, std::string section) : c_(c), section_(std::move(section)) {}

  double num(const std::string& key, double fallback) {
    const double v = c_.get_double(section_, key, fallback);
    used_.emplace_back(key, format_number(v));
    return v;
  }
  long integer(const std::string& key, long fallback) {
    const long v = c_.get_int(section_, key, fallback);
    used_.emplace_back(key, std::to_string(v));
    return v;
  }
  std::size_t count(const std::string& key, long fallback, long minimum) {
    const long v = integer(key, fallback);
    if (v < minimum) {
      throw Error(ErrorKind::Validation, section_ + "." + key + " must be >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(v);
  }
  bool flag(const std::string& key, bool fallback) {
    const bool v = c_.get_bool(section_, key, fallback);
    used_.emplace_back(key, v ? "true" : "false");
    return v;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    const std::string v = c_.get_string(section_, key, fallback);
    used_.emplace_back(key, v);
    return v;
  }
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) {
    const std::vector<double> v = c_.get_list(section_, key, fallback);
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + format_number(v[i]);
    used_.emplace_back(key, joined);
    return v;
  }
  bool given(const std::string& key) const { return c_.has(section_, key); }

  const std::string& section() const { return section_; }
  const std::vector<std::pair<std::string, std::string>>& used() const { return used_; }

 private:
  const Config& c_;
  std::string section_;
  std::vector<std::pair<std::string, std::string>> used_;
};

// Energy unit for lattice and cavity commands: |u| unless `unit = raw`.
struct EnergyUnit {
  double scale = 1;
  std::string label;
};

EnergyUnit energy_unit(Params& p, double u) {
  const std::string unit = p.text("unit", "abs_u");
  if (unit == "raw") return {1.0, "energy"};
  if (unit != "abs_u") throw Error(ErrorKind::Validation, p.section() + ".unit must be abs_u or raw");
  if (u == 0.0) throw Error(ErrorKind::ZeroInteraction, "unit = abs_u needs u != 0");
  return {std::abs(u), "|u|"};
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  const RunConfig& run;
  Params& params;
  std::vector<std::pair<std::string, CurveFile>> files;

  CurveFile make(const std::string& kind, std::vector<Column> columns) const {
    CurveFile f;
    f.add_meta("command", run.command);
    f.add_meta("content", kind);
    f.add_meta("version", KERRPAIR_VERSION);
    if (!run.reproducible) f.add_meta("generated", timestamp());
    f.columns = std::move(columns);
    return f;
  }

  // Parameters are appended at the end so every key read is included.
  void add(const std::string& tag, CurveFile f) { files.emplace_back(tag, std::move(f)); }

  void flush(std::ostream& out) {
    if (!run.out) return;
    for (auto& [tag, f] : files) {
      for (const auto& [k, v] : params.used()) f.add_meta(params.section() + "." + k, v);
      const std::string path = tag.empty() ? *run.out : sibling_path(*run.out, tag, run.format);
      write_curve_file(f, path, run.format);
      out << "wrote " << path << "\n";
    }
  }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

// ---------------------------------------------------------------------------

void cmd_continuum_bound(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "continuum");
  continuum::WaveguideParams w;
  w.kappa = p.num("kappa", 1.0);
  w.beta = p.num("beta", -1.0);
  w.omega_k0 = p.num("omega_k0", 0.0);
  w.v = p.num("v", 1.0);
  w.length = p.num("length", 1.0);
  w.validate();

  const auto outcome = continuum::bound_state_continuum(w);
  if (const auto* none = std::get_if<continuum::NoBoundState>(&outcome)) {
    throw Error(ErrorKind::Validation, "no bound state: " + none->reason);
  }
  const auto& bs = std::get<continuum::ContinuumBoundState>(outcome);
  const std::size_t n = p.count("points", 401, 2);
  const double x_half = p.num("x_halfwidth", 8.0 / bs.xi);
  const double k_half = p.num("k_halfwidth", 8.0 * bs.xi);
  const double q_max = p.num("spectrum_q_max", 3.0);
  const std::size_t n_spec = p.count("spectrum_points", 201, 2);
  if (!(x_half > 0) || !(k_half > 0) || !(q_max > 0)) {
    throw Error(ErrorKind::Validation, "sampling half-widths must be positive");
  }

  const double shifted = bs.dimensionless_energy(w.beta, w.kappa);
  Output o{run, p, {}};
  CurveFile amp = o.make("bound-state amplitudes",
                         {{"dx", "length"}, {"f_dx", "length^-1/2"}, {"dk", "1/length"}, {"f_dk", "length^1/2"}});
  amp.add_meta("xi", bs.xi);
  amp.add_meta("E_b", bs.energy);
  const auto xs = linspace(-x_half, x_half, n);
  const auto ks = linspace(-k_half, k_half, n);
  for (std::size_t i = 0; i < n; ++i) amp.add_row({xs[i], bs.amp_position(xs[i]), ks[i], bs.amp_momentum(ks[i])});
  o.add("", std::move(amp));

  // Dimensionless spectrum at fixed total momentum: the free pair gives
  // sgn(beta) (dk / xi)^2, the bound level sits at -sgn(beta).
  CurveFile spec = o.make("two-photon spectrum", {{"q", "xi"}, {"E_continuum", "kappa^2/|beta|"}, {"E_bound", "kappa^2/|beta|"}});
  const double sb = w.beta > 0 ? 1.0 : -1.0;
  for (double q : linspace(-q_max, q_max, n_spec)) spec.add_row({q, sb * q * q, shifted});
  o.add("spectrum", std::move(spec));

  out << "xi=" << fmt(bs.xi) << " E_b_shifted=" << fmt(shifted) << "\n";
  out << "E_b=" << fmt(bs.energy) << " (2 omega_k0 - kappa^2/beta)\n";
  o.flush(out);
}

void cmd_wigner_map(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "wigner");
  const double xi = p.num("xi", 1.0);
  if (!(xi > 0)) throw Error(ErrorKind::Validation, "wigner.xi must be > 0");
  const std::size_t nx = p.count("nx", 41, 2);
  const std::size_t nk = p.count("nk", 41, 2);
  const double x_half = p.num("x_halfwidth", 3.0 / xi);
  const double k_half = p.num("k_halfwidth", 3.0 * xi);
  const bool oracle = p.flag("oracle", false);
  if (!(x_half > 0) || !(k_half > 0)) throw Error(ErrorKind::Validation, "grid half-widths must be positive");

  const continuum::ContinuumBoundState bs{xi, 0.0, 0.0};
  Output o{run, p, {}};
  std::vector<Column> cols{{"dx", "length"}, {"dk", "1/length"}, {"W", ""}};
  if (oracle) cols.push_back({"W_oracle", ""});
  CurveFile f = o.make("relative-coordinate Wigner function", cols);

  double w_min = INFINITY, w_max_abs = 0, worst = 0, at_x = 0, at_k = 0;
  for (double x : linspace(-x_half, x_half, nx)) {
    for (double k : linspace(-k_half, k_half, nk)) {
      const double w = continuum::wigner_closed_form(xi, x, k);
      std::vector<double> row{x, k, w};
      if (oracle) {
        const double wo = continuum::wigner_numeric_oracle(bs, x, k);
        worst = std::max(worst, std::abs(w - wo));
        row.push_back(wo);
      }
      if (w < w_min) w_min = w, at_x = x, at_k = k;
      w_max_abs = std::max(w_max_abs, std::abs(w));
      f.add_row(std::move(row));
    }
  }
  f.add_meta("W_min", w_min);
  o.add("", std::move(f));

  out << "W_min=" << fmt(w_min) << " at dx=" << fmt(at_x) << " dk=" << fmt(at_k) << "\n";
  out << "negative values: " << yes_no(w_min < 0) << "\n";
  if (oracle) out << "max |closed form - oracle| / max |W| = " << fmt(worst / w_max_abs, 4) << "\n";
  o.flush(out);
}

void cmd_epr(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "epr");
  const double xi = p.num("xi", 1.0);
  const double w_p = p.num("w_p", 0.1);
  const double k0 = p.num("k0", 0.0);
  if (!(xi > 0) || !(w_p > 0)) throw Error(ErrorKind::Validation, "epr needs xi > 0 and w_p > 0");
  continuum::PairGrid grid = continuum::PairGrid::defaults(xi, w_p);
  grid.n_sum = p.count("n_sum", static_cast<long>(grid.n_sum), 2);
  grid.n_diff = p.count("n_diff", static_cast<long>(grid.n_diff), 2);
  grid.sum_halfwidth = p.num("sum_halfwidth", grid.sum_halfwidth);
  grid.diff_halfwidth = p.num("diff_halfwidth", grid.diff_halfwidth);

  const auto state = continuum::gaussian_pump_state(xi, w_p, k0, grid);
  const auto r = continuum::epr_uncertainty_product(state);
  const double reference = continuum::epr_product_reference(w_p, xi);

  Output o{run, p, {}};
  CurveFile f = o.make("EPR uncertainty product", {{"product", ""},
                                                   {"var_dx", "length^2"},
                                                   {"var_K", "1/length^2"},
                                                   {"reference", ""},
                                                   {"refined_product", ""}});
  f.add_row({r.product, r.var_relative_position, r.var_total_momentum, reference, r.refined_product});
  o.add("", std::move(f));

  out << "product=" << fmt(r.product) << " reference (W_p/xi)^2/8=" << fmt(reference) << "\n";
  out << "var(x2-x1)=" << fmt(r.var_relative_position) << " var(k1+k2)=" << fmt(r.var_total_momentum) << "\n";
  out << "violates separability bound (>=1): " << yes_no(r.violates_separability)
      << ", violates EPR bound (>=1/4): " << yes_no(r.violates_epr) << "\n";
  o.flush(out);
}

void cmd_lattice(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "lattice");
  const double u_in = p.num("u", 1.0);
  const EnergyUnit unit = energy_unit(p, u_in);
  lattice::LatticeParams lp;
  lp.u = u_in;
  lp.omega_c = p.num("omega_c", 0.0) * unit.scale;
  const double j0 = p.num("j0", 1.0) * unit.scale;
  lp.N = static_cast<int>(p.count("N", 51, 3));
  lp.b = p.num("b", 1.0);
  const long k_index = p.integer("k0_index", 0);
  lp.k0 = 2.0 * std::numbers::pi * static_cast<double>(k_index) / (lp.N * lp.b);
  const double c = std::cos(lp.k0 * lp.b);
  if (std::abs(c) < 1e-12) {
    if (j0 != 0.0) throw Error(ErrorKind::Validation, "J_0 must vanish where cos(k0 b) = 0");
    lp.J = 0.0;
  } else {
    lp.J = j0 / (4.0 * c);
  }
  const double gap_max = p.num("gap_j0_max", 20.0);
  const std::size_t gap_points = p.count("gap_points", 201, 2);
  const std::vector<double> ratios = p.list("ratios", {0.25, 0.5, 1.0, 2.0, 4.0});
  lp.validate();

  const auto spectrum = lattice::exact_diagonalize(lp);
  const auto bs = lattice::bound_state_lattice(lp);
  const double s = unit.scale;

  Output o{run, p, {}};
  CurveFile spec = o.make("two-photon spectrum", {{"index", ""}, {"E", unit.label}, {"bound", ""}});
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const bool is_bound = spectrum.bound_index && *spectrum.bound_index == static_cast<std::size_t>(i);
    spec.add_row({static_cast<double>(i), spectrum.eigenvalues(i) / s, is_bound ? 1.0 : 0.0});
  }
  o.add("", std::move(spec));

  std::vector<double> j0_axis = linspace(0.0, gap_max * s, gap_points);
  CurveFile gap = o.make("binding gap", {{"J0", unit.label}, {"dE", unit.label}});
  for (const auto& [jj, de] : lattice::binding_gap_curve(lp.u, j0_axis)) gap.add_row({jj / s, de / s});
  o.add("gap", std::move(gap));

  std::vector<Column> jcols{{"j", "sites"}};
  std::vector<lattice::JointProbability> probs;
  for (double r : ratios) {
    const auto q = lattice::LatticeParams::from_pair_hopping(r * lp.u, lp.u, lp.omega_c, lp.N);
    probs.push_back(lattice::joint_probability(lattice::bound_state_lattice(q).amplitudes));
    jcols.push_back({"P_" + format_number(r), ""});
  }
  CurveFile joint = o.make("relative-distance distribution", jcols);
  for (std::size_t k = 0; k < probs.front().j.size(); ++k) {
    std::vector<double> row{static_cast<double>(probs.front().j[k])};
    for (const auto& pr : probs) row.push_back(pr.p[k]);
    joint.add_row(std::move(row));
  }
  o.add("joint", std::move(joint));

  out << "eta=" << fmt(bs.eta) << " E_b analytic=" << fmt(bs.energy / s, 15);
  if (spectrum.bound_index) {
    const double numeric = spectrum.eigenvalues(static_cast<Eigen::Index>(*spectrum.bound_index));
    const double discrepancy = std::abs(numeric - bs.energy) / std::abs(bs.energy == 0 ? 1.0 : bs.energy);
    const numerics::RealVector v = spectrum.eigenvectors.col(static_cast<Eigen::Index>(*spectrum.bound_index)).real();
    out << " numeric=" << fmt(numeric / s, 15) << " relative discrepancy=" << fmt(discrepancy, 3) << "\n";
    out << "overlap with analytic amplitudes=" << fmt(lattice::overlap(v, bs.relative_basis_vector()), 15) << "\n";
  } else {
    out << " numeric: no split-off level found\n";
  }
  out << "binding gap=" << fmt(lattice::binding_gap(lp) / s) << " " << unit.label << "\n";
  bool monotone = true;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    const std::size_t centre = probs[k].j.size() / 2;
    monotone = monotone && probs[k].p[centre] < probs[k - 1].p[centre];
  }
  out << "P(0) decreasing along the listed J0/u ratios: " << yes_no(monotone) << "\n";
  o.flush(out);
}

void cmd_pump_sweep(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "lindblad");
  const std::string preset_name = p.text("preset", "none");
  lindblad::PumpPreset preset;
  const bool has_preset = preset_name != "none";
  if (has_preset) preset = lindblad::pump_preset(preset_name);

  const double u_default = has_preset ? preset.chain.u : 1.0;
  const double u = p.num("u", u_default);
  const EnergyUnit unit = energy_unit(p, u);
  const double s = unit.scale;
  // Presets are stated in units of |u|.
  const double j0 = p.num("j0", has_preset ? 4.0 * preset.chain.J : 0.1) * s;

  lindblad::CavityChain chain = lindblad::CavityChain::from_pair_hopping(j0, u, p.num("omega_c", 0.0) * s);
  lindblad::DriveParams drive;
  drive.F = p.num("F", 0.01) * s;
  drive.gamma = p.num("gamma", 0.1) * s;
  const std::size_t sites = p.count("sites", 3, 1);
  const std::size_t n_max = p.count("n_max", 4, 1);
  const double b = p.num("b", 1.0);
  const long k_index = p.integer("k0_index", 0);
  const double k0 = 2.0 * std::numbers::pi * static_cast<double>(k_index) / (static_cast<double>(sites) * b);
  drive.psi = lindblad::DriveParams::phases_for_pair_momentum(k0, b, sites);

  const double r1 = lindblad::single_photon_resonance(chain), r2 = lindblad::pair_resonance(chain);
  const double lo = p.num("omega_lo", (std::min(r1, r2) - s) / s) * s;
  const double hi = p.num("omega_hi", (std::max(r1, r2) + s) / s) * s;
  const std::size_t points = p.count("points", 200, 3);
  const std::size_t threads = p.count("threads", 0, 0);
  const bool check_truncation = p.flag("truncation_check", true);

  const lindblad::FockBasis basis(sites, n_max);
  const std::vector<double> grid = linspace(lo, hi, points);
  const auto sweep = lindblad::pump_sweep(chain, drive, grid, basis, threads);

  Output o{run, p, {}};
  std::vector<Column> cols{{"omega_p", unit.label}};
  for (std::size_t j = 0; j < sites; ++j) cols.push_back({"N_" + std::to_string(j + 1), "photons"});
  for (std::size_t j = 0; j < sites; ++j) cols.push_back({"g2_" + std::to_string(j + 1), ""});
  CurveFile f = o.make("pump sweep", cols);
  for (const auto& pt : sweep.points) {
    std::vector<double> row{pt.omega_p / s};
    for (double n : pt.obs.N) row.push_back(n);
    for (const auto& g : pt.obs.g2) row.push_back(g.value_or(std::numeric_limits<double>::quiet_NaN()));
    f.add_row(std::move(row));
  }
  o.add("", std::move(f));

  out << "single-photon resonance omega_c + J0/2 = " << fmt(r1 / s) << " " << unit.label << "\n";
  out << "pair resonance E_b/2 = " << fmt(r2 / s) << " " << unit.label << "\n";
  for (std::size_t j = 0; j < sites; ++j) {
    out << "site " << j + 1 << ": N peak at " << fmt(sweep.number_peaks[j].omega_p / s) << ", g2 peak at "
        << fmt(sweep.g2_peaks[j].omega_p / s) << " (g2=" << fmt(sweep.g2_peaks[j].value, 6) << ")\n";
  }

  const double far = 10.0 * std::max(std::abs(u), std::abs(j0));
  for (double side : {1.0, -1.0}) {
    lindblad::DriveParams d = drive;
    d.omega_p = chain.omega_c + side * far;
    const lindblad::Liouvillian l(lindblad::build_hamiltonian(chain, d, basis), d.gamma, basis);
    const auto obs = lindblad::observables(lindblad::steady_state(l).state);
    out << "far-detuned g2 at omega_c " << (side > 0 ? "+ " : "- ") << fmt(far / s) << ": "
        << (obs.g2[0] ? fmt(*obs.g2[0], 6) : std::string("absent")) << "\n";
  }

  if (check_truncation) {
    lindblad::DriveParams d = drive;
    d.omega_p = sweep.g2_peaks[0].omega_p;
    const std::vector<std::size_t> levels{n_max, n_max + 1};
    const auto report = lindblad::truncation_convergence(chain, d, levels, sites);
    out << "truncation n_max " << n_max << " -> " << n_max + 1 << " at the g2 peak: max relative change "
        << fmt(*report.steps.back().max_relative_change, 3) << (report.converged ? " (converged)" : " (not converged)")
        << "\n";
  }
  o.flush(out);
}

void cmd_epr_linear(const RunConfig& run, std::ostream& out) {
  Params p(run.params, "linear");
  const std::size_t m = p.count("M", 3, 2);
  const double kappa = p.num("kappa", 0.5);
  const double length = p.num("length", 1.0);
  const double omega_k0 = p.num("omega_k0", 0.0);
  const auto r = continuum::epr_linear_dispersion(m, kappa, length, omega_k0);

  Output o{run, p, {}};
  CurveFile spec = o.make("linear-dispersion spectrum", {{"index", ""}, {"E", "energy"}});
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) spec.add_row({static_cast<double>(i), r.eigenvalues(i)});
  o.add("", std::move(spec));

  if (r.degenerate_free_spectrum) {
    out << "all eigenvalues equal " << fmt(2.0 * omega_k0) << ": degenerate free spectrum\n";
  } else {
    CurveFile vec = o.make("bound vector", {{"index", ""}, {"component", ""}});
    for (Eigen::Index i = 0; i < r.bound_vector.size(); ++i) vec.add_row({static_cast<double>(i), r.bound_vector(i)});
    o.add("vector", std::move(vec));
    out << "nonzero eigenvalue (E_b - 2 omega_k0)=" << fmt(r.bound_energy - 2.0 * omega_k0, 15)
        << " trace=" << fmt((2.0 * kappa / length) * (2.0 * static_cast<double>(m) - 1.0), 15) << "\n";
    out << "bound vector:";
    for (Eigen::Index i = 0; i < r.bound_vector.size(); ++i) out << " " << fmt(r.bound_vector(i), 12);
    out << "\n";
    out << "rank-1 residual=" << fmt(r.rank_one_residual, 3) << "\n";
  }
  o.flush(out);
}

const std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>>& commands() {
  static const std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> table{
      {"continuum-bound", cmd_continuum_bound}, {"wigner-map", cmd_wigner_map}, {"epr", cmd_epr},
      {"lattice", cmd_lattice},                 {"pump-sweep", cmd_pump_sweep}, {"epr-linear", cmd_epr_linear},
  };
  return table;
}

struct CommandSpec {
  std::string name;
  std::string section;
  std::string description;
  std::vector<std::string> keys;  // exposed as --key (underscores become dashes)
};

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs{
      {"continuum-bound", "continuum", "bound pair of the Kerr wave-guide",
       {"kappa", "beta", "omega_k0", "v", "length", "points", "x_halfwidth", "k_halfwidth"}},
      {"wigner-map", "wigner", "Wigner function of the relative coordinate",
       {"xi", "nx", "nk", "x_halfwidth", "k_halfwidth", "oracle"}},
      {"epr", "epr", "EPR uncertainty product of Gaussian-pumped pairs",
       {"xi", "w_p", "k0", "n_sum", "n_diff", "sum_halfwidth", "diff_halfwidth"}},
      {"lattice", "lattice", "two photons on a Bose-Hubbard ring",
       {"u", "j0", "omega_c", "N", "b", "k0_index", "gap_j0_max", "gap_points", "ratios", "unit"}},
      {"pump-sweep", "lindblad", "steady states of a pumped lossy cavity ring",
       {"preset", "u", "j0", "omega_c", "F", "gamma", "omega_lo", "omega_hi", "points", "n_max", "sites", "k0_index",
        "threads", "unit"}},
      {"epr-linear", "linear", "exactly solvable linear-dispersion pair", {"M", "kappa", "length", "omega_k0"}},
  };
  return specs;
}

}  // namespace

void run_command(const RunConfig& config, std::ostream& out) {
  const auto& table = commands();
  const auto it = table.find(config.command);
  if (it == table.end()) throw Error(ErrorKind::Validation, "unknown command '" + config.command + "'");
  it->second(config, out);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon bound states in Kerr wave-guides and cavity chains", "kerrpair"};
  app.set_version_flag("--version", std::string(KERRPAIR_VERSION));
  app.require_subcommand(1);

  struct Parsed {
    std::string config_path;
    std::string out;
    std::string format = "csv";
    bool reproducible = false;
    std::vector<std::string> sets;
    std::map<std::string, std::string> values;
  };
  std::map<std::string, Parsed> parsed;
  for (const auto& spec : command_specs()) parsed[spec.name];

  for (const auto& spec : command_specs()) {
    Parsed& ps = parsed[spec.name];
    CLI::App* sub = app.add_subcommand(spec.name, spec.description);
    sub->add_option("--config", ps.config_path, "INI-style parameter file");
    sub->add_option("--out", ps.out, "output file; extra curves get .<tag> suffixes");
    sub->add_option("--format", ps.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--reproducible", ps.reproducible, "omit the timestamp from file metadata");
    sub->add_option("--set", ps.sets, "override a parameter, key=value or section.key=value");
    for (const auto& key : spec.keys) {
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option("--" + flag, ps.values[key], "[" + spec.section + "] " + key);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const auto& spec : command_specs()) {
      CLI::App* sub = app.get_subcommand(spec.name);
      if (!sub->parsed()) continue;
      const Parsed& ps = parsed[spec.name];
      RunConfig run;
      run.command = spec.name;
      if (!ps.config_path.empty()) run.params = Config::load(ps.config_path);
      for (const auto& s : ps.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Validation, "--set expects key=value, got '" + s + "'");
        std::string key = s.substr(0, eq);
        std::string section = spec.section;
        if (const auto dot = key.find('.'); dot != std::string::npos) {
          section = key.substr(0, dot);
          key = key.substr(dot + 1);
        }
        run.params.set(section, key, s.substr(eq + 1));
      }
      for (const auto& key : spec.keys) {
        const CLI::Option* opt = sub->get_option("--" + [&] {
          std::string f = key;
          std::replace(f.begin(), f.end(), '_', '-');
          return f;
        }());
        if (opt->count() > 0) run.params.set(spec.section, key, ps.values.at(key));
      }
      if (!ps.out.empty()) run.out = ps.out;
      run.format = ps.format == "json" ? Format::Json : Format::Csv;
      run.reproducible = ps.reproducible;
      run_command(run, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace kerrpair::cli
