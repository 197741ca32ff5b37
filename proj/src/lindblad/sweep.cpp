#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "kerrpair/error.hpp"
#include "kerrpair/lindblad.hpp"

namespace kerrpair::lindblad {
namespace {

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Argmax with a parabola through the neighbours when it is interior.
Peak locate_peak(std::span<const double> x, std::span<const double> y) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > y[best]) best = i;
  }
  Peak p{x[best], y[best]};
  if (best == 0 || best + 1 >= y.size() || !std::isfinite(y[best - 1]) || !std::isfinite(y[best + 1])) return p;
  const double x0 = x[best - 1], x1 = x[best], x2 = x[best + 1];
  const double y0 = y[best - 1], y1 = y[best], y2 = y[best + 1];
  const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
  const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
  const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
  const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
  if (!(a < 0)) return p;
  const double xv = -b / (2.0 * a);
  if (xv < x0 || xv > x2) return p;
  return {xv, c - b * b / (4.0 * a)};
}

SteadyObservables solve_point(const CavityChain& chain, const DriveParams& drive, const FockBasis& basis) {
  const Liouvillian l(build_hamiltonian(chain, drive, basis), drive.gamma, basis);
  const SteadyState ss = steady_state(l);
  SteadyObservables obs = observables(ss.state);
  obs.residual = ss.residual;
  return obs;
}

}  // namespace

double single_photon_resonance(const CavityChain& chain) { return chain.omega_c + 2.0 * chain.J; }

double pair_resonance(const CavityChain& chain) {
  const double j0 = 4.0 * chain.J;
  return chain.omega_c + sign(chain.u) * std::sqrt(j0 * j0 + 4.0 * chain.u * chain.u) / 2.0;
}

SweepResult pump_sweep(const CavityChain& chain, const DriveParams& drive_template, std::span<const double> omega_p,
                       const FockBasis& basis, std::size_t threads) {
  drive_template.validate(basis.sites());
  if (omega_p.size() < 3) throw Error(ErrorKind::Validation, "pump sweep needs at least 3 frequencies");
  for (std::size_t i = 1; i < omega_p.size(); ++i) {
    if (!(omega_p[i] > omega_p[i - 1])) throw Error(ErrorKind::Validation, "pump frequencies must increase");
  }
  const double lo = omega_p.front(), hi = omega_p.back();
  for (double r : {single_photon_resonance(chain), pair_resonance(chain)}) {
    if (r < lo || r > hi) {
      std::ostringstream msg;
      msg << "pump grid [" << lo << ", " << hi << "] misses the resonance at " << r;
      throw Error(ErrorKind::Validation, msg.str());
    }
  }

  SweepResult out;
  out.points.resize(omega_p.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, omega_p.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < omega_p.size(); i = next++) {
      try {
        DriveParams d = drive_template;
        d.omega_p = omega_p[i];
        out.points[i] = {omega_p[i], solve_point(chain, d, basis)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = omega_p.size();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const double missing = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < basis.sites(); ++j) {
    std::vector<double> n(omega_p.size()), g(omega_p.size());
    for (std::size_t i = 0; i < omega_p.size(); ++i) {
      n[i] = out.points[i].obs.N[j];
      g[i] = out.points[i].obs.g2[j].value_or(missing);
    }
    out.number_peaks.push_back(locate_peak(omega_p, n));
    out.g2_peaks.push_back(locate_peak(omega_p, g));
  }
  return out;
}

TruncationReport truncation_convergence(const CavityChain& chain, const DriveParams& drive,
                                        std::span<const std::size_t> n_max_list, std::size_t sites, double tol) {
  for (std::size_t i = 1; i < n_max_list.size(); ++i) {
    if (n_max_list[i] <= n_max_list[i - 1]) throw Error(ErrorKind::Validation, "n_max list must increase");
  }
  TruncationReport report;
  for (std::size_t n_max : n_max_list) {
    TruncationStep step;
    step.n_max = n_max;
    step.obs = solve_point(chain, drive, FockBasis(sites, n_max));
    if (!report.steps.empty()) {
      const SteadyObservables& prev = report.steps.back().obs;
      double change = 0;
      for (std::size_t j = 0; j < sites; ++j) {
        change = std::max(change, std::abs(step.obs.N[j] - prev.N[j]) / std::abs(prev.N[j]));
        if (step.obs.g2[j] && prev.g2[j]) {
          change = std::max(change, std::abs(*step.obs.g2[j] - *prev.g2[j]) / std::abs(*prev.g2[j]));
        } else if (step.obs.g2[j].has_value() != prev.g2[j].has_value()) {
          change = std::numeric_limits<double>::infinity();
        }
      }
      step.max_relative_change = change;
    }
    report.steps.push_back(step);
  }
  report.converged = report.steps.size() >= 2 && *report.steps.back().max_relative_change < tol;
  return report;
}

std::vector<double> PumpPreset::grid() const {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = omega_lo + (omega_hi - omega_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

PumpPreset pump_preset(std::string_view name) {
  double j0 = 0, u = 0;
  if (name == "fig3a") {
    j0 = 0.1, u = -1;
  } else if (name == "fig3b") {
    j0 = 0.1, u = 1;
  } else if (name == "fig3c") {
    j0 = 1, u = 1;
  } else if (name == "fig3d") {
    j0 = 4, u = 1;
  } else {
    throw Error(ErrorKind::Validation, "unknown pump preset '" + std::string(name) + "'");
  }
  PumpPreset p;
  p.name = std::string(name);
  p.chain = CavityChain::from_pair_hopping(j0, u);
  p.drive.F = 0.01;
  p.drive.gamma = 0.1;
  p.drive.psi.assign(3, 0.0);
  const double a = single_photon_resonance(p.chain), b = pair_resonance(p.chain);
  p.omega_lo = std::min(a, b) - 1.0;
  p.omega_hi = std::max(a, b) + 1.0;
  return p;
}

std::vector<std::string> pump_preset_names() { return {"fig3a", "fig3b", "fig3c", "fig3d"}; }

}  // namespace kerrpair::lindblad
