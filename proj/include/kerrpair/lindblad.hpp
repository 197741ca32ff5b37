#pragma once

// Coherently pumped chain of lossy Kerr cavities,
//   d rho / dt = -i [H, rho] + gamma sum_j (2 a_j rho a+_j - a+_j a_j rho - rho a+_j a_j),
// written in the frame rotating at the pump frequency. With this dissipator
// the photon number decays at rate 2 gamma.
//
// Density matrices are vectorized column-major: vec(A X B) = (B^T kron A) vec(X).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "kerrpair/lattice.hpp"
#include "kerrpair/numerics.hpp"

namespace kerrpair::lindblad {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::ComplexVector;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Occupation tuples (m_1, .., m_M), 0 <= m_j <= n_max, in lexicographic order
// with m_1 most significant. Index 0 is the vacuum.
class FockBasis {
 public:
  FockBasis(std::size_t sites = 3, std::size_t n_max = 4);

  std::size_t sites() const { return sites_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t dimension() const { return dimension_; }

  std::vector<std::size_t> occupations(std::size_t index) const;
  std::size_t index(std::span<const std::size_t> occupations) const;
  std::size_t occupation(std::size_t index, std::size_t site) const;

  SparseMatrix annihilation(std::size_t site) const;
  SparseMatrix number(std::size_t site) const;

  bool operator==(const FockBasis&) const = default;

 private:
  std::size_t sites_;
  std::size_t n_max_;
  std::size_t dimension_;
  std::size_t stride(std::size_t site) const;
};

// Identical cavities; bonds form a ring for M >= 3, a single bond for M = 2.
struct CavityChain {
  double omega_c = 0;
  double J = 0.025;
  double u = 1;

  static CavityChain from_lattice(const lattice::LatticeParams& p);
  static CavityChain from_pair_hopping(double j0, double u, double omega_c = 0);
};

struct DriveParams {
  double F = 0.01;
  double omega_p = 0;
  std::vector<double> psi;  // per-site phases; empty means all zero
  double gamma = 0.1;

  void validate(std::size_t sites) const;
  double phase(std::size_t site) const;

  // psi_j = 2 k0 b j
  static std::vector<double> phases_for_pair_momentum(double k0, double b, std::size_t sites);
};

/// Rotating-frame Hamiltonian
///   sum_j (omega_c - omega_p) n_j + u a+_j a+_j a_j a_j + J (a+_{j+1} a_j + h.c.)
///         + F (e^{i psi_j} a+_j + h.c.).
/// Throws TruncationTooSmall when F^2 / gamma^2 > n_max / 4.
SparseMatrix build_hamiltonian(const CavityChain& chain, const DriveParams& drive, const FockBasis& basis);

/// Matrix-free Liouvillian
///   L(X) = -i (H_eff X - X H_eff^H) + 2 gamma sum_j a_j X a+_j,  H_eff = H - i gamma sum_j n_j.
class Liouvillian {
 public:
  Liouvillian(const SparseMatrix& hamiltonian, double gamma, const FockBasis& basis);

  const FockBasis& basis() const { return basis_; }
  double gamma() const { return gamma_; }
  std::size_t dimension() const { return basis_.dimension(); }
  const SparseMatrix& hamiltonian() const { return h_; }
  const SparseMatrix& effective_hamiltonian() const { return h_eff_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix apply_adjoint(const ComplexMatrix& y) const;
  ComplexVector apply_vec(const ComplexVector& x) const;

  /// Dense d^2 x d^2 superoperator. Throws Validation above `max_rows` rows.
  ComplexMatrix dense(std::size_t max_rows = 4096) const;

  /// Estimate of the spectral norm by power iteration on L^H L.
  double norm_estimate(std::size_t iterations = 12) const;

 private:
  FockBasis basis_;
  double gamma_;
  SparseMatrix h_;
  SparseMatrix h_eff_;
  std::vector<SparseMatrix> a_;
  std::vector<SparseMatrix> a_dag_;
};

Liouvillian build_liouvillian(const SparseMatrix& hamiltonian, double gamma, const FockBasis& basis);

struct DensityMatrix {
  FockBasis basis;
  ComplexMatrix rho;
};

enum class SolverPath { Dense, Iterative };

struct SteadyStateOptions {
  std::size_t dense_limit = 1024;  // largest d^2 handled by SVD
  double residual_tol = 1e-10;     // ||L rho|| / (||L||_2 ||rho||)
  double uniqueness_tol = 1e-8;    // trace distance between two anchored solves
  double psd_tol = 1e-10;
  numerics::GmresOptions gmres{1e-14, 60, 600};
};

struct SteadyState {
  DensityMatrix state;
  double residual = 0;
  SolverPath path = SolverPath::Dense;
  std::size_t iterations = 0;
};

/// Unique null vector of L as a density matrix: Hermitian, unit trace, PSD.
/// Throws DegenerateKernel when the kernel is not one-dimensional.
SteadyState steady_state(const Liouvillian& l, const SteadyStateOptions& options = {});

struct EvolutionOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
};

/// rho(t) from adaptive Dormand-Prince integration.
ComplexMatrix evolve(const Liouvillian& l, const ComplexMatrix& rho0, double t, const EvolutionOptions& options = {});

/// (1/2) ||a - b||_1 for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

struct SteadyObservables {
  std::vector<double> N;                  // <a+_j a_j>
  std::vector<std::optional<double>> g2;  // <a+_j a+_j a_j a_j> / N_j^2, absent when N_j < 1e-14
  std::size_t n_max = 0;
  double residual = 0;
};

SteadyObservables observables(const DensityMatrix& rho);

/// |alpha_1, .., alpha_M> <..| projected on the truncated basis and renormalized.
DensityMatrix coherent_state(const FockBasis& basis, std::span<const Complex> alpha);

struct SweepPoint {
  double omega_p = 0;
  SteadyObservables obs;
};

struct Peak {
  double omega_p = 0;
  double value = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<Peak> number_peaks;  // per site, argmax of N_j with parabolic refinement
  std::vector<Peak> g2_peaks;      // per site, argmax of g2_jj
};

/// Sweeps pump frequencies. The grid must bracket omega_c + J_0/2 and
/// omega_c + sgn(u) sqrt(J_0^2 + 4u^2) / 2 (J_0 = 4J); Validation otherwise.
/// Points are solved in parallel over `threads` workers (0: hardware concurrency).
SweepResult pump_sweep(const CavityChain& chain, const DriveParams& drive_template, std::span<const double> omega_p,
                       const FockBasis& basis, std::size_t threads = 0);

/// Resonances the sweep grid has to cover.
double single_photon_resonance(const CavityChain& chain);
double pair_resonance(const CavityChain& chain);

struct TruncationStep {
  std::size_t n_max = 0;
  SteadyObservables obs;
  std::optional<double> max_relative_change;  // against the previous n_max
};

struct TruncationReport {
  std::vector<TruncationStep> steps;
  bool converged = false;  // last change < tol
};

TruncationReport truncation_convergence(const CavityChain& chain, const DriveParams& drive,
                                        std::span<const std::size_t> n_max_list, std::size_t sites = 3,
                                        double tol = 1e-4);

struct PumpPreset {
  std::string name;
  CavityChain chain;
  DriveParams drive;  // omega_p unset
  double omega_lo = 0;
  double omega_hi = 0;
  std::size_t points = 200;

  std::vector<double> grid() const;
};

/// fig3a..fig3d: F = 0.01|u|, gamma = 0.1|u|, psi = 0, (J_0, u) = (0.1, -1), (0.1, 1), (1, 1), (4, 1).
PumpPreset pump_preset(std::string_view name);
std::vector<std::string> pump_preset_names();

}  // namespace kerrpair::lindblad
