#pragma once

// Two photons in a Kerr-nonlinear single-mode wave-guide (hbar = c = 1).
//
// Momentum conventions. A pair with total momentum 2 k0 has k1 = k0 + dk and
// k2 = k0 - dk. Functions taking `delta_k` use this *relative* momentum
// dk = (k1 - k2) / 2, which is the variable conjugate to dx = x1 - x2.
// Functions taking `k_difference` use D = k1 - k2 = 2 dk. Convert with
// relative_momentum() / momentum_difference(); never mix the two.

#include <cstddef>
#include <string>
#include <variant>

#include "kerrpair/numerics.hpp"

namespace kerrpair::continuum {

inline double relative_momentum(double k1, double k2) { return 0.5 * (k1 - k2); }
inline double momentum_difference(double delta_k) { return 2.0 * delta_k; }

struct WaveguideParams {
  double omega_k0 = 0;  // carrier frequency
  double v = 1;         // group velocity
  double beta = -1;     // dispersion curvature, omega_{k0+dk} ~ omega_k0 + v dk + beta dk^2 / 2
  double kappa = 1;     // photon-photon coupling (energy x length)
  double length = 1;    // quantization length L

  void validate() const;
};

struct MaterialParams {
  double omega = 1;
  double chi3 = 1;
  double n_r = 1;
  double area = 1;
  double eps0 = 1;
};

/// kappa = pi omega^2 chi3 / (2 n_r^4 A eps0).
double kappa_from_material(const MaterialParams& m);

/// Energy change of a pair split symmetrically about k0 by +-delta_k: beta dk^2.
double pair_energy_detuning(double beta, double delta_k);

/// The bound pair. All amplitudes carry unit L2 norm over their own variable.
struct ContinuumBoundState {
  double xi = 1;         // inverse correlation length |kappa / beta|
  double energy = 0;     // E_b = 2 omega_k0 - kappa^2 / beta
  double omega_k0 = 0;

  // sqrt(xi) exp(-xi |dx|)
  double amp_position(double delta_x) const;
  // sqrt(2/pi) xi^{3/2} / (dk^2 + xi^2); unit norm over dk
  double amp_momentum(double delta_k) const;
  // Same state over D = k1 - k2; unit norm over D
  double amp_momentum_difference(double k_difference) const;

  // Unnormalized prefactors as printed with box length L: sqrt(xi/(2L)) and
  // 8 xi^{3/2} / sqrt(2L). Kept for cross-checks only.
  double printed_position_prefactor(double length) const;
  double printed_momentum_prefactor(double length) const;

  // (E - 2 omega_k0) |beta| / kappa^2; equals -sgn(beta).
  double dimensionless_energy(double beta, double kappa) const;
};

struct NoBoundState {
  double kappa_beta = 0;  // product that failed kappa * beta < 0
  std::string reason;
};

using BoundStateOutcome = std::variant<ContinuumBoundState, NoBoundState>;

/// Bound pair for kappa * beta < 0. Throws Validation for beta == 0.
BoundStateOutcome bound_state_continuum(const WaveguideParams& p);

// ---------------------------------------------------------------------------
// Wigner function of the relative coordinate (the delta over k1 + k2 stripped)
// ---------------------------------------------------------------------------

struct WignerSample {
  double delta_x = 0;
  double delta_k = 0;  // relative momentum
  double value = 0;
};

/// xi^2 e^{-2 xi |dx|} / (2 pi^2 (dk^2 + xi^2)) * [cos(2 dk |dx|) + (xi / dk) sin(2 dk |dx|)].
/// For |dk| < 1e-8 xi the bracket is replaced by its limit 1 + 2 xi |dx|.
double wigner_closed_form(double xi, double delta_x, double delta_k);

struct WignerOracleOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 4000;
};

/// Evaluates the parity-operator overlap integral
///   W = 1/(2 pi^2) \int dz e^{-2 i dx z} g*(dk + z) g(dk - z)
/// with g = bs.amp_momentum, by adaptive quadrature.
double wigner_numeric_oracle(const ContinuumBoundState& bs, double delta_x, double delta_k,
                             const WignerOracleOptions& options = {});

// ---------------------------------------------------------------------------
// Gaussian-pumped pairs and the EPR criteria
// ---------------------------------------------------------------------------

/// Grid over the sum K = k1 + k2 (rows) and the difference D = k1 - k2 (columns).
struct PairGrid {
  std::size_t n_sum = 512;
  std::size_t n_diff = 512;
  double sum_halfwidth = 1;   // K - 2 k0 in [-h, h]
  double diff_halfwidth = 1;  // D in [-h, h]

  numerics::UniformGrid sum_axis(double k0) const;
  numerics::UniformGrid diff_axis() const;

  /// 512 x 512 with K - 2k0 in +-6 W_p and D in +-80 xi.
  static PairGrid defaults(double xi, double w_p);
};

struct PumpedPairState {
  double k0 = 0;
  double w_p = 0;
  double xi = 0;
  PairGrid grid;
  // amplitude(i, j) at (K_i, D_j); sum |a|^2 dK dD = 1.
  numerics::ComplexMatrix amplitude;
  double norm_shift = 0;  // |grid norm before renormalization - 1|

  double k1(std::size_t i, std::size_t j) const;
  double k2(std::size_t i, std::size_t j) const;
};

/// amplitude = (2/pi)^{1/4} W_p^{-1/2} exp(-(K - 2k0)^2 / W_p^2) x f(D), renormalized on the grid.
///
/// Throws GridTooCoarse when the grid spans fewer than 8 standard deviations
/// along either axis, or when renormalization shifts the norm by more than 1e-3.
PumpedPairState gaussian_pump_state(double xi, double w_p, double k0, const PairGrid& grid);

struct EprResult {
  double product = 0;             // Var(x2 - x1) Var(k2 + k1)
  double var_relative_position = 0;
  double var_total_momentum = 0;
  double refined_product = 0;     // same product on the refinement grid
  bool violates_separability = false;  // product < 1
  bool violates_epr = false;           // product < 1/4
};

/// Joint position statistics come from the 2-D DFT of the momentum amplitude.
///
/// The estimate is repeated on a grid with twice the points per axis and
/// sqrt(2) wider spans; GridTooCoarse is thrown if either variance moves by
/// more than 1%.
EprResult epr_uncertainty_product(const PumpedPairState& s);

/// (1/8) (W_p / xi)^2.
inline double epr_product_reference(double w_p, double xi) { return 0.125 * (w_p / xi) * (w_p / xi); }

// ---------------------------------------------------------------------------
// Linear dispersion: the free-pair basis with an exactly solvable contact term
// ---------------------------------------------------------------------------

struct LinearDispersionResult {
  numerics::ComplexMatrix hamiltonian;  // includes 2 omega_k0 on the diagonal
  numerics::RealVector eigenvalues;     // ascending
  numerics::RealVector bound_vector;    // unit norm, first component >= 0; empty if kappa == 0
  double bound_energy = 0;
  double rank_one_residual = 0;  // ||(H - 2w) - (E_b - 2w) v v^T||_F / ||H - 2w||_F
  bool degenerate_free_spectrum = false;
};

/// M x M interaction matrix (2 kappa / L) w w^T with w = (1, sqrt2, ..., sqrt2)
/// in the normalized basis {|2_{k0}>, |1_{k0+q} 1_{k0-q}>, ...}.
LinearDispersionResult epr_linear_dispersion(std::size_t m, double kappa, double length, double omega_k0);

}  // namespace kerrpair::continuum
