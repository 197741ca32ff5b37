#pragma once

// Two photons on a periodic Bose-Hubbard ring
//   H = sum_j omega_c n_j + J (a+_{j+1} a_j + h.c.) + u a+_j a+_j a_j a_j.
//
// Pair amplitudes follow |psi> = sum_{j' >= j} f(j' - j) e^{i k0 b (j + j')} a+_j a+_j' |0>,
// so f(0) multiplies a doubly occupied site. In the orthonormal relative
// basis {|r>} the coefficients are c_0 = sqrt(2) f(0) and c_r = f(r), r >= 1.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kerrpair/numerics.hpp"

namespace kerrpair::lattice {

struct LatticeParams {
  double omega_c = 0;
  double J = 0.5;
  double u = 1;
  double b = 1;   // lattice period
  int N = 51;     // sites, periodic
  double k0 = 0;  // pair half-momentum, 2 pi n / (N b)

  /// J_0 = 4 J cos(k0 b), the energy scale of two free photons.
  double pair_hopping() const;

  /// Throws Validation for N < 3 or non-finite values, OffGridMomentum when
  /// k0 is not a multiple of 2 pi / (N b).
  void validate() const;

  /// Parameters with k0 = 0 and J = J_0 / 4.
  static LatticeParams from_pair_hopping(double j0, double u, double omega_c = 0, int n = 51);
};

/// omega_c + 2 J cos(k b). Throws OffGridMomentum for k off the ring grid.
double single_photon_dispersion(const LatticeParams& p, double k);

struct LatticeBoundState {
  double eta = 0;
  double energy = 0;
  // f(j) for j = 0..(N-1)/2, scaled so that 2 f(0)^2 + sum_{j>=1} f(j)^2 = 1.
  std::vector<double> amplitudes;
  double printed_prefactor = 0;      // 2 sqrt((1 - eta^2) / (N (1 + 3 eta^2)))
  double renormalized_prefactor = 0; // replaces the printed one after renormalization

  /// Orthonormal relative-basis coefficients c_r.
  numerics::RealVector relative_basis_vector() const;
};

/// E_b = 2 omega_c + sgn(u) sqrt(J_0^2 + 4 u^2),
/// eta = (-2u + sgn(u) sqrt(J_0^2 + 4u^2)) / J_0 (eta = 0 at J_0 = 0),
/// f(j) ~ eta^|j| - delta_{j,0} / 2. Throws ZeroInteraction for u == 0.
LatticeBoundState bound_state_lattice(const LatticeParams& p);

struct ScatteringState {
  double energy = 0;
  std::vector<double> amplitudes;  // f(j), j = 0..j_max, f(0) = 1
};

/// E_sc = 2 omega_c + J_0 cos(dk b),
/// f(j) = 2 (cos(dk j b) - 2u sin(dk j b) / (J_0 sin(dk b))) f(0) for j >= 1.
/// Throws ResonantDenominator when sin(dk b) == 0, Validation when J_0 == 0.
ScatteringState scattering_state(const LatticeParams& p, double delta_k, std::size_t j_max);

/// Max over j of the violation of the pair recursion
///   J_0 f(1) = 2 (E - 2 omega_c - 2u) f(0),
///   J_0 f(j+1) = 2 (E - 2 omega_c) f(j) - (1 + delta_{j,1}) J_0 f(j-1),
/// divided by max |f|.
double recursion_residual(double energy, std::span<const double> f, const LatticeParams& p);

/// Hermitian two-photon block at total momentum 2 k0 in the relative basis,
/// r = 0..(N-1)/2. Odd N only.
numerics::ComplexMatrix two_photon_block(const LatticeParams& p);

struct LatticeSpectrum {
  numerics::RealVector eigenvalues;  // ascending
  numerics::ComplexMatrix eigenvectors;
  std::optional<std::size_t> bound_index;  // |E - 2 omega_c| > |J_0| (1 + 1/N)
};

LatticeSpectrum exact_diagonalize(const LatticeParams& p);

/// |<a|b>| of two real vectors after normalization.
double overlap(const numerics::RealVector& a, const numerics::RealVector& b);

/// sqrt(J_0^2 + 4u^2) - |J_0|. Throws ZeroInteraction for u == 0.
double binding_gap(const LatticeParams& p);

/// (J_0, binding gap) pairs at fixed u.
std::vector<std::pair<double, double>> binding_gap_curve(double u, std::span<const double> j0_values);

enum class CouplingRegime { Strong, Weak };

struct AsymptoticBoundState {
  double energy = 0;
  double base = 0;                  // f(j) ~ base^|j|
  std::vector<double> amplitudes;   // normalized like LatticeBoundState::amplitudes
  bool regime_mismatch = false;     // |u| / |J_0| inside (0.5, 2)
};

/// Strong: base J_0 / (4u), E = 2 omega_c + 2u + J_0^2 / (4u).
/// Weak: base sgn(u J_0) (1 - |2u/J_0| + 2u^2/J_0^2), E = 2 omega_c + sgn(u) (|J_0| + 2u^2/|J_0|).
AsymptoticBoundState asymptotic_bound_state(const LatticeParams& p, CouplingRegime regime);

struct JointProbability {
  std::vector<int> j;      // -j_max..j_max
  std::vector<double> p;   // P(j) = P(-j), sums to 1
};

/// Relative-distance distribution for amplitudes in the f(j) convention.
JointProbability joint_probability(std::span<const double> amplitudes);

/// Effective continuum constants at the band edge nearest the bound level:
/// kappa = u b, beta = -sgn(u) |J_0| b^2 / 2, so kappa^2 / |beta| = 2 u^2 / |J_0|.
struct ContinuumMapping {
  double kappa = 0;
  double beta = 0;
};
ContinuumMapping continuum_mapping(const LatticeParams& p);

}  // namespace kerrpair::lattice
