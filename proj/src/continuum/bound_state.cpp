#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrpair/continuum.hpp"
#include "kerrpair/error.hpp"

namespace kerrpair::continuum {

void WaveguideParams::validate() const {
  if (!(length > 0) || !std::isfinite(length)) {
    throw Error(ErrorKind::Validation, "wave-guide length L must be positive and finite");
  }
  if (!std::isfinite(beta) || !std::isfinite(kappa) || !std::isfinite(omega_k0) || !std::isfinite(v)) {
    throw Error(ErrorKind::Validation, "wave-guide parameters must be finite");
  }
}

double kappa_from_material(const MaterialParams& m) {
  if (!(m.omega > 0 && m.chi3 > 0 && m.n_r > 0 && m.area > 0 && m.eps0 > 0)) {
    throw Error(ErrorKind::Validation, "material parameters (omega, chi3, n_r, A, eps0) must all be positive");
  }
  const double n2 = m.n_r * m.n_r;
  return std::numbers::pi * m.omega * m.omega * m.chi3 / (2.0 * n2 * n2 * m.area * m.eps0);
}

double pair_energy_detuning(double beta, double delta_k) { return beta * delta_k * delta_k; }

double ContinuumBoundState::amp_position(double delta_x) const {
  return std::sqrt(xi) * std::exp(-xi * std::abs(delta_x));
}

double ContinuumBoundState::amp_momentum(double delta_k) const {
  return std::sqrt(2.0 / std::numbers::pi) * std::pow(xi, 1.5) / (delta_k * delta_k + xi * xi);
}

double ContinuumBoundState::amp_momentum_difference(double k_difference) const {
  // dD = 2 d(dk), so the density picks up 1/sqrt(2).
  return amp_momentum(0.5 * k_difference) / std::numbers::sqrt2;
}

double ContinuumBoundState::printed_position_prefactor(double length) const { return std::sqrt(xi / (2.0 * length)); }

double ContinuumBoundState::printed_momentum_prefactor(double length) const {
  return 8.0 * std::pow(xi, 1.5) / std::sqrt(2.0 * length);
}

double ContinuumBoundState::dimensionless_energy(double beta, double kappa) const {
  return (energy - 2.0 * omega_k0) * std::abs(beta) / (kappa * kappa);
}

BoundStateOutcome bound_state_continuum(const WaveguideParams& p) {
  p.validate();
  if (p.beta == 0.0) {
    throw Error(ErrorKind::Validation, "beta must be nonzero for the quadratic-dispersion bound state");
  }
  const double kb = p.kappa * p.beta;
  if (!(kb < 0.0)) {
    std::ostringstream msg;
    msg << "a bound pair needs kappa * beta < 0, got " << kb;
    return NoBoundState{kb, msg.str()};
  }
  ContinuumBoundState bs;
  bs.xi = std::abs(p.kappa / p.beta);
  bs.energy = 2.0 * p.omega_k0 - p.kappa * p.kappa / p.beta;
  bs.omega_k0 = p.omega_k0;
  return bs;
}

}  // namespace kerrpair::continuum
