#include <cmath>
#include <numbers>

#include "kerrpair/continuum.hpp"
#include "kerrpair/error.hpp"

namespace kerrpair::continuum {

LinearDispersionResult epr_linear_dispersion(std::size_t m, double kappa, double length, double omega_k0) {
  if (m < 2) throw Error(ErrorKind::Validation, "linear-dispersion basis needs M >= 2");
  if (!(length > 0)) throw Error(ErrorKind::Validation, "quantization length L must be positive");
  if (!std::isfinite(kappa) || !std::isfinite(omega_k0)) {
    throw Error(ErrorKind::Validation, "kappa and omega_k0 must be finite");
  }
  const auto n = static_cast<Eigen::Index>(m);
  const double coupling = 2.0 * kappa / length;

  // The doubly occupied |2_{k0}> state enters with weight 1, every
  // |1_{k0+q} 1_{k0-q}> pair with sqrt(2).
  numerics::RealVector w = numerics::RealVector::Constant(n, std::numbers::sqrt2);
  w(0) = 1.0;
  const Eigen::MatrixXd interaction = coupling * w * w.transpose();

  LinearDispersionResult r;
  r.hamiltonian = (interaction + 2.0 * omega_k0 * Eigen::MatrixXd::Identity(n, n)).cast<numerics::Complex>();
  const numerics::HermitianEigen eig = numerics::eig_hermitian(r.hamiltonian);
  r.eigenvalues = eig.values;

  if (kappa == 0.0) {
    r.degenerate_free_spectrum = true;
    r.bound_energy = 2.0 * omega_k0;
    return r;
  }

  // Rank one: the split level is the one farthest from 2 omega_k0.
  Eigen::Index idx = 0;
  (eig.values.array() - 2.0 * omega_k0).abs().maxCoeff(&idx);
  r.bound_energy = eig.values(idx);
  numerics::ComplexVector v = eig.vectors.col(idx);
  // Remove the arbitrary global phase so the vector is real with v(0) >= 0.
  const numerics::Complex phase = std::abs(v(0)) > 0 ? v(0) / std::abs(v(0)) : numerics::Complex(1.0);
  v /= phase;
  r.bound_vector = v.real();

  const Eigen::MatrixXd rank_one =
      (r.bound_energy - 2.0 * omega_k0) * r.bound_vector * r.bound_vector.transpose();
  r.rank_one_residual = (interaction - rank_one).norm() / interaction.norm();
  return r;
}

}  // namespace kerrpair::continuum
