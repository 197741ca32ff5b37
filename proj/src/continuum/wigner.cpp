#include <cmath>
#include <limits>
#include <numbers>

#include "kerrpair/continuum.hpp"
#include "kerrpair/error.hpp"

namespace kerrpair::continuum {

double wigner_closed_form(double xi, double delta_x, double delta_k) {
  if (!(xi > 0)) throw Error(ErrorKind::Validation, "wigner_closed_form needs xi > 0");
  const double pi = std::numbers::pi;
  const double adx = std::abs(delta_x);
  const double prefactor = xi * xi * std::exp(-2.0 * xi * adx) / (2.0 * pi * pi * (delta_k * delta_k + xi * xi));
  double bracket;
  if (std::abs(delta_k) < 1e-8 * xi) {
    bracket = 1.0 + 2.0 * xi * adx;
  } else {
    const double phase = 2.0 * delta_k * adx;
    bracket = std::cos(phase) + (xi / delta_k) * std::sin(phase);
  }
  return prefactor * bracket;
}

double wigner_numeric_oracle(const ContinuumBoundState& bs, double delta_x, double delta_k,
                             const WignerOracleOptions& options) {
  if (!(bs.xi > 0)) throw Error(ErrorKind::Validation, "wigner_numeric_oracle needs a bound state with xi > 0");
  const double pi = std::numbers::pi;
  // g is real and even, so g(dk + z) g(dk - z) is even in z and only the
  // cosine part of e^{-2i dx z} survives.
  const auto integrand = [&](double z) {
    return bs.amp_momentum(delta_k + z) * bs.amp_momentum(delta_k - z) * std::cos(2.0 * delta_x * z);
  };
  numerics::QuadratureSpec spec;
  spec.lower = 0.0;
  spec.upper = std::numeric_limits<double>::infinity();
  spec.decay = numerics::TailDecay::AlgebraicSquared;
  spec.scale = bs.xi + std::abs(delta_k);
  spec.abs_tol = options.abs_tol;
  spec.rel_tol = options.rel_tol;
  spec.max_subdivisions = options.max_subdivisions;
  const double half_line = numerics::integrate(integrand, spec).value;
  return 2.0 * half_line / (2.0 * pi * pi);
}

}  // namespace kerrpair::continuum
