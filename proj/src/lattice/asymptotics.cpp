#include <cmath>

#include "kerrpair/error.hpp"
#include "kerrpair/lattice.hpp"

namespace kerrpair::lattice {
namespace {

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

AsymptoticBoundState asymptotic_bound_state(const LatticeParams& p, CouplingRegime regime) {
  p.validate();
  if (p.u == 0.0) throw Error(ErrorKind::ZeroInteraction, "asymptotic bound state needs u != 0");
  const double j0 = p.pair_hopping();

  AsymptoticBoundState s;
  if (regime == CouplingRegime::Strong) {
    s.base = j0 / (4.0 * p.u);
    s.energy = 2.0 * p.omega_c + 2.0 * p.u + j0 * j0 / (4.0 * p.u);
  } else {
    if (j0 == 0.0) throw Error(ErrorKind::Validation, "weak-coupling expansion needs J_0 != 0");
    const double ratio = std::abs(p.u / j0);
    s.base = sign(p.u * j0) * (1.0 - 2.0 * ratio + 2.0 * ratio * ratio);
    s.energy = 2.0 * p.omega_c + sign(p.u) * (std::abs(j0) + 2.0 * p.u * p.u / std::abs(j0));
  }
  const double ratio = j0 == 0.0 ? INFINITY : std::abs(p.u / j0);
  s.regime_mismatch = ratio > 0.5 && ratio < 2.0;

  const auto extent = static_cast<std::size_t>(p.N / 2);
  s.amplitudes.resize(extent + 1);
  double power = 1.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j <= extent; ++j) {
    s.amplitudes[j] = power - (j == 0 ? 0.5 : 0.0);
    weighted += (j == 0 ? 2.0 : 1.0) * s.amplitudes[j] * s.amplitudes[j];
    power *= s.base;
  }
  const double scale = 1.0 / std::sqrt(weighted);
  for (double& f : s.amplitudes) f *= scale;
  return s;
}

}  // namespace kerrpair::lattice
