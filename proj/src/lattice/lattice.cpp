#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrpair/error.hpp"
#include "kerrpair/lattice.hpp"

namespace kerrpair::lattice {
namespace {

constexpr double kGridTolerance = 1e-9;

double sign(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

bool on_grid(double k, const LatticeParams& p) {
  const double n = k * p.N * p.b / (2.0 * std::numbers::pi);
  return std::abs(n - std::round(n)) < kGridTolerance * std::max(1.0, std::abs(n));
}

std::size_t relative_extent(const LatticeParams& p) { return static_cast<std::size_t>(p.N / 2); }

}  // namespace

double LatticeParams::pair_hopping() const { return 4.0 * J * std::cos(k0 * b); }

void LatticeParams::validate() const {
  if (N < 3) throw Error(ErrorKind::Validation, "a ring needs N >= 3 sites");
  if (!(b > 0) || !std::isfinite(b)) throw Error(ErrorKind::Validation, "lattice period b must be positive");
  if (!std::isfinite(omega_c) || !std::isfinite(J) || !std::isfinite(u) || !std::isfinite(k0)) {
    throw Error(ErrorKind::Validation, "lattice parameters must be finite");
  }
  if (!on_grid(k0, *this)) {
    std::ostringstream msg;
    msg << "k0 = " << k0 << " is not a multiple of 2 pi / (N b)";
    throw Error(ErrorKind::OffGridMomentum, msg.str());
  }
}

LatticeParams LatticeParams::from_pair_hopping(double j0, double u, double omega_c, int n) {
  LatticeParams p;
  p.omega_c = omega_c;
  p.J = 0.25 * j0;
  p.u = u;
  p.N = n;
  p.k0 = 0.0;
  return p;
}

double single_photon_dispersion(const LatticeParams& p, double k) {
  if (!on_grid(k, p)) {
    std::ostringstream msg;
    msg << "k = " << k << " is not on the ring momentum grid";
    throw Error(ErrorKind::OffGridMomentum, msg.str());
  }
  return p.omega_c + 2.0 * p.J * std::cos(k * p.b);
}

numerics::RealVector LatticeBoundState::relative_basis_vector() const {
  numerics::RealVector c(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t j = 0; j < amplitudes.size(); ++j) c(static_cast<Eigen::Index>(j)) = amplitudes[j];
  if (c.size() > 0) c(0) *= std::numbers::sqrt2;
  return c;
}

LatticeBoundState bound_state_lattice(const LatticeParams& p) {
  p.validate();
  if (p.u == 0.0) {
    throw Error(ErrorKind::ZeroInteraction, "u = 0: the bound level merges with the band edge");
  }
  const double j0 = p.pair_hopping();
  const double root = std::sqrt(j0 * j0 + 4.0 * p.u * p.u);

  LatticeBoundState s;
  // Rationalized form of (-2u + sgn(u) root) / J_0; finite and exact at J_0 = 0.
  s.eta = j0 / (2.0 * p.u + sign(p.u) * root);
  s.energy = 2.0 * p.omega_c + sign(p.u) * root;

  const double eta2 = s.eta * s.eta;
  s.printed_prefactor = 2.0 * std::sqrt((1.0 - eta2) / (p.N * (1.0 + 3.0 * eta2)));

  const std::size_t extent = relative_extent(p);
  s.amplitudes.resize(extent + 1);
  double power = 1.0;
  for (std::size_t j = 0; j <= extent; ++j) {
    s.amplitudes[j] = s.printed_prefactor * (power - (j == 0 ? 0.5 : 0.0));
    power *= s.eta;
  }
  double weighted = 2.0 * s.amplitudes[0] * s.amplitudes[0];
  for (std::size_t j = 1; j <= extent; ++j) weighted += s.amplitudes[j] * s.amplitudes[j];
  const double scale = 1.0 / std::sqrt(weighted);
  for (double& f : s.amplitudes) f *= scale;
  s.renormalized_prefactor = s.printed_prefactor * scale;
  return s;
}

ScatteringState scattering_state(const LatticeParams& p, double delta_k, std::size_t j_max) {
  p.validate();
  const double j0 = p.pair_hopping();
  if (j0 == 0.0) throw Error(ErrorKind::Validation, "scattering states need J_0 != 0");
  const double s1 = std::sin(delta_k * p.b);
  if (std::abs(s1) < 1e-12) {
    throw Error(ErrorKind::ResonantDenominator, "sin(dk b) = 0 in the scattering amplitude");
  }
  ScatteringState s;
  s.energy = 2.0 * p.omega_c + j0 * std::cos(delta_k * p.b);
  s.amplitudes.resize(j_max + 1);
  s.amplitudes[0] = 1.0;
  for (std::size_t j = 1; j <= j_max; ++j) {
    const double phase = delta_k * static_cast<double>(j) * p.b;
    s.amplitudes[j] = 2.0 * (std::cos(phase) - 2.0 * p.u * std::sin(phase) / (j0 * s1));
  }
  return s;
}

double recursion_residual(double energy, std::span<const double> f, const LatticeParams& p) {
  if (f.size() < 2) throw Error(ErrorKind::Validation, "recursion residual needs f(0) and f(1)");
  const double j0 = p.pair_hopping();
  const double shifted = energy - 2.0 * p.omega_c;
  double worst = std::abs(j0 * f[1] - 2.0 * (shifted - 2.0 * p.u) * f[0]);
  for (std::size_t j = 1; j + 1 < f.size(); ++j) {
    const double factor = j == 1 ? 2.0 : 1.0;
    worst = std::max(worst, std::abs(j0 * f[j + 1] - 2.0 * shifted * f[j] + factor * j0 * f[j - 1]));
  }
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  return scale > 0 ? worst / scale : worst;
}

numerics::ComplexMatrix two_photon_block(const LatticeParams& p) {
  p.validate();
  if (p.N % 2 == 0) {
    throw Error(ErrorKind::Validation, "the relative-coordinate block is built for odd N only");
  }
  const double j0 = p.pair_hopping();
  const auto dim = static_cast<Eigen::Index>(relative_extent(p) + 1);
  numerics::ComplexMatrix h = numerics::ComplexMatrix::Zero(dim, dim);
  h(0, 0) = 2.0 * p.omega_c + 2.0 * p.u;
  for (Eigen::Index r = 1; r < dim; ++r) h(r, r) = 2.0 * p.omega_c;
  h(0, 1) = h(1, 0) = j0 / std::numbers::sqrt2;
  for (Eigen::Index r = 1; r + 1 < dim; ++r) h(r, r + 1) = h(r + 1, r) = 0.5 * j0;
  // Distance (N-1)/2 hops onto its own mirror image around the ring.
  h(dim - 1, dim - 1) += 0.5 * j0;
  return h;
}

LatticeSpectrum exact_diagonalize(const LatticeParams& p) {
  const numerics::ComplexMatrix h = two_photon_block(p);
  const numerics::HermitianEigen eig = numerics::eig_hermitian(h, 1e-14);
  LatticeSpectrum s;
  s.eigenvalues = eig.values;
  s.eigenvectors = eig.vectors;

  const double edge = std::abs(p.pair_hopping()) * (1.0 + 1.0 / p.N);
  double farthest = -1.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double distance = std::abs(s.eigenvalues(i) - 2.0 * p.omega_c);
    if (distance > edge && distance > farthest) {
      farthest = distance;
      s.bound_index = static_cast<std::size_t>(i);
    }
  }
  return s;
}

double overlap(const numerics::RealVector& a, const numerics::RealVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "overlap of vectors with different sizes");
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

double binding_gap(const LatticeParams& p) {
  if (p.u == 0.0) throw Error(ErrorKind::ZeroInteraction, "no binding gap without interaction");
  const double j0 = p.pair_hopping();
  // sqrt(J_0^2 + 4u^2) - |J_0| without cancellation.
  return 4.0 * p.u * p.u / (std::sqrt(j0 * j0 + 4.0 * p.u * p.u) + std::abs(j0));
}

std::vector<std::pair<double, double>> binding_gap_curve(double u, std::span<const double> j0_values) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(j0_values.size());
  for (double j0 : j0_values) {
    curve.emplace_back(j0, binding_gap(LatticeParams::from_pair_hopping(j0, u)));
  }
  return curve;
}

JointProbability joint_probability(std::span<const double> amplitudes) {
  if (amplitudes.empty()) throw Error(ErrorKind::Validation, "joint probability of an empty amplitude set");
  const auto extent = static_cast<int>(amplitudes.size()) - 1;
  double total = 2.0 * amplitudes[0] * amplitudes[0];
  for (std::size_t r = 1; r < amplitudes.size(); ++r) total += amplitudes[r] * amplitudes[r];
  if (!(total > 0)) throw Error(ErrorKind::Validation, "joint probability of a zero state");

  JointProbability out;
  for (int j = -extent; j <= extent; ++j) {
    const auto r = static_cast<std::size_t>(std::abs(j));
    out.j.push_back(j);
    const double w = r == 0 ? 2.0 * amplitudes[0] * amplitudes[0] : 0.5 * amplitudes[r] * amplitudes[r];
    out.p.push_back(w / total);
  }
  return out;
}

ContinuumMapping continuum_mapping(const LatticeParams& p) {
  const double j0 = p.pair_hopping();
  return {p.u * p.b, -sign(p.u) * std::abs(j0) * p.b * p.b / 2.0};
}

}  // namespace kerrpair::lattice
