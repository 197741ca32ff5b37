#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrpair/continuum.hpp"
#include "kerrpair/error.hpp"

namespace kerrpair::continuum {
namespace {

struct Moments {
  double mean = 0;
  double variance = 0;
};

template <typename Weights, typename Coord>
Moments moments(const Weights& w, Coord coord, Eigen::Index n) {
  double total = 0, first = 0, second = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = coord(i);
    total += w(i);
    first += w(i) * x;
    second += w(i) * x * x;
  }
  Moments m;
  m.mean = first / total;
  m.variance = second / total - m.mean * m.mean;
  return m;
}

struct Variances {
  double relative_position = 0;
  double total_momentum = 0;
};

Variances estimate_variances(const PumpedPairState& s) {
  const auto n_sum = static_cast<Eigen::Index>(s.grid.n_sum);
  const auto n_diff = static_cast<Eigen::Index>(s.grid.n_diff);
  const numerics::UniformGrid k_axis = s.grid.sum_axis(s.k0);
  const numerics::UniformGrid d_axis = s.grid.diff_axis();

  const Eigen::VectorXd p_sum = s.amplitude.cwiseAbs2().rowwise().sum();
  const Moments k_stats =
      moments(p_sum, [&](Eigen::Index i) { return k_axis[static_cast<std::size_t>(i)]; }, n_sum);

  // Symmetric momentum grids pick up a (-1)^(i+j) checkerboard when mapped
  // onto the FFT index convention; the remaining phases are position-only
  // and drop out of |psi|^2.
  numerics::ComplexMatrix shifted = s.amplitude;
  for (Eigen::Index i = 0; i < n_sum; ++i) {
    for (Eigen::Index j = 0; j < n_diff; ++j) {
      if ((i + j) % 2 != 0) shifted(i, j) = -shifted(i, j);
    }
  }
  const numerics::ComplexMatrix position = numerics::inverse_dft_2d(shifted);
  const Eigen::VectorXd p_rel = position.cwiseAbs2().colwise().sum().transpose();
  // dx is conjugate to D / 2.
  const double dy = 4.0 * std::numbers::pi / (static_cast<double>(n_diff) * d_axis.step);
  const Moments x_stats = moments(
      p_rel, [&](Eigen::Index l) { return (static_cast<double>(l) - 0.5 * static_cast<double>(n_diff)) * dy; },
      n_diff);

  return {x_stats.variance, k_stats.variance};
}

}  // namespace

numerics::UniformGrid PairGrid::sum_axis(double k0) const {
  return numerics::UniformGrid::centered(n_sum, sum_halfwidth, 2.0 * k0);
}

numerics::UniformGrid PairGrid::diff_axis() const { return numerics::UniformGrid::centered(n_diff, diff_halfwidth); }

PairGrid PairGrid::defaults(double xi, double w_p) {
  PairGrid g;
  g.sum_halfwidth = 6.0 * w_p;
  g.diff_halfwidth = 80.0 * xi;
  return g;
}

double PumpedPairState::k1(std::size_t i, std::size_t j) const {
  return 0.5 * (grid.sum_axis(k0)[i] + grid.diff_axis()[j]);
}

double PumpedPairState::k2(std::size_t i, std::size_t j) const {
  return 0.5 * (grid.sum_axis(k0)[i] - grid.diff_axis()[j]);
}

PumpedPairState gaussian_pump_state(double xi, double w_p, double k0, const PairGrid& grid) {
  if (!(xi > 0) || !(w_p > 0)) throw Error(ErrorKind::Validation, "gaussian_pump_state needs xi > 0 and W_p > 0");
  if (grid.n_sum < 2 || grid.n_diff < 2) throw Error(ErrorKind::Validation, "pair grid needs at least 2x2 points");
  // Standard deviations: K - 2k0 has W_p / 2, D has 2 xi.
  if (2.0 * grid.sum_halfwidth < 8.0 * 0.5 * w_p || 2.0 * grid.diff_halfwidth < 8.0 * 2.0 * xi) {
    std::ostringstream msg;
    msg << "grid spans must cover 8 standard deviations: need sum halfwidth >= " << 2.0 * w_p
        << " and difference halfwidth >= " << 8.0 * xi;
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }

  PumpedPairState s;
  s.k0 = k0;
  s.w_p = w_p;
  s.xi = xi;
  s.grid = grid;

  const numerics::UniformGrid k_axis = grid.sum_axis(k0);
  const numerics::UniformGrid d_axis = grid.diff_axis();
  const ContinuumBoundState bs{xi, 0.0, 0.0};
  const double gauss_norm = std::pow(2.0 / std::numbers::pi, 0.25) / std::sqrt(w_p);

  Eigen::VectorXd gauss(static_cast<Eigen::Index>(grid.n_sum));
  for (std::size_t i = 0; i < grid.n_sum; ++i) {
    const double dk = k_axis[i] - 2.0 * k0;
    gauss(static_cast<Eigen::Index>(i)) = gauss_norm * std::exp(-dk * dk / (w_p * w_p));
  }
  Eigen::VectorXd rel(static_cast<Eigen::Index>(grid.n_diff));
  for (std::size_t j = 0; j < grid.n_diff; ++j) {
    rel(static_cast<Eigen::Index>(j)) = bs.amp_momentum_difference(d_axis[j]);
  }
  s.amplitude = (gauss * rel.transpose()).cast<numerics::Complex>();

  const double cell = k_axis.step * d_axis.step;
  const double norm = s.amplitude.squaredNorm() * cell;
  s.norm_shift = std::abs(norm - 1.0);
  if (s.norm_shift > 1e-3) {
    std::ostringstream msg;
    msg << "renormalization shifts the norm by " << s.norm_shift << " (> 1e-3)";
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }
  s.amplitude /= std::sqrt(norm);
  return s;
}

EprResult epr_uncertainty_product(const PumpedPairState& s) {
  if (s.amplitude.rows() != static_cast<Eigen::Index>(s.grid.n_sum) ||
      s.amplitude.cols() != static_cast<Eigen::Index>(s.grid.n_diff)) {
    throw Error(ErrorKind::DimensionMismatch, "pumped state amplitude does not match its grid");
  }
  const double cell = s.grid.sum_axis(s.k0).step * s.grid.diff_axis().step;
  if (std::abs(s.amplitude.squaredNorm() * cell - 1.0) > 1e-6) {
    throw Error(ErrorKind::Validation, "pumped state is not normalized");
  }

  const Variances base = estimate_variances(s);

  PairGrid finer = s.grid;
  finer.n_sum *= 2;
  finer.n_diff *= 2;
  finer.sum_halfwidth *= std::numbers::sqrt2;
  finer.diff_halfwidth *= std::numbers::sqrt2;
  const Variances refined = estimate_variances(gaussian_pump_state(s.xi, s.w_p, s.k0, finer));

  const double dx_change = std::abs(refined.relative_position / base.relative_position - 1.0);
  const double dk_change = std::abs(refined.total_momentum / base.total_momentum - 1.0);
  if (dx_change > 0.01 || dk_change > 0.01) {
    std::ostringstream msg;
    msg << "variances moved by " << dx_change << " (position) and " << dk_change
        << " (momentum) under grid refinement";
    throw Error(ErrorKind::GridTooCoarse, msg.str());
  }

  EprResult r;
  r.var_relative_position = base.relative_position;
  r.var_total_momentum = base.total_momentum;
  r.product = base.relative_position * base.total_momentum;
  r.refined_product = refined.relative_position * refined.total_momentum;
  r.violates_separability = r.product < 1.0;
  r.violates_epr = r.product < 0.25;
  return r;
}

}  // namespace kerrpair::continuum
