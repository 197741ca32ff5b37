#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "kerrpair/error.hpp"
#include "kerrpair/lattice.hpp"
#include "oracles.hpp"

using namespace kerrpair;
using namespace kerrpair::lattice;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no kerrpair::Error thrown");
  return ErrorKind::Validation;
}

// Eigenvalues of the full two-boson ring in ascending order.
std::vector<double> ring_spectrum(int n, double omega_c, double hop, double u) {
  const auto ring = oracle::two_boson_ring(n, omega_c, hop, u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ring.h);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

double nearest(const std::vector<double>& values, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) best = std::min(best, std::abs(v - x));
  return best;
}

}  // namespace

TEST_SUITE("two-photon block") {
  TEST_CASE("block eigenvalues belong to the full ring spectrum") {
    for (double u : {1.0, -0.4, 2.5}) {
      for (int n : {5, 11}) {
        const auto p = LatticeParams::from_pair_hopping(1.2, u, 0.3, n);
        const auto full = ring_spectrum(n, 0.3, p.J, u);
        const auto spec = exact_diagonalize(p);
        for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
          CHECK(nearest(full, spec.eigenvalues(i)) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("Hermitian with the documented entries") {
    const auto p = LatticeParams::from_pair_hopping(2.0, 0.5, 1.0, 7);
    const auto h = two_photon_block(p);
    REQUIRE(h.rows() == 4);
    CHECK((h - h.adjoint()).norm() == 0.0);
    CHECK(h(0, 0).real() == doctest::Approx(3.0));
    CHECK(h(0, 1).real() == doctest::Approx(std::numbers::sqrt2));
    CHECK(h(1, 2).real() == doctest::Approx(1.0));
    CHECK(h(3, 3).real() == doctest::Approx(3.0));
  }

  TEST_CASE("non-zero pair momentum rescales the hopping") {
    LatticeParams p;
    p.N = 9;
    p.J = 0.5;
    p.k0 = 2.0 * std::numbers::pi / 9.0;
    CHECK(p.pair_hopping() == doctest::Approx(2.0 * std::cos(p.k0)));
    const auto h = two_photon_block(p);
    CHECK(h(1, 2).real() == doctest::Approx(0.5 * p.pair_hopping()));
  }

  TEST_CASE("single split-off level") {
    const auto p = LatticeParams::from_pair_hopping(1.0, 1.0, 0.0, 51);
    const auto spec = exact_diagonalize(p);
    REQUIRE(spec.bound_index.has_value());
    int outside = 0;
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
      if (std::abs(spec.eigenvalues(i)) > 1.0 + 1e-9) ++outside;
    }
    CHECK(outside == 1);
  }
}

TEST_SUITE("bound state") {
  TEST_CASE("energy and eigenvector agree with exact diagonalization") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    int tested = 0;
    while (tested < 40) {
      const double u = ud(rng), j0 = ud(rng);
      const auto p = LatticeParams::from_pair_hopping(j0, u, 0.2, 51);
      const auto bs = bound_state_lattice(p);
      if (std::abs(bs.eta) > 0.7) continue;
      ++tested;
      const auto spec = exact_diagonalize(p);
      REQUIRE(spec.bound_index.has_value());
      const auto idx = static_cast<Eigen::Index>(*spec.bound_index);
      CHECK(std::abs(spec.eigenvalues(idx) - bs.energy) <= 1e-8 * std::abs(bs.energy));
      const numerics::RealVector v = spec.eigenvectors.col(idx).real();
      CHECK(overlap(v, bs.relative_basis_vector()) >= 1.0 - 1e-8);
    }
  }

  TEST_CASE("eta is finite and zero at J_0 = 0") {
    const auto p = LatticeParams::from_pair_hopping(0.0, -1.0);
    const auto bs = bound_state_lattice(p);
    CHECK(bs.eta == 0.0);
    CHECK(bs.energy == doctest::Approx(-2.0));
    // Only the doubly occupied site survives.
    CHECK(bs.relative_basis_vector()(0) == doctest::Approx(1.0));
    CHECK(bs.relative_basis_vector().tail(static_cast<Eigen::Index>(bs.amplitudes.size()) - 1).norm() < 1e-15);
  }

  TEST_CASE("eta matches the unrationalized expression") {
    for (double j0 : {-2.0, 0.3, 5.0}) {
      for (double u : {-1.0, 0.7}) {
        const auto bs = bound_state_lattice(LatticeParams::from_pair_hopping(j0, u));
        const double sgn = u > 0 ? 1.0 : -1.0;
        CHECK(bs.eta == doctest::Approx((-2.0 * u + sgn * std::sqrt(j0 * j0 + 4.0 * u * u)) / j0));
      }
    }
  }

  TEST_CASE("normalization and printed prefactor") {
    const auto bs = bound_state_lattice(LatticeParams::from_pair_hopping(1.0, 1.0));
    CHECK(bs.relative_basis_vector().norm() == doctest::Approx(1.0).epsilon(1e-14));
    const double eta2 = bs.eta * bs.eta;
    CHECK(bs.printed_prefactor == doctest::Approx(2.0 * std::sqrt((1.0 - eta2) / (51.0 * (1.0 + 3.0 * eta2)))));
    CHECK(bs.renormalized_prefactor > 0.0);
    CHECK(bs.amplitudes[2] / bs.amplitudes[1] == doctest::Approx(bs.eta));
  }
}

TEST_SUITE("recursion") {
  TEST_CASE("analytic states satisfy the pair recursion") {
    for (double u : {-2.0, 0.1, 1.0}) {
      for (double j0 : {-1.5, 0.4, 3.0}) {
        const auto p = LatticeParams::from_pair_hopping(j0, u, 0.5);
        const auto bs = bound_state_lattice(p);
        CHECK(recursion_residual(bs.energy, bs.amplitudes, p) <= 1e-10);
        for (double dk : {0.2, 1.0, 2.9}) {
          const auto sc = scattering_state(p, dk, 40);
          CHECK(recursion_residual(sc.energy, sc.amplitudes, p) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("a perturbed amplitude or energy is detected") {
    const auto p = LatticeParams::from_pair_hopping(1.0, 1.0);
    auto bs = bound_state_lattice(p);
    CHECK(recursion_residual(bs.energy + 1e-6, bs.amplitudes, p) > 1e-8);
    bs.amplitudes[3] *= 1.0 + 1e-6;
    CHECK(recursion_residual(bs.energy, bs.amplitudes, p) > 1e-9);
  }

  TEST_CASE("scattering energy") {
    const auto p = LatticeParams::from_pair_hopping(2.0, 1.0, 0.25);
    CHECK(scattering_state(p, 0.5, 3).energy == doctest::Approx(0.5 + 2.0 * std::cos(0.5)));
  }
}

TEST_SUITE("asymptotics") {
  TEST_CASE("strong coupling approaches the exact energy") {
    for (double u : {1.0, -2.0}) {
      const auto p = LatticeParams::from_pair_hopping(0.1 * std::abs(u), u);
      const auto exact = bound_state_lattice(p);
      const auto a = asymptotic_bound_state(p, CouplingRegime::Strong);
      CHECK(std::abs(a.energy - exact.energy) <= 2e-6 * std::abs(u));
      CHECK(a.base == doctest::Approx(exact.eta).epsilon(1e-4));
      CHECK_FALSE(a.regime_mismatch);
    }
  }

  TEST_CASE("weak coupling approaches the exact energy") {
    const auto p = LatticeParams::from_pair_hopping(50.0, 1.0);
    const auto exact = bound_state_lattice(p);
    const auto a = asymptotic_bound_state(p, CouplingRegime::Weak);
    CHECK(std::abs(a.energy - exact.energy) < 1e-4);
    CHECK(a.base == doctest::Approx(exact.eta).epsilon(1e-5));
  }

  TEST_CASE("mismatch flag in the crossover") {
    const auto p = LatticeParams::from_pair_hopping(1.0, 1.0);
    CHECK(asymptotic_bound_state(p, CouplingRegime::Strong).regime_mismatch);
    CHECK(asymptotic_bound_state(p, CouplingRegime::Weak).regime_mismatch);
    CHECK(kind_of([] { asymptotic_bound_state(LatticeParams::from_pair_hopping(0.0, 1.0), CouplingRegime::Weak); }) ==
          ErrorKind::Validation);
  }
}

TEST_SUITE("binding gap") {
  TEST_CASE("2|u| at J_0 = 0 and monotone in |J_0|") {
    CHECK(binding_gap(LatticeParams::from_pair_hopping(0.0, -1.5)) == 3.0);
    std::vector<double> j0;
    for (int i = 0; i <= 200; ++i) j0.push_back(0.1 * i);
    const auto curve = binding_gap_curve(1.0, j0);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second < curve[i - 1].second);
  }

  TEST_CASE("large J_0 tail") {
    const double gap = binding_gap(LatticeParams::from_pair_hopping(20.0, 1.0));
    CHECK(gap == doctest::Approx(2.0 / 20.0).epsilon(0.01));
    // stable far into the tail
    const double far = binding_gap(LatticeParams::from_pair_hopping(1e9, 1.0));
    CHECK(far == doctest::Approx(2e-9).epsilon(1e-6));
  }

  TEST_CASE("even in J_0 and in u") {
    CHECK(binding_gap(LatticeParams::from_pair_hopping(-3.0, 1.0)) ==
          doctest::Approx(binding_gap(LatticeParams::from_pair_hopping(3.0, -1.0))));
  }
}

TEST_SUITE("joint probability") {
  TEST_CASE("symmetric and normalized") {
    const auto bs = bound_state_lattice(LatticeParams::from_pair_hopping(2.0, 1.0));
    const auto jp = joint_probability(bs.amplitudes);
    double total = 0;
    for (std::size_t i = 0; i < jp.p.size(); ++i) {
      total += jp.p[i];
      CHECK(jp.p[i] == jp.p[jp.p.size() - 1 - i]);
      CHECK(jp.j[i] == -jp.j[jp.p.size() - 1 - i]);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("P(0) decreases as J_0 / u grows") {
    double previous = 2.0;
    for (double ratio : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto bs = bound_state_lattice(LatticeParams::from_pair_hopping(ratio, 1.0));
      const auto jp = joint_probability(bs.amplitudes);
      const double p0 = jp.p[jp.p.size() / 2];
      CHECK(p0 < previous);
      previous = p0;
    }
  }
}

TEST_SUITE("validation") {
  TEST_CASE("errors") {
    LatticeParams p;
    p.k0 = 0.1;
    CHECK(kind_of([&] { p.validate(); }) == ErrorKind::OffGridMomentum);
    CHECK(kind_of([&] { single_photon_dispersion(LatticeParams{}, 0.1); }) == ErrorKind::OffGridMomentum);
    CHECK(kind_of([] { bound_state_lattice(LatticeParams::from_pair_hopping(1.0, 0.0)); }) ==
          ErrorKind::ZeroInteraction);
    CHECK(kind_of([] { binding_gap(LatticeParams::from_pair_hopping(1.0, 0.0)); }) == ErrorKind::ZeroInteraction);
    CHECK(kind_of([] { scattering_state(LatticeParams::from_pair_hopping(1.0, 1.0), 0.0, 5); }) ==
          ErrorKind::ResonantDenominator);
    CHECK(kind_of([] { scattering_state(LatticeParams::from_pair_hopping(0.0, 1.0), 0.5, 5); }) ==
          ErrorKind::Validation);
    CHECK(kind_of([] { two_photon_block(LatticeParams::from_pair_hopping(1.0, 1.0, 0.0, 10)); }) ==
          ErrorKind::Validation);
    CHECK(kind_of([] { LatticeParams::from_pair_hopping(1.0, 1.0, 0.0, 2).validate(); }) == ErrorKind::Validation);
  }

  TEST_CASE("single-photon dispersion") {
    LatticeParams p;
    p.N = 8;
    p.J = 0.5;
    p.omega_c = 1.0;
    CHECK(single_photon_dispersion(p, std::numbers::pi / 4.0) == doctest::Approx(1.0 + std::cos(std::numbers::pi / 4)));
  }
}

TEST_CASE("continuum mapping reproduces the weak-coupling binding energy") {
  for (double u : {0.01, -0.02}) {
    const auto p = LatticeParams::from_pair_hopping(4.0, u);
    const auto m = continuum_mapping(p);
    CHECK(m.kappa * m.beta < 0);
    CHECK(m.kappa * m.kappa / std::abs(m.beta) ==
          doctest::Approx(binding_gap(p)).epsilon(1e-3));
  }
}
