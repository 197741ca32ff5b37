#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "kerrpair/error.hpp"
#include "kerrpair/lindblad.hpp"
#include "oracles.hpp"

using namespace kerrpair;
using namespace kerrpair::lindblad;

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

DriveParams drive(double f, double omega_p, double gamma = 0.1) {
  DriveParams d;
  d.F = f;
  d.omega_p = omega_p;
  d.gamma = gamma;
  return d;
}

Liouvillian make(const CavityChain& c, const DriveParams& d, const FockBasis& b) {
  return Liouvillian(build_hamiltonian(c, d, b), d.gamma, b);
}

// Lindblad generator written out term by term with explicit Kronecker products.
ComplexMatrix oracle_liouvillian(const ComplexMatrix& h, double gamma, const FockBasis& b) {
  const auto d = static_cast<Eigen::Index>(b.dimension());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const Complex i(0, 1);
  ComplexMatrix l = -i * (oracle::kron(id, h) - oracle::kron(h.transpose(), id));
  for (std::size_t j = 0; j < b.sites(); ++j) {
    const ComplexMatrix a = ComplexMatrix(b.annihilation(j));
    const ComplexMatrix n = a.adjoint() * a;
    l += gamma * (2.0 * oracle::kron(a.conjugate(), a) - oracle::kron(id, n) - oracle::kron(n.transpose(), id));
  }
  return l;
}

ComplexVector vec(const ComplexMatrix& m) { return Eigen::Map<const ComplexVector>(m.data(), m.size()); }

double expect_number(const ComplexMatrix& rho, const FockBasis& b, std::size_t site) {
  return (ComplexMatrix(b.number(site)) * rho).trace().real();
}

}  // namespace

TEST_SUITE("fock basis") {
  TEST_CASE("lexicographic order, first site most significant") {
    const FockBasis b(2, 2);
    CHECK(b.dimension() == 9);
    CHECK(b.occupations(0) == std::vector<std::size_t>{0, 0});
    CHECK(b.occupations(1) == std::vector<std::size_t>{0, 1});
    CHECK(b.occupations(3) == std::vector<std::size_t>{1, 0});
    CHECK(b.occupations(8) == std::vector<std::size_t>{2, 2});
    for (std::size_t i = 0; i < b.dimension(); ++i) {
      const auto occ = b.occupations(i);
      CHECK(b.index(occ) == i);
      CHECK(b.occupation(i, 1) == occ[1]);
    }
  }

  TEST_CASE("ladder operators") {
    const FockBasis b(2, 3);
    const ComplexMatrix a = ComplexMatrix(b.annihilation(0));
    const std::vector<std::size_t> from{2, 1}, to{1, 1};
    CHECK(std::abs(a(static_cast<Eigen::Index>(b.index(to)), static_cast<Eigen::Index>(b.index(from))) -
                   std::sqrt(2.0)) < 1e-15);
    const ComplexMatrix n = ComplexMatrix(b.number(1));
    CHECK((n - a.adjoint() * a).norm() > 0.0);  // different sites
    const ComplexMatrix a1 = ComplexMatrix(b.annihilation(1));
    CHECK((n - a1.adjoint() * a1).norm() < 1e-14);
    CHECK((a * a1 - a1 * a).norm() < 1e-14);
  }

  TEST_CASE("rejects empty or huge bases") {
    CHECK(kind_of([] { FockBasis(0, 3); }) == ErrorKind::Validation);
    CHECK(kind_of([] { FockBasis(3, 0); }) == ErrorKind::Validation);
    CHECK(kind_of([] { FockBasis(12, 9); }) == ErrorKind::Validation);
  }
}

TEST_SUITE("hamiltonian") {
  TEST_CASE("Kerr ladder of an undriven site") {
    const FockBasis b(1, 5);
    const CavityChain c{0.7, 0.0, 0.3};
    const ComplexMatrix h = ComplexMatrix(build_hamiltonian(c, drive(0.0, 0.2), b));
    for (Eigen::Index n = 0; n <= 5; ++n) {
      CHECK(h(n, n).real() == doctest::Approx(0.5 * n + 0.3 * n * (n - 1)));
    }
    CHECK((h - ComplexMatrix(h.diagonal().asDiagonal())).norm() == 0.0);
  }

  TEST_CASE("Hermitian with hopping, pump and phases") {
    const FockBasis b(3, 3);
    DriveParams d = drive(0.02, 0.4);
    d.psi = DriveParams::phases_for_pair_momentum(0.3, 1.0, 3);
    CHECK(d.psi[2] == doctest::Approx(1.2));
    const ComplexMatrix h = ComplexMatrix(build_hamiltonian({0.0, 0.1, -1.0}, d, b));
    CHECK((h - h.adjoint()).norm() < 1e-15);
  }

  TEST_CASE("pump phase enters as e^{i psi} a+") {
    const FockBasis b(1, 2);
    DriveParams d = drive(0.05, 0.0);
    d.psi = {0.4};
    const ComplexMatrix h = ComplexMatrix(build_hamiltonian({0, 0, 1}, d, b));
    CHECK(std::abs(h(1, 0) - 0.05 * std::polar(1.0, 0.4)) < 1e-15);
  }

  TEST_CASE("ring of three couples every pair of sites") {
    const FockBasis b(3, 1);
    const ComplexMatrix h = ComplexMatrix(build_hamiltonian({0, 0.2, 1}, drive(0.0, 0.0), b));
    const auto one = [&](std::size_t s) {
      std::vector<std::size_t> occ(3, 0);
      occ[s] = 1;
      return static_cast<Eigen::Index>(b.index(occ));
    };
    CHECK(h(one(0), one(1)).real() == doctest::Approx(0.2));
    CHECK(h(one(0), one(2)).real() == doctest::Approx(0.2));
    CHECK(h(one(1), one(2)).real() == doctest::Approx(0.2));
  }

  TEST_CASE("truncation guard and validation") {
    const FockBasis b(1, 4);
    CHECK(kind_of([&] { build_hamiltonian({}, drive(1.0, 0.0), b); }) == ErrorKind::TruncationTooSmall);
    CHECK(kind_of([&] { build_hamiltonian({}, drive(0.01, 0.0, 0.0), b); }) == ErrorKind::Validation);
    DriveParams d = drive(0.01, 0.0);
    d.psi = {0.0, 0.0};
    CHECK(kind_of([&] { build_hamiltonian({}, d, b); }) == ErrorKind::DimensionMismatch);
  }
}

TEST_SUITE("liouvillian") {
  TEST_CASE("dense superoperator matches an explicit Kronecker construction") {
    const FockBasis b(2, 2);
    DriveParams d = drive(0.03, 0.25);
    d.psi = {0.0, 0.9};
    const auto l = make({0.1, 0.15, 0.8}, d, b);
    const ComplexMatrix expected = oracle_liouvillian(ComplexMatrix(l.hamiltonian()), 0.1, b);
    CHECK((l.dense() - expected).norm() < 1e-13 * expected.norm());
  }

  TEST_CASE("matrix-free products agree with the dense matrix") {
    std::mt19937_64 rng(2);
    const FockBasis b(2, 2);
    const auto l = make({0.0, 0.1, 1.0}, drive(0.05, 0.5), b);
    const ComplexMatrix dense = l.dense();
    const ComplexMatrix x = oracle::random_hermitian(9, rng) + Complex(0, 1) * oracle::random_hermitian(9, rng);
    CHECK((vec(l.apply(x)) - dense * vec(x)).norm() < 1e-13 * dense.norm() * x.norm());
    CHECK((l.apply_vec(vec(x)) - dense * vec(x)).norm() < 1e-13 * dense.norm() * x.norm());
    CHECK((vec(l.apply_adjoint(x)) - dense.adjoint() * vec(x)).norm() < 1e-13 * dense.norm() * x.norm());
  }

  TEST_CASE("trace preservation: the adjoint annihilates the identity") {
    const FockBasis b(3, 2);
    const auto l = make({0.0, 0.25, 1.0}, drive(0.01, 1.0), b);
    const auto d = static_cast<Eigen::Index>(b.dimension());
    CHECK(l.apply_adjoint(ComplexMatrix::Identity(d, d)).norm() < 1e-13);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) CHECK(std::abs(l.apply(oracle::random_density(d, rng)).trace()) < 1e-12);
  }

  TEST_CASE("trace functional row is zero column by column") {
    const FockBasis b(2, 2);
    const auto l = make({0.0, 0.25, 1.0}, drive(0.05, 0.3), b);
    const ComplexMatrix dense = l.dense();
    ComplexVector trace_row = ComplexVector::Zero(81);
    for (Eigen::Index i = 0; i < 9; ++i) trace_row(i * 9 + i) = 1.0;
    CHECK((trace_row.transpose() * dense).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("mismatched Hamiltonian") {
    const SparseMatrix h = build_hamiltonian({}, drive(0.01, 0.0), FockBasis(1, 3));
    CHECK(kind_of([&] { Liouvillian(h, 0.1, FockBasis(2, 3)); }) == ErrorKind::DimensionMismatch);
  }

  TEST_CASE("maps Hermitian matrices to Hermitian matrices") {
    std::mt19937_64 rng(9);
    const FockBasis b(2, 3);
    const auto l = make({0.0, 0.25, 1.0}, drive(0.01, 1.0), b);
    const ComplexMatrix y = l.apply(oracle::random_density(16, rng));
    CHECK((y - y.adjoint()).norm() < 1e-13);
    CHECK(std::abs(y.trace()) < 1e-13);
  }

  TEST_CASE("zero generator") {
    const FockBasis b(1, 3);
    SparseMatrix h(4, 4);
    const Liouvillian l(h, 0.0, b);
    CHECK(l.dense().norm() == 0.0);
  }

  TEST_CASE("norm estimate bounds the true spectral norm from below, tightly") {
    const FockBasis b(2, 2);
    const auto l = make({0.0, 0.3, 1.0}, drive(0.05, 0.2), b);
    const Eigen::JacobiSVD<ComplexMatrix> svd(l.dense());
    const double exact = svd.singularValues()(0);
    const double est = l.norm_estimate(200);
    CHECK(est <= exact * (1 + 1e-12));
    CHECK(est >= 0.99 * exact);
  }
}

TEST_SUITE("dynamics") {
  TEST_CASE("photon number decays at twice gamma") {
    const FockBasis b(1, 3);
    const double gamma = 0.3;
    const auto l = make({0.2, 0.0, 0.5}, drive(0.0, 0.0, gamma), b);
    ComplexMatrix rho0 = ComplexMatrix::Zero(4, 4);
    rho0(2, 2) = 1.0;
    for (double t : {0.5, 2.0}) {
      const ComplexMatrix rho = evolve(l, rho0, t);
      CHECK(expect_number(rho, b, 0) == doctest::Approx(2.0 * std::exp(-2.0 * gamma * t)).epsilon(1e-9));
      const ComplexVector ref = oracle::rk4(l.dense(), vec(rho0), t, 4000);
      CHECK((vec(rho) - ref).norm() < 1e-9);
    }
  }

  TEST_CASE("trace distance") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2), c = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1;
    c(1, 1) = 1;
    CHECK(trace_distance(a, c) == doctest::Approx(1.0));
    CHECK(trace_distance(a, a) == 0.0);
  }
}

TEST_SUITE("steady state") {
  TEST_CASE("undriven chain relaxes to the vacuum") {
    const FockBasis b(2, 2);
    const auto ss = steady_state(make({0.0, 0.1, 1.0}, drive(0.0, 0.3), b));
    CHECK(ss.path == SolverPath::Dense);
    CHECK(std::abs(ss.state.rho(0, 0) - 1.0) < 1e-12);
    CHECK(ss.residual <= 1e-10);
  }

  TEST_CASE("dense and iterative paths agree") {
    const FockBasis b(3, 2);
    const auto l = make({0.0, 0.025, 1.0}, drive(0.01, 1.0), b);
    const auto dense = steady_state(l);
    SteadyStateOptions opt;
    opt.dense_limit = 10;
    const auto iter = steady_state(l, opt);
    CHECK(dense.path == SolverPath::Dense);
    CHECK(iter.path == SolverPath::Iterative);
    CHECK(trace_distance(dense.state.rho, iter.state.rho) < 1e-9);
  }

  TEST_CASE("physical density matrix, fixed point of the dynamics") {
    const FockBasis b(2, 3);
    const auto l = make({0.0, 0.1, 1.0}, drive(0.05, 1.0), b);
    const auto ss = steady_state(l);
    const ComplexMatrix& rho = ss.state.rho;
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    const auto d = static_cast<Eigen::Index>(b.dimension());
    ComplexMatrix vacuum = ComplexMatrix::Zero(d, d);
    vacuum(0, 0) = 1;
    CHECK(trace_distance(evolve(l, vacuum, 20.0 / 0.1), rho) < 1e-6);
  }

  TEST_CASE("uniform pump on a ring gives identical sites") {
    const FockBasis b(3, 2);
    const auto ss = steady_state(make({0.0, 0.1, 1.0}, drive(0.01, 0.6), b));
    const auto obs = observables(ss.state);
    CHECK(obs.N[1] == doctest::Approx(obs.N[0]).epsilon(1e-8));
    CHECK(obs.N[2] == doctest::Approx(obs.N[0]).epsilon(1e-8));
    REQUIRE(obs.g2[0].has_value());
    CHECK(*obs.g2[2] == doctest::Approx(*obs.g2[0]).epsilon(1e-8));
  }

  TEST_CASE("linear cavity is coherent") {
    const FockBasis b(1, 6);
    const double f = 0.02, gamma = 0.1, detuning = 0.05;
    const auto ss = steady_state(make({detuning, 0.0, 0.0}, drive(f, 0.0, gamma), b));
    const auto obs = observables(ss.state);
    // alpha = -i F / (gamma + i detuning)
    CHECK(obs.N[0] == doctest::Approx(f * f / (gamma * gamma + detuning * detuning)).epsilon(1e-8));
    CHECK(*obs.g2[0] == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("degenerate kernel without dissipation") {
    const FockBasis b(1, 2);
    const SparseMatrix h = build_hamiltonian({0.0, 0.0, 1.0}, drive(0.0, 0.0), b);
    CHECK(kind_of([&] { steady_state(Liouvillian(h, 0.0, b)); }) == ErrorKind::DegenerateKernel);
    SteadyStateOptions opt;
    opt.dense_limit = 1;
    CHECK(kind_of([&] { steady_state(Liouvillian(h, 0.0, b), opt); }) == ErrorKind::DegenerateKernel);
  }
}

TEST_SUITE("observables") {
  TEST_CASE("coherent state has g2 = 1") {
    const FockBasis b(2, 8);
    const std::vector<Complex> alpha{{0.1, 0.05}, {0.0, -0.2}};
    const auto rho = coherent_state(b, alpha);
    const auto obs = observables(rho);
    CHECK(obs.N[0] == doctest::Approx(0.0125).epsilon(1e-8));
    CHECK(obs.N[1] == doctest::Approx(0.04).epsilon(1e-8));
    CHECK(*obs.g2[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(*obs.g2[1] == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("two-photon Fock state has g2 = 1/2") {
    const FockBasis b(1, 3);
    DensityMatrix rho{b, ComplexMatrix::Zero(4, 4)};
    rho.rho(2, 2) = 1.0;
    const auto obs = observables(rho);
    CHECK(obs.N[0] == doctest::Approx(2.0));
    CHECK(*obs.g2[0] == doctest::Approx(0.5));
  }

  TEST_CASE("vacuum has no g2; one-photon truncation has g2 = 0") {
    const FockBasis b(2, 1);
    const std::vector<Complex> zero{0.0, 0.0};
    const auto vac = observables(coherent_state(b, zero));
    CHECK_FALSE(vac.g2[0].has_value());
    const std::vector<Complex> alpha{0.3, 0.0};
    const auto obs = observables(coherent_state(b, alpha));
    CHECK(*obs.g2[0] == 0.0);
    CHECK_FALSE(obs.g2[1].has_value());
  }
}

TEST_SUITE("sweep") {
  TEST_CASE("grid validation") {
    const FockBasis b(2, 2);
    const CavityChain c = CavityChain::from_pair_hopping(0.4, 1.0);
    const std::vector<double> short_grid{0.0, 1.5};
    CHECK(kind_of([&] { pump_sweep(c, drive(0.01, 0), short_grid, b); }) == ErrorKind::Validation);
    const std::vector<double> decreasing{1.5, 1.0, 0.0};
    CHECK(kind_of([&] { pump_sweep(c, drive(0.01, 0), decreasing, b); }) == ErrorKind::Validation);
    const std::vector<double> narrow{0.0, 0.1, 0.2, 0.3};
    CHECK(kind_of([&] { pump_sweep(c, drive(0.01, 0), narrow, b); }) == ErrorKind::Validation);
  }

  TEST_CASE("resonances") {
    const CavityChain c = CavityChain::from_pair_hopping(1.0, -1.0, 0.5);
    CHECK(c.J == doctest::Approx(0.25));
    CHECK(single_photon_resonance(c) == doctest::Approx(1.0));
    CHECK(pair_resonance(c) == doctest::Approx(0.5 - std::sqrt(5.0) / 2.0));
  }

  TEST_CASE("peaks sit at the single-photon and pair resonances") {
    const FockBasis b(3, 2);
    const CavityChain c = CavityChain::from_pair_hopping(0.1, 1.0);
    std::vector<double> grid;
    for (int i = 0; i <= 24; ++i) grid.push_back(-0.2 + 1.4 * i / 24.0);
    const auto r = pump_sweep(c, drive(0.01, 0.0), grid, b);
    REQUIRE(r.points.size() == grid.size());
    REQUIRE(r.number_peaks.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
      CHECK(std::abs(r.number_peaks[s].omega_p - single_photon_resonance(c)) < 0.05);
      CHECK(std::abs(r.g2_peaks[s].omega_p - pair_resonance(c)) < 0.05);
    }
    for (const auto& p : r.points) CHECK(p.obs.residual <= 1e-10);
  }

  TEST_CASE("truncation convergence at weak pumping") {
    const std::vector<std::size_t> levels{2, 3, 4};
    const auto rep = truncation_convergence(CavityChain::from_pair_hopping(0.1, 1.0), drive(0.01, 1.0), levels, 2);
    REQUIRE(rep.steps.size() == 3);
    CHECK_FALSE(rep.steps[0].max_relative_change.has_value());
    CHECK(*rep.steps[2].max_relative_change < *rep.steps[1].max_relative_change);
    CHECK(rep.converged);
  }

  TEST_CASE("n_max = 1 cannot hold a pair") {
    const std::vector<std::size_t> levels{1, 2, 3};
    const auto rep = truncation_convergence(CavityChain::from_pair_hopping(0.1, 1.0), drive(0.01, 1.0), levels, 3);
    for (const auto& g : rep.steps[0].obs.g2) CHECK((!g.has_value() || *g == 0.0));
    REQUIRE(rep.steps.size() == 3);
    CHECK(std::isinf(*rep.steps[1].max_relative_change));
    CHECK(std::isfinite(*rep.steps[2].max_relative_change));
  }

  TEST_CASE("presets") {
    const auto names = pump_preset_names();
    CHECK(names == std::vector<std::string>{"fig3a", "fig3b", "fig3c", "fig3d"});
    for (const auto& n : names) {
      const auto p = pump_preset(n);
      const auto g = p.grid();
      CHECK(g.size() == 200);
      CHECK(g.front() <= single_photon_resonance(p.chain));
      CHECK(g.front() <= pair_resonance(p.chain));
      CHECK(g.back() >= single_photon_resonance(p.chain));
      CHECK(g.back() >= pair_resonance(p.chain));
      CHECK(p.drive.F == doctest::Approx(0.01 * std::abs(p.chain.u)));
      CHECK(p.drive.gamma == doctest::Approx(0.1 * std::abs(p.chain.u)));
    }
    CHECK(pump_preset("fig3a").chain.u < 0);
    CHECK(4.0 * pump_preset("fig3d").chain.J == doctest::Approx(4.0));
    CHECK(kind_of([] { pump_preset("fig9"); }) == ErrorKind::Validation);
  }
}
