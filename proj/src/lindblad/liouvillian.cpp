#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "kerrpair/error.hpp"
#include "kerrpair/lindblad.hpp"

namespace kerrpair::lindblad {

Liouvillian::Liouvillian(const SparseMatrix& hamiltonian, double gamma, const FockBasis& basis)
    : basis_(basis), gamma_(gamma), h_(hamiltonian) {
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  if (hamiltonian.rows() != d || hamiltonian.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian does not match the Fock basis");
  }
  if (!(gamma >= 0) || !std::isfinite(gamma)) throw Error(ErrorKind::Validation, "gamma must be finite and >= 0");
  const ComplexMatrix dense_h(hamiltonian);
  if (numerics::hermitian_deviation(dense_h) > 1e-12) {
    throw Error(ErrorKind::NotHermitian, "Liouvillian needs a Hermitian Hamiltonian");
  }

  SparseMatrix total(d, d);
  for (std::size_t j = 0; j < basis.sites(); ++j) {
    a_.push_back(basis.annihilation(j));
    a_dag_.push_back(SparseMatrix(a_.back().adjoint()));
    total += basis.number(j);
  }
  h_eff_ = h_ - Complex(0.0, gamma) * total;
  h_eff_.makeCompressed();
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& x) const {
  const ComplexMatrix hx = h_eff_ * x;
  // X H_eff^H = (H_eff X^H)^H
  ComplexMatrix y = Complex(0.0, -1.0) * (hx - (h_eff_ * x.adjoint()).adjoint());
  for (std::size_t j = 0; j < a_.size(); ++j) {
    const ComplexMatrix ax = a_[j] * x;
    y += 2.0 * gamma_ * (a_[j] * ax.adjoint()).adjoint();
  }
  return y;
}

ComplexMatrix Liouvillian::apply_adjoint(const ComplexMatrix& y) const {
  const SparseMatrix h_adj = h_eff_.adjoint();
  ComplexMatrix x = Complex(0.0, 1.0) * (h_adj * y - (h_adj * y.adjoint()).adjoint());
  for (std::size_t j = 0; j < a_.size(); ++j) {
    const ComplexMatrix ay = a_dag_[j] * y;
    x += 2.0 * gamma_ * (a_dag_[j] * ay.adjoint()).adjoint();
  }
  return x;
}

ComplexVector Liouvillian::apply_vec(const ComplexVector& x) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  if (x.size() != d * d) throw Error(ErrorKind::DimensionMismatch, "vectorized density matrix has wrong length");
  const ComplexMatrix y = apply(Eigen::Map<const ComplexMatrix>(x.data(), d, d));
  return Eigen::Map<const ComplexVector>(y.data(), d * d);
}

ComplexMatrix Liouvillian::dense(std::size_t max_rows) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  if (static_cast<std::size_t>(d * d) > max_rows) {
    throw Error(ErrorKind::Validation, "dense Liouvillian above the requested size limit");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix h(h_eff_);
  ComplexMatrix l = Complex(0.0, -1.0) * (Eigen::kroneckerProduct(id, h).eval() -
                                          Eigen::kroneckerProduct(h.conjugate(), id).eval());
  for (const SparseMatrix& a : a_) {
    const ComplexMatrix ad(a);
    l += 2.0 * gamma_ * Eigen::kroneckerProduct(ad.conjugate(), ad).eval();
  }
  return l;
}

double Liouvillian::norm_estimate(std::size_t iterations) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  ComplexMatrix x(d, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(normal(rng), normal(rng));
  x /= x.norm();
  double sigma = 0;
  for (std::size_t k = 0; k < iterations; ++k) {
    const ComplexMatrix y = apply_adjoint(apply(x));
    const double n = y.norm();
    if (n == 0) return 0;
    sigma = std::sqrt(n);
    x = y / n;
  }
  return sigma;
}

Liouvillian build_liouvillian(const SparseMatrix& hamiltonian, double gamma, const FockBasis& basis) {
  return Liouvillian(hamiltonian, gamma, basis);
}

ComplexMatrix evolve(const Liouvillian& l, const ComplexMatrix& rho0, double t, const EvolutionOptions& options) {
  namespace odeint = boost::numeric::odeint;
  const auto d = static_cast<Eigen::Index>(l.dimension());
  if (rho0.rows() != d || rho0.cols() != d) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong size");
  if (!(t >= 0)) throw Error(ErrorKind::Validation, "evolution time must be >= 0");

  using State = std::vector<Complex>;
  State x(rho0.data(), rho0.data() + rho0.size());
  auto rhs = [&](const State& s, State& ds, double) {
    const ComplexMatrix y = l.apply(Eigen::Map<const ComplexMatrix>(s.data(), d, d));
    ds.assign(y.data(), y.data() + y.size());
  };
  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, options.initial_step);
  return Eigen::Map<const ComplexMatrix>(x.data(), d, d);
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "trace distance of mismatched matrices");
  const ComplexMatrix diff = a - b;
  const ComplexMatrix herm = 0.5 * (diff + diff.adjoint());
  return 0.5 * numerics::eig_hermitian(herm).values.cwiseAbs().sum();
}

}  // namespace kerrpair::lindblad
