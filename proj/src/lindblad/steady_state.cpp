#include <cmath>
#include <sstream>

#include "kerrpair/error.hpp"
#include "kerrpair/lindblad.hpp"

namespace kerrpair::lindblad {
namespace {

ComplexMatrix to_density(ComplexMatrix x) {
  const Complex tr = x.trace();
  if (std::abs(tr) < 1e-300) throw Error(ErrorKind::SolverFailure, "kernel vector has zero trace");
  x /= tr;
  return 0.5 * (x + x.adjoint());
}

struct AnchoredSolve {
  ComplexMatrix rho;
  std::size_t iterations = 0;
  bool converged = false;
};

// Solves L(X) + gamma tr(X) anchor = gamma anchor. Any solution has unit
// trace because tr L(X) = 0, hence L(X) = 0.
AnchoredSolve anchored_solve(const Liouvillian& l, const numerics::SkewSylvester& sylvester, const ComplexMatrix& anchor,
                             const numerics::GmresOptions& options) {
  const auto d = static_cast<Eigen::Index>(l.dimension());
  const double gamma = l.gamma();
  auto as_matrix = [d](const ComplexVector& v) { return Eigen::Map<const ComplexMatrix>(v.data(), d, d); };
  auto as_vector = [d](const ComplexMatrix& m) { return ComplexVector(Eigen::Map<const ComplexVector>(m.data(), d * d)); };

  const numerics::LinearOperator op = [&](const ComplexVector& x) {
    const ComplexMatrix xm = as_matrix(x);
    return as_vector(l.apply(xm) + gamma * xm.trace() * anchor);
  };
  // Inverse of the no-jump part -i (H_eff X - X H_eff^H).
  const numerics::LinearOperator precondition = [&](const ComplexVector& y) {
    return as_vector(sylvester.solve(Complex(0.0, 1.0) * as_matrix(y)));
  };

  const numerics::GmresResult r = numerics::gmres(op, as_vector(gamma * anchor), precondition, options);
  return {ComplexMatrix(as_matrix(r.x)), r.iterations, r.converged};
}

}  // namespace

SteadyState steady_state(const Liouvillian& l, const SteadyStateOptions& options) {
  const auto d = static_cast<Eigen::Index>(l.dimension());
  if (l.gamma() == 0.0) {
    throw Error(ErrorKind::DegenerateKernel, "without decay every eigenprojector of H is stationary");
  }

  SteadyState out;
  ComplexMatrix rho;
  if (static_cast<std::size_t>(d * d) <= options.dense_limit) {
    numerics::NullSpaceOptions ns;
    ns.residual_tol = options.residual_tol;
    const numerics::NullVector nv = numerics::null_vector(l.dense(options.dense_limit), ns);
    rho = to_density(Eigen::Map<const ComplexMatrix>(nv.vector.data(), d, d));
    out.path = SolverPath::Dense;
  } else {
    const ComplexMatrix h_eff(l.effective_hamiltonian());
    // A small uniform damping keeps every Schur diagonal strictly below the real axis.
    const ComplexMatrix shifted = h_eff - Complex(0.0, 1e-2 * l.gamma()) * ComplexMatrix::Identity(d, d);
    const numerics::SkewSylvester sylvester(shifted);

    ComplexMatrix vacuum = ComplexMatrix::Zero(d, d);
    vacuum(0, 0) = 1.0;
    const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);

    const AnchoredSolve first = anchored_solve(l, sylvester, vacuum, options.gmres);
    const AnchoredSolve second = anchored_solve(l, sylvester, mixed, options.gmres);
    const ComplexMatrix rho1 = to_density(first.rho);
    const ComplexMatrix rho2 = to_density(second.rho);
    const double spread = trace_distance(rho1, rho2);
    if (spread > options.uniqueness_tol) {
      std::ostringstream msg;
      msg << "anchored solves disagree by trace distance " << spread;
      throw Error(ErrorKind::DegenerateKernel, msg.str());
    }
    if (!first.converged && !second.converged) {
      throw Error(ErrorKind::SolverFailure, "GMRES did not converge for the steady state");
    }
    rho = first.converged ? rho1 : rho2;
    out.path = SolverPath::Iterative;
    out.iterations = first.iterations + second.iterations;
  }

  const double norm = l.norm_estimate();
  out.residual = norm > 0 ? l.apply(rho).norm() / (norm * rho.norm()) : 0.0;
  if (out.residual > options.residual_tol) {
    std::ostringstream msg;
    msg << "steady-state residual " << out.residual << " above " << options.residual_tol;
    throw Error(ErrorKind::SolverFailure, msg.str());
  }
  const double lowest = numerics::eig_hermitian(rho).values.minCoeff();
  if (lowest < -options.psd_tol) {
    std::ostringstream msg;
    msg << "steady state has eigenvalue " << lowest;
    throw Error(ErrorKind::SolverFailure, msg.str());
  }
  out.state = {l.basis(), rho};
  return out;
}

}  // namespace kerrpair::lindblad
