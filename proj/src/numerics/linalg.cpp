#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kerrpair/error.hpp"
#include "kerrpair/numerics.hpp"

namespace kerrpair::numerics {

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / norm;
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermitian_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "eig_hermitian needs a square matrix");
  }
  const double dev = hermitian_deviation(m);
  if (dev > hermitian_tol) {
    std::ostringstream msg;
    msg << "relative Frobenius deviation " << dev << " exceeds " << hermitian_tol;
    throw Error(ErrorKind::NotHermitian, msg.str());
  }
  if (m.rows() == 0) return {};
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SolverFailure, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

NullVector null_vector(const ComplexMatrix& m, const NullSpaceOptions& options) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "null_vector needs a non-empty square matrix");
  }
  const Eigen::Index n = m.rows();
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sigma = svd.singularValues();  // descending
  const double sigma_max = sigma(0);
  if (sigma_max == 0.0) {
    throw Error(ErrorKind::DegenerateKernel, "zero matrix: every vector is in the kernel");
  }
  const double smallest = sigma(n - 1);
  if (n >= 2) {
    const double second = sigma(n - 2);
    if (second - smallest <= options.degeneracy_tol * sigma_max) {
      std::ostringstream msg;
      msg << "two smallest singular values " << second << ", " << smallest << " are not separated";
      throw Error(ErrorKind::DegenerateKernel, msg.str());
    }
  }
  if (smallest > options.residual_tol * sigma_max) {
    std::ostringstream msg;
    msg << "smallest singular value " << smallest << " is not negligible against " << sigma_max;
    throw Error(ErrorKind::NoKernel, msg.str());
  }

  NullVector out;
  out.vector = svd.matrixV().col(n - 1);
  out.vector.normalize();
  out.residual = (m * out.vector).norm() / sigma_max;
  out.gap_ratio = n >= 2 ? (smallest > 0 ? sigma(n - 2) / smallest : std::numeric_limits<double>::infinity())
                         : std::numeric_limits<double>::infinity();
  return out;
}

SkewSylvester::SkewSylvester(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "SkewSylvester needs a square matrix");
  }
  Eigen::ComplexSchur<ComplexMatrix> schur(a);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::SolverFailure, "complex Schur decomposition did not converge");
  }
  q_ = schur.matrixU();
  t_ = schur.matrixT();
  for (Eigen::Index i = 0; i < t_.rows(); ++i) {
    if (!(t_(i, i).imag() < 0.0)) {
      throw Error(ErrorKind::SolverFailure, "SkewSylvester: spectrum touches the real axis");
    }
  }
}

ComplexMatrix SkewSylvester::solve(const ComplexMatrix& c) const {
  const Eigen::Index n = t_.rows();
  if (c.rows() != n || c.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "SkewSylvester::solve: right-hand side has the wrong shape");
  }
  const ComplexMatrix ct = q_.adjoint() * c * q_;
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  ComplexVector rhs(n);
  // T X - X T^H = C, columns from the right; T^H is lower triangular.
  for (Eigen::Index b = n - 1; b >= 0; --b) {
    rhs = ct.col(b);
    const Eigen::Index tail = n - 1 - b;
    if (tail > 0) {
      rhs.noalias() += x.rightCols(tail) * t_.row(b).tail(tail).adjoint();
    }
    const Complex shift = std::conj(t_(b, b));
    for (Eigen::Index a = n - 1; a >= 0; --a) {
      Complex acc = rhs(a);
      const Eigen::Index rest = n - 1 - a;
      if (rest > 0) {
        acc -= (t_.row(a).tail(rest) * x.col(b).tail(rest))(0, 0);
      }
      x(a, b) = acc / (t_(a, a) - shift);
    }
  }
  return q_ * x * q_.adjoint();
}

}  // namespace kerrpair::numerics
