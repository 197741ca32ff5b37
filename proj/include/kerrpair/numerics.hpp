#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kerrpair::numerics {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Dense linear algebra
// ---------------------------------------------------------------------------

// ||m - m^H||_F / ||m||_F, zero for the zero matrix.
double hermitian_deviation(const ComplexMatrix& m);

struct HermitianEigen {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns, vectors.col(i) <-> values(i)
};

/// Eigendecomposition of a Hermitian matrix.
///
/// Throws Error{NotHermitian} when hermitian_deviation(m) exceeds
/// `hermitian_tol`. The strictly Hermitian part of `m` is decomposed.
HermitianEigen eig_hermitian(const ComplexMatrix& m, double hermitian_tol = 1e-12);

struct NullSpaceOptions {
  double degeneracy_tol = 1e-6;  // relative gap between the two smallest singular values
  double residual_tol = 1e-10;   // ||m x|| <= residual_tol * ||m||_2
};

struct NullVector {
  ComplexVector vector;  // unit 2-norm
  double residual = 0;   // ||m x|| / ||m||_2
  double gap_ratio = 0;  // second smallest / smallest singular value (inf if exact)
};

/// Kernel vector of a square matrix from its singular value decomposition.
///
/// Throws DegenerateKernel when the two smallest singular values are within
/// degeneracy_tol * sigma_max of each other, and NoKernel when the smallest
/// one is above residual_tol * sigma_max.
NullVector null_vector(const ComplexMatrix& m, const NullSpaceOptions& options = {});

/// Solves A X - X A^H = C for a fixed A via its complex Schur form.
///
/// Requires lambda_i(A) != conj(lambda_j(A)) for all i, j, which holds when
/// every eigenvalue of A has a strictly negative imaginary part.
class SkewSylvester {
 public:
  explicit SkewSylvester(const ComplexMatrix& a);
  ComplexMatrix solve(const ComplexMatrix& c) const;
  Eigen::Index size() const { return t_.rows(); }

 private:
  ComplexMatrix q_;  // unitary
  ComplexMatrix t_;  // upper triangular
};

// ---------------------------------------------------------------------------
// Krylov solver
// ---------------------------------------------------------------------------

using LinearOperator = std::function<ComplexVector(const ComplexVector&)>;

struct GmresOptions {
  double tolerance = 1e-13;  // on ||b - A x|| / ||b||
  std::size_t restart = 80;
  std::size_t max_iterations = 2000;
};

struct GmresResult {
  ComplexVector x;
  double relative_residual = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Restarted GMRES with right preconditioning: solves A x = b through
/// A M y = b, x = M y. Pass an empty `preconditioner` for M = I.
GmresResult gmres(const LinearOperator& a, const ComplexVector& b, const LinearOperator& preconditioner,
                  const GmresOptions& options = {});

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// How an integrand decays towards an infinite bound. Selects the change of
// variables used to reach a finite domain.
enum class TailDecay {
  Exponential,       // |f| ~ exp(-|x| / scale); the tail is cut at 50 scale lengths
  AlgebraicSquared,  // |f| ~ |x|^-2 or faster; x = a + scale * t / (1 - t)
};

struct QuadratureSpec {
  double lower = 0;
  double upper = 1;  // either bound may be +-infinity
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 2000;
  // Only consulted for infinite bounds.
  TailDecay decay = TailDecay::AlgebraicSquared;
  double scale = 1;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;  // estimated absolute error
};

/// Adaptive 21-point Gauss-Kronrod integration.
///
/// Throws MaxSubdivisions when the tolerance is not reached within
/// spec.max_subdivisions intervals, QuadratureFailure on roundoff or
/// non-finite integrand values.
QuadratureResult integrate(const std::function<double(double)>& f, const QuadratureSpec& spec);

// ---------------------------------------------------------------------------
// Fourier transforms
// ---------------------------------------------------------------------------

struct UniformGrid {
  double start = 0;
  double step = 1;
  std::size_t count = 0;

  double operator[](std::size_t i) const { return start + step * static_cast<double>(i); }
  double span() const { return step * static_cast<double>(count); }

  // `count` points placed symmetrically about `center`, spacing 2*halfwidth/count.
  static UniformGrid centered(std::size_t count, double halfwidth, double center = 0);
};

/// F(q) = sum_i w_i f(x_i) exp(-i q x_i), with w_i the trapezoid weights of
/// the (possibly non-uniform, strictly increasing) abscissae x.
ComplexVector nonuniform_dft(std::span<const double> x, std::span<const Complex> f, const UniformGrid& q);

/// Unnormalized 2-D inverse DFT, out(m, l) = sum_{i,j} in(i, j) e^{+2 pi i (i m / rows + j l / cols)}.
ComplexMatrix inverse_dft_2d(const ComplexMatrix& in);

}  // namespace kerrpair::numerics
