#include <cmath>
#include <vector>

#include "kerrpair/error.hpp"
#include "kerrpair/numerics.hpp"

namespace kerrpair::numerics {
namespace {

struct Givens {
  double c = 1;
  Complex s = 0;

  static Givens zeroing(Complex a, Complex b) {
    const double abs_a = std::abs(a);
    const double rho = std::hypot(abs_a, std::abs(b));
    if (rho == 0.0) return {};
    if (abs_a == 0.0) return {0.0, std::conj(b) / rho};
    return {abs_a / rho, (a / abs_a) * std::conj(b) / rho};
  }

  void apply(Complex& x, Complex& y) const {
    const Complex nx = c * x + s * y;
    const Complex ny = -std::conj(s) * x + c * y;
    x = nx;
    y = ny;
  }
};

}  // namespace

GmresResult gmres(const LinearOperator& a, const ComplexVector& b, const LinearOperator& preconditioner,
                  const GmresOptions& options) {
  if (options.restart == 0) throw Error(ErrorKind::Validation, "gmres restart length must be positive");
  const auto precondition = [&](const ComplexVector& v) { return preconditioner ? preconditioner(v) : v; };

  GmresResult result;
  result.x = ComplexVector::Zero(b.size());
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    result.converged = true;
    return result;
  }

  const auto m = static_cast<Eigen::Index>(options.restart);
  std::vector<ComplexVector> basis;
  ComplexMatrix h(m + 1, m);
  ComplexVector g(m + 1);
  std::vector<Givens> rotations(static_cast<std::size_t>(m));

  ComplexVector r = b;
  double r_norm = b_norm;
  while (result.iterations < options.max_iterations) {
    basis.clear();
    basis.push_back(r / r_norm);
    h.setZero();
    g.setZero();
    g(0) = r_norm;

    Eigen::Index k = 0;
    for (; k < m && result.iterations < options.max_iterations; ++k) {
      ++result.iterations;
      ComplexVector w = a(precondition(basis[static_cast<std::size_t>(k)]));
      for (Eigen::Index i = 0; i <= k; ++i) {
        h(i, k) = basis[static_cast<std::size_t>(i)].dot(w);
        w -= h(i, k) * basis[static_cast<std::size_t>(i)];
      }
      const double w_norm = w.norm();
      h(k + 1, k) = w_norm;
      for (Eigen::Index i = 0; i < k; ++i) rotations[static_cast<std::size_t>(i)].apply(h(i, k), h(i + 1, k));
      rotations[static_cast<std::size_t>(k)] = Givens::zeroing(h(k, k), h(k + 1, k));
      rotations[static_cast<std::size_t>(k)].apply(h(k, k), h(k + 1, k));
      rotations[static_cast<std::size_t>(k)].apply(g(k), g(k + 1));
      if (w_norm > 0.0) basis.push_back(w / w_norm);
      if (std::abs(g(k + 1)) <= options.tolerance * b_norm || w_norm == 0.0) {
        ++k;
        break;
      }
    }

    const ComplexVector y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    ComplexVector update = ComplexVector::Zero(b.size());
    for (Eigen::Index i = 0; i < k; ++i) update += y(i) * basis[static_cast<std::size_t>(i)];
    result.x += precondition(update);

    r = b - a(result.x);
    r_norm = r.norm();
    result.relative_residual = r_norm / b_norm;
    if (result.relative_residual <= options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace kerrpair::numerics
