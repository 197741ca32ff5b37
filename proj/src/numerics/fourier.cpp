#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kerrpair/error.hpp"
#include "kerrpair/numerics.hpp"

namespace kerrpair::numerics {

UniformGrid UniformGrid::centered(std::size_t count, double halfwidth, double center) {
  if (count == 0 || !(halfwidth > 0)) {
    throw Error(ErrorKind::Validation, "centered grid needs count > 0 and halfwidth > 0");
  }
  const double step = 2.0 * halfwidth / static_cast<double>(count);
  return {center - halfwidth + 0.5 * step, step, count};
}

ComplexVector nonuniform_dft(std::span<const double> x, std::span<const Complex> f, const UniformGrid& q) {
  if (x.size() != f.size()) {
    throw Error(ErrorKind::DimensionMismatch, "nonuniform_dft: abscissae and samples differ in length");
  }
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorKind::Validation, "nonuniform_dft needs at least two samples");
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && !(x[i + 1] > x[i])) {
      throw Error(ErrorKind::Validation, "nonuniform_dft: abscissae must be strictly increasing");
    }
    const double left = i > 0 ? x[i] - x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] - x[i] : 0.0;
    w[i] = 0.5 * (left + right);
  }
  ComplexVector out(static_cast<Eigen::Index>(q.count));
  for (std::size_t m = 0; m < q.count; ++m) {
    const double qm = q[m];
    Complex acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += w[i] * f[i] * std::polar(1.0, -qm * x[i]);
    }
    out(static_cast<Eigen::Index>(m)) = acc;
  }
  return out;
}

ComplexMatrix inverse_dft_2d(const ComplexMatrix& in) {
  const Eigen::Index rows = in.rows();
  const Eigen::Index cols = in.cols();
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);

  ComplexMatrix out(rows, cols);
  std::vector<Complex> src, dst;

  src.resize(static_cast<std::size_t>(cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) src[static_cast<std::size_t>(c)] = in(r, c);
    fft.inv(dst, src);
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = dst[static_cast<std::size_t>(c)];
  }
  src.resize(static_cast<std::size_t>(rows));
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) src[static_cast<std::size_t>(r)] = out(r, c);
    fft.inv(dst, src);
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = dst[static_cast<std::size_t>(r)];
  }
  return out;
}

}  // namespace kerrpair::numerics
