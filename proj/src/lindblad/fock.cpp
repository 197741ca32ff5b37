#include <cmath>
#include <sstream>

#include "kerrpair/error.hpp"
#include "kerrpair/lindblad.hpp"

namespace kerrpair::lindblad {

FockBasis::FockBasis(std::size_t sites, std::size_t n_max) : sites_(sites), n_max_(n_max), dimension_(1) {
  if (sites == 0) throw Error(ErrorKind::Validation, "Fock basis needs at least one site");
  if (n_max == 0) throw Error(ErrorKind::Validation, "Fock basis needs n_max >= 1");
  for (std::size_t j = 0; j < sites; ++j) {
    dimension_ *= n_max + 1;
    if (dimension_ > 100000) throw Error(ErrorKind::Validation, "Fock basis dimension above 1e5");
  }
}

std::size_t FockBasis::stride(std::size_t site) const {
  std::size_t s = 1;
  for (std::size_t j = site + 1; j < sites_; ++j) s *= n_max_ + 1;
  return s;
}

std::size_t FockBasis::occupation(std::size_t index, std::size_t site) const {
  return (index / stride(site)) % (n_max_ + 1);
}

std::vector<std::size_t> FockBasis::occupations(std::size_t index) const {
  if (index >= dimension_) throw Error(ErrorKind::Validation, "Fock index out of range");
  std::vector<std::size_t> m(sites_);
  for (std::size_t j = 0; j < sites_; ++j) m[j] = occupation(index, j);
  return m;
}

std::size_t FockBasis::index(std::span<const std::size_t> occupations) const {
  if (occupations.size() != sites_) throw Error(ErrorKind::DimensionMismatch, "occupation tuple has wrong length");
  std::size_t idx = 0;
  for (std::size_t m : occupations) {
    if (m > n_max_) throw Error(ErrorKind::Validation, "occupation above n_max");
    idx = idx * (n_max_ + 1) + m;
  }
  return idx;
}

SparseMatrix FockBasis::annihilation(std::size_t site) const {
  if (site >= sites_) throw Error(ErrorKind::Validation, "site index out of range");
  const std::size_t s = stride(site);
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    const std::size_t m = occupation(i, site);
    if (m > 0) {
      entries.emplace_back(static_cast<int>(i - s), static_cast<int>(i), std::sqrt(static_cast<double>(m)));
    }
  }
  const auto d = static_cast<Eigen::Index>(dimension_);
  SparseMatrix a(d, d);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrix FockBasis::number(std::size_t site) const {
  if (site >= sites_) throw Error(ErrorKind::Validation, "site index out of range");
  const auto d = static_cast<Eigen::Index>(dimension_);
  SparseMatrix n(d, d);
  n.reserve(Eigen::VectorXi::Constant(d, 1));
  for (std::size_t i = 0; i < dimension_; ++i) {
    n.insert(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(occupation(i, site));
  }
  n.makeCompressed();
  return n;
}

CavityChain CavityChain::from_lattice(const lattice::LatticeParams& p) { return {p.omega_c, p.J, p.u}; }

CavityChain CavityChain::from_pair_hopping(double j0, double u, double omega_c) { return {omega_c, 0.25 * j0, u}; }

void DriveParams::validate(std::size_t sites) const {
  if (!(F >= 0) || !std::isfinite(F)) throw Error(ErrorKind::Validation, "pump amplitude F must be finite and >= 0");
  if (!(gamma > 0) || !std::isfinite(gamma)) throw Error(ErrorKind::Validation, "decay rate gamma must be > 0");
  if (!std::isfinite(omega_p)) throw Error(ErrorKind::Validation, "pump frequency must be finite");
  if (!psi.empty() && psi.size() != sites) {
    throw Error(ErrorKind::DimensionMismatch, "one pump phase per site required");
  }
}

double DriveParams::phase(std::size_t site) const { return psi.empty() ? 0.0 : psi.at(site); }

std::vector<double> DriveParams::phases_for_pair_momentum(double k0, double b, std::size_t sites) {
  std::vector<double> out(sites);
  for (std::size_t j = 0; j < sites; ++j) out[j] = 2.0 * k0 * b * static_cast<double>(j);
  return out;
}

SparseMatrix build_hamiltonian(const CavityChain& chain, const DriveParams& drive, const FockBasis& basis) {
  drive.validate(basis.sites());
  if (!std::isfinite(chain.omega_c) || !std::isfinite(chain.J) || !std::isfinite(chain.u)) {
    throw Error(ErrorKind::Validation, "cavity parameters must be finite");
  }
  const double occupancy = drive.F * drive.F / (drive.gamma * drive.gamma);
  if (occupancy > static_cast<double>(basis.n_max()) / 4.0) {
    std::ostringstream msg;
    msg << "F^2/gamma^2 = " << occupancy << " exceeds n_max/4 = " << basis.n_max() / 4.0;
    throw Error(ErrorKind::TruncationTooSmall, msg.str());
  }

  const std::size_t m = basis.sites();
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  std::vector<SparseMatrix> a(m);
  for (std::size_t j = 0; j < m; ++j) a[j] = basis.annihilation(j);

  // Diagonal part straight from the occupations.
  std::vector<Eigen::Triplet<Complex>> diag;
  diag.reserve(basis.dimension());
  const double detuning = chain.omega_c - drive.omega_p;
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    double e = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto n = static_cast<double>(basis.occupation(i, j));
      e += detuning * n + chain.u * n * (n - 1.0);
    }
    diag.emplace_back(static_cast<int>(i), static_cast<int>(i), e);
  }
  SparseMatrix h(d, d);
  h.setFromTriplets(diag.begin(), diag.end());

  const std::size_t bonds = m >= 3 ? m : m - 1;
  for (std::size_t j = 0; j < bonds; ++j) {
    const std::size_t next = (j + 1) % m;
    const SparseMatrix hop = chain.J * SparseMatrix(a[next].adjoint()) * a[j];
    h += hop;
    h += SparseMatrix(hop.adjoint());
  }
  for (std::size_t j = 0; j < m; ++j) {
    const Complex f = drive.F * std::polar(1.0, drive.phase(j));
    const SparseMatrix pump = f * SparseMatrix(a[j].adjoint());
    h += pump;
    h += SparseMatrix(pump.adjoint());
  }
  h.prune(Complex(0.0));
  h.makeCompressed();
  return h;
}

SteadyObservables observables(const DensityMatrix& rho) {
  const FockBasis& basis = rho.basis;
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  if (rho.rho.rows() != d || rho.rho.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix does not match its basis");
  }
  SteadyObservables obs;
  obs.n_max = basis.n_max();
  obs.N.assign(basis.sites(), 0.0);
  std::vector<double> pairs(basis.sites(), 0.0);
  // Both operators are diagonal in the Fock basis.
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const double p = rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    for (std::size_t j = 0; j < basis.sites(); ++j) {
      const auto n = static_cast<double>(basis.occupation(i, j));
      obs.N[j] += p * n;
      pairs[j] += p * n * (n - 1.0);
    }
  }
  obs.g2.resize(basis.sites());
  for (std::size_t j = 0; j < basis.sites(); ++j) {
    if (obs.N[j] >= 1e-14) obs.g2[j] = pairs[j] / (obs.N[j] * obs.N[j]);
  }
  return obs;
}

DensityMatrix coherent_state(const FockBasis& basis, std::span<const Complex> alpha) {
  if (alpha.size() != basis.sites()) throw Error(ErrorKind::DimensionMismatch, "one amplitude per site required");
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  ComplexVector psi(d);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    Complex c = 1.0;
    for (std::size_t j = 0; j < basis.sites(); ++j) {
      const std::size_t n = basis.occupation(i, j);
      for (std::size_t k = 1; k <= n; ++k) c *= alpha[j] / std::sqrt(static_cast<double>(k));
    }
    psi(static_cast<Eigen::Index>(i)) = c;
  }
  psi.normalize();
  return {basis, psi * psi.adjoint()};
}

}  // namespace kerrpair::lindblad
