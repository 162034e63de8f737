#include "sos/eri_compression.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "sos/error.hpp"

namespace sos {

namespace {

void require_chemist(const CoeffTensor4& v) {
  if (v.convention() == Convention::PqrsLadder)
    throw ConventionError("ERI routines need a hermitian-chemist (or charge-charge) tensor");
}

void require_symmetric(const CoeffTensor4& v) {
  const double defect = eri_symmetry_defect(v);
  const double scale = std::max(v.data().cwiseAbs().maxCoeff(), 1e-300);
  if (defect > 1e-10 * scale) {
    std::ostringstream os;
    os << "ERI tensor violates the 8-fold symmetry or is not real (max defect " << defect << ")";
    throw SymmetryError(os.str());
  }
}

}  // namespace

double eri_symmetry_defect(const CoeffTensor4& v) {
  const std::size_t m = v.modes();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          const cplx x = v(i, j, k, l);
          worst = std::max({worst, std::abs(x.imag()), std::abs(x - v(j, i, k, l)), std::abs(x - v(i, j, l, k)),
                            std::abs(x - v(k, l, i, j))});
        }
  return worst;
}

std::vector<SOSFactor> cholesky_baseline(const CoeffTensor4& v, int L, const CholeskyOptions& options) {
  require_chemist(v);
  require_symmetric(v);
  const std::size_t m = v.modes();
  const auto M = static_cast<Eigen::Index>(m);
  std::vector<SOSFactor> out;
  if (m == 0 || v.norm() == 0.0) return out;
  const Eigen::MatrixXd A = v.as_matrix().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const double top = lam.cwiseAbs().maxCoeff();
  if (lam[0] < -options.negative_tolerance * std::max(top, 1.0)) {
    std::ostringstream os;
    os << "ERI supermatrix is indefinite (smallest eigenvalue " << lam[0] << ")";
    throw DecompositionError(os.str());
  }
  if (lam[0] < -1e-15 * top) std::clog << "warning: clipping ERI eigenvalues down to " << lam[0] << " to zero\n";

  for (Eigen::Index idx = lam.size() - 1; idx >= 0; --idx) {
    if (L > 0 && static_cast<int>(out.size()) >= L) break;
    if (lam[idx] <= 1e-14 * top) break;
    const Eigen::VectorXd x = std::sqrt(lam[idx]) * es.eigenvectors().col(idx);
    Eigen::MatrixXd Lk(M, M);
    for (Eigen::Index p = 0; p < M; ++p)
      for (Eigen::Index q = 0; q < M; ++q) Lk(p, q) = x[p * M + q];
    Lk = 0.5 * (Lk + Lk.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(Lk);
    SOSFactor f;
    f.mu = inner.eigenvectors().cast<cplx>();
    const Eigen::VectorXd ell = inner.eigenvalues();
    f.J = (ell * ell.transpose()).cast<cplx>();
    f.origin = FactorOrigin::Svd;
    out.push_back(std::move(f));
  }
  return out;
}

CompressionResult compress_eri(const CoeffTensor4& v, const CompressionConfig& config) {
  require_chemist(v);
  require_symmetric(v);
  return greedy_compress(v.with_convention(Convention::ChargeCharge), config, RotationSpace::real(v.modes()));
}

}  // namespace sos
