#include "sos/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

namespace sos::linalg {

double unitarity_defect(const Eigen::MatrixXcd& u) {
  if (u.size() == 0) return 0.0;
  const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd log_unitary(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  if (n == 0) return u;
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& Q = schur.matrixU();
  Eigen::VectorXcd logd(n);
  for (Eigen::Index i = 0; i < n; ++i) logd[i] = cplx(0.0, std::arg(T(i, i)));
  Eigen::MatrixXcd k = Q * logd.asDiagonal() * Q.adjoint();
  return 0.5 * (k - k.adjoint());
}

Eigen::MatrixXcd exp_antihermitian(const Eigen::MatrixXcd& kappa) {
  const Eigen::Index n = kappa.rows();
  if (n == 0) return kappa;
  const Eigen::MatrixXcd h = cplx(0.0, -1.0) * kappa;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXcd phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::polar(1.0, es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd align_columns(const Eigen::MatrixXcd& u, bool real_orthogonal) {
  const Eigen::Index n = u.rows();
  Eigen::MatrixXcd out(n, n);
  std::vector<bool> row_used(n, false), col_used(n, false);
  Eigen::MatrixXd mag = u.cwiseAbs();
  // Greedy assignment: repeatedly take the largest remaining entry.
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_used[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (col_used[j]) continue;
        if (mag(i, j) > best) {
          best = mag(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = col_used[bj] = true;
    out.col(bi) = u.col(bj);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx d = out(k, k);
    const double a = std::abs(d);
    if (a == 0.0) continue;
    if (real_orthogonal)
      out.col(k) *= (d.real() < 0 ? -1.0 : 1.0);
    else
      out.col(k) *= std::conj(d) / a;
  }
  if (real_orthogonal && n > 0 && out.real().determinant() < 0) {
    Eigen::Index weakest = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(out(k, k)) < std::abs(out(weakest, weakest))) weakest = k;
    out.col(weakest) *= -1.0;
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()[0];
}

}  // namespace sos::linalg
