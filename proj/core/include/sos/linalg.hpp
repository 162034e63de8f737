#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace sos::linalg {

using cplx = std::complex<double>;

/// Max-abs of u†u − I.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Principal logarithm of a unitary via complex Schur; result is antihermitian.
Eigen::MatrixXcd log_unitary(const Eigen::MatrixXcd& u);

/// exp(κ) for antihermitian κ through the hermitian eigendecomposition of −iκ.
Eigen::MatrixXcd exp_antihermitian(const Eigen::MatrixXcd& kappa);

/// Reorders, rephases and (for real input) sign-flips the columns of a unitary so
/// that its diagonal is as close to the identity as a greedy assignment allows.
/// Each column keeps its span, so the set of rotated number operators
/// b†_k b_k is unchanged. Used to pick a well-conditioned logarithm branch.
Eigen::MatrixXcd align_columns(const Eigen::MatrixXcd& u, bool real_orthogonal);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& m);

/// Complex standard normal matrix with a deterministic generator state.
template <class Rng>
Eigen::MatrixXcd random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-ish random unitary (QR of a complex Gaussian matrix with phase fix).
template <class Rng>
Eigen::MatrixXcd random_unitary(Eigen::Index n, Rng& rng);

}  // namespace sos::linalg

#include <random>

namespace sos::linalg {

template <class Rng>
Eigen::MatrixXcd random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

template <class Rng>
Eigen::MatrixXcd random_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_gaussian(n, n, rng));
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

}  // namespace sos::linalg
