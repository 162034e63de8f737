#include "sos/rotation.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "sos/error.hpp"

namespace sos {

namespace {

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// Row-major position of (a, b), a < b, in the strict upper triangle.
std::size_t pair_index(std::size_t n, std::size_t a, std::size_t b) {
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

KappaParams KappaParams::zero(std::size_t n) {
  return KappaParams{n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n * n))};
}

Direction direction(std::size_t n, std::size_t index) {
  const std::size_t m = pair_count(n);
  if (index >= n * n) throw ShapeError("rotation direction index " + std::to_string(index) + " out of range");
  if (index >= 2 * m) {
    const int a = static_cast<int>(index - 2 * m);
    return {DirectionKind::Diag, a, a};
  }
  const DirectionKind kind = index < m ? DirectionKind::Real : DirectionKind::Imag;
  std::size_t k = index % m;
  std::size_t a = 0;
  while (k >= n - a - 1) {
    k -= n - a - 1;
    ++a;
  }
  return {kind, static_cast<int>(a), static_cast<int>(a + 1 + k)};
}

Eigen::MatrixXcd direction_matrix(std::size_t n, std::size_t index) {
  const Direction d = direction(n, index);
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(N, N);
  const cplx I(0.0, 1.0);
  switch (d.kind) {
    case DirectionKind::Real:
      E(d.a, d.b) = 1.0;
      E(d.b, d.a) = -1.0;
      break;
    case DirectionKind::Imag:
      E(d.a, d.b) = I;
      E(d.b, d.a) = I;
      break;
    case DirectionKind::Diag:
      E(d.a, d.a) = I;
      break;
  }
  return E;
}

Eigen::MatrixXcd kappa_matrix(const KappaParams& k) {
  const std::size_t n = k.n;
  const std::size_t m = pair_count(n);
  if (static_cast<std::size_t>(k.params.size()) != n * n) throw ShapeError("kappa parameter vector must have n^2 entries");
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t a = 0; a < n; ++a) {
    K(a, a) = cplx(0.0, k.params[2 * m + a]);
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = pair_index(n, a, b);
      const cplx v(k.params[i], k.params[m + i]);
      K(a, b) = v;
      K(b, a) = -std::conj(v);
    }
  }
  return K;
}

KappaParams kappa_from_matrix(const Eigen::MatrixXcd& kappa) {
  const auto n = static_cast<std::size_t>(kappa.rows());
  const std::size_t m = pair_count(n);
  const Eigen::MatrixXcd A = 0.5 * (kappa - kappa.adjoint());
  KappaParams k = KappaParams::zero(n);
  for (std::size_t a = 0; a < n; ++a) {
    k.params[2 * m + a] = A(a, a).imag();
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t i = pair_index(n, a, b);
      k.params[i] = A(a, b).real();
      k.params[m + i] = A(a, b).imag();
    }
  }
  return k;
}

RotationSpace RotationSpace::full(std::size_t n) {
  std::vector<std::size_t> idx(n * n);
  for (std::size_t i = 0; i < n * n; ++i) idx[i] = i;
  return RotationSpace(n, std::move(idx), {}, false);
}

RotationSpace RotationSpace::real(std::size_t n) {
  std::vector<std::size_t> idx(pair_count(n));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return RotationSpace(n, std::move(idx), {}, true);
}

RotationSpace RotationSpace::sectors(std::size_t n, Sectors sectors, bool real_only) {
  std::vector<int> owner(n, -1);
  for (std::size_t s = 0; s < sectors.size(); ++s)
    for (int p : sectors[s]) {
      if (p < 0 || static_cast<std::size_t>(p) >= n || owner[p] != -1)
        throw ShapeError("sector list is not a partition of the modes");
      owner[p] = static_cast<int>(s);
    }
  const std::size_t m = pair_count(n);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n * n; ++i) {
    if (real_only && i >= m) break;
    const Direction d = direction(n, i);
    if (owner[d.a] >= 0 && owner[d.a] == owner[d.b]) idx.push_back(i);
  }
  return RotationSpace(n, std::move(idx), std::move(sectors), real_only);
}

KappaParams RotationSpace::embed(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != indices_.size()) throw ShapeError("rotation-space vector has the wrong length");
  KappaParams k = KappaParams::zero(n_);
  for (std::size_t i = 0; i < indices_.size(); ++i) k.params[indices_[i]] = x[i];
  return k;
}

Eigen::VectorXd RotationSpace::restrict(const KappaParams& k) const {
  Eigen::VectorXd x(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) x[i] = k.params[indices_[i]];
  return x;
}

RotationEigen rotation_eigen(const KappaParams& k) {
  const Eigen::MatrixXcd K = kappa_matrix(k);
  const auto n = K.rows();
  RotationEigen out;
  if (n == 0) return out;
  const Eigen::MatrixXcd H = cplx(0.0, -1.0) * K;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()));
  out.h = es.eigenvalues();
  out.V = es.eigenvectors();
  Eigen::VectorXcd ph(n);
  for (Eigen::Index i = 0; i < n; ++i) ph[i] = std::polar(1.0, out.h[i]);
  out.U = out.V * ph.asDiagonal() * out.V.adjoint();
  return out;
}

Eigen::MatrixXcd wilcox_phi(const Eigen::VectorXd& h) {
  const Eigen::Index n = h.size();
  Eigen::MatrixXcd phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double half = 0.5 * (h[i] - h[j]);
      phi(i, j) = std::polar(sinc(half), half);
    }
  return phi;
}

RotationDerivative wilcox_derivative(const RotationEigen& eig, std::size_t direction_index) {
  const auto n = static_cast<std::size_t>(eig.V.rows());
  const Eigen::MatrixXcd E = direction_matrix(n, direction_index);
  const Eigen::MatrixXcd B = eig.V.adjoint() * E * eig.V;
  const Eigen::MatrixXcd C = B.cwiseProduct(wilcox_phi(eig.h));
  return RotationDerivative{eig.V * C * eig.V.adjoint()};
}

RotationDerivative wilcox_derivative(const KappaParams& k, std::size_t direction_index) {
  return wilcox_derivative(rotation_eigen(k), direction_index);
}

}  // namespace sos
