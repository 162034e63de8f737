#include "sos/givens.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "sos/error.hpp"
#include "sos/linalg.hpp"

namespace sos {

namespace {

using cplx = std::complex<double>;
constexpr double kSkipAngle = 1e-14;

double wrap(double phi) { return std::remainder(phi, 2.0 * std::numbers::pi); }

void apply_right(Eigen::MatrixXcd& u, const GivensRotation& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  const cplx e = std::polar(1.0, g.phi);
  const Eigen::VectorXcd a = u.col(g.p), b = u.col(g.q);
  u.col(g.p) = c * a + e * s * b;
  u.col(g.q) = -std::conj(e) * s * a + c * b;
}

void apply_left(Eigen::MatrixXcd& u, const GivensRotation& g) {
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  const cplx e = std::polar(1.0, g.phi);
  const Eigen::RowVectorXcd a = u.row(g.p), b = u.row(g.q);
  u.row(g.p) = c * a - std::conj(e) * s * b;
  u.row(g.q) = e * s * a + c * b;
}

// Rotation on columns (k, k+1) that zeroes u(r, k).
GivensRotation null_from_right(const Eigen::MatrixXcd& u, int r, int k) {
  const cplx a = u(r, k), b = u(r, k + 1);
  GivensRotation g{k, k + 1, 0.0, 0.0, 0};
  if (std::abs(a) == 0.0) return g;
  g.theta = std::atan2(std::abs(a), std::abs(b));
  g.phi = std::abs(b) > 0 ? std::arg(-a / b) : 0.0;
  return g;
}

// Rotation on rows (k, k+1) that zeroes u(k+1, col).
GivensRotation null_from_left(const Eigen::MatrixXcd& u, int k, int col) {
  const cplx a = u(k, col), b = u(k + 1, col);
  GivensRotation g{k, k + 1, 0.0, 0.0, 0};
  if (std::abs(b) == 0.0) return g;
  g.theta = std::atan2(std::abs(b), std::abs(a));
  g.phi = std::abs(a) > 0 ? std::arg(-b / a) : 0.0;
  return g;
}

GivensRotation inverse(GivensRotation g) {
  g.phi = wrap(g.phi + std::numbers::pi);
  return g;
}

}  // namespace

Eigen::MatrixXcd givens_matrix(std::size_t n, const GivensRotation& g) {
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(N, N);
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  const cplx e = std::polar(1.0, g.phi);
  m(g.p, g.p) = c;
  m(g.p, g.q) = -std::conj(e) * s;
  m(g.q, g.p) = e * s;
  m(g.q, g.q) = c;
  return m;
}

Eigen::MatrixXcd network_unitary(const GivensNetwork& net) {
  const auto N = static_cast<Eigen::Index>(net.n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(N, N);
  for (const auto& g : net.rotations) apply_left(m, g);
  Eigen::VectorXcd d(N);
  for (Eigen::Index i = 0; i < N; ++i) d[i] = std::polar(1.0, net.phases.size() ? net.phases[i] : 0.0);
  return d.asDiagonal() * m;
}

GivensNetwork givens_decompose(const Eigen::MatrixXcd& u_in, double tol) {
  if (u_in.rows() != u_in.cols()) throw ShapeError("givens_decompose needs a square matrix");
  if (linalg::unitarity_defect(u_in) > tol) throw Error("givens_decompose needs a unitary matrix");
  const int n = static_cast<int>(u_in.rows());
  Eigen::MatrixXcd u = u_in;
  std::vector<GivensRotation> right, left;
  for (int i = 1; i < n; ++i) {
    if (i % 2 == 1) {
      for (int j = 0; j < i; ++j) {
        const GivensRotation g = null_from_right(u, n - 1 - j, i - 1 - j);
        if (g.theta < kSkipAngle) continue;
        apply_right(u, g);
        right.push_back(g);
      }
    } else {
      for (int j = 1; j <= i; ++j) {
        const GivensRotation g = null_from_left(u, n + j - i - 2, j - 1);
        if (g.theta < kSkipAngle) continue;
        apply_left(u, g);
        left.push_back(g);
      }
    }
  }
  // L_m ⋯ L_1 u R_1 ⋯ R_p = D, so u = L_1⁻¹ ⋯ L_m⁻¹ D R_p⁻¹ ⋯ R_1⁻¹.
  Eigen::VectorXd arg(n);
  for (int i = 0; i < n; ++i) arg[i] = std::arg(u(i, i));

  GivensNetwork net;
  net.n = static_cast<std::size_t>(n);
  net.phases = arg;
  for (const auto& g : right) net.rotations.push_back(inverse(g));
  // G D = D G(θ, φ + arg d_p − arg d_q) moves D to the far left; L_m⁻¹ acts first.
  for (auto it = left.rbegin(); it != left.rend(); ++it) {
    GivensRotation g = inverse(*it);
    g.phi = wrap(g.phi + arg[g.p] - arg[g.q]);
    net.rotations.push_back(g);
  }

  std::vector<int> busy(static_cast<std::size_t>(n), 0);
  for (auto& g : net.rotations) {
    g.round = std::max(busy[g.p], busy[g.q]);
    busy[g.p] = busy[g.q] = g.round + 1;
    net.rounds = std::max(net.rounds, g.round + 1);
  }
  return net;
}

}  // namespace sos
