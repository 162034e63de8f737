#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <vector>

#include "sos/decompositions.hpp"
#include "sos/error.hpp"

namespace sos {

namespace {

// Partner of an embedded vector: (a, b) → (b, −a) maps the +σ eigenspace to −σ.
Eigen::VectorXd partner(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size() / 2;
  Eigen::VectorXd w(v.size());
  w.head(m) = v.tail(m);
  w.tail(m) = -v.head(m);
  return w;
}

}  // namespace

TakagiResult takagi(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ShapeError("takagi needs a square matrix");
  const Eigen::Index N = m.rows();
  const double norm = m.norm();
  const double asym = (m - m.transpose()).norm();
  if (asym >= 1e-10 * norm && asym > 0) {
    std::ostringstream os;
    os << "takagi input is not complex symmetric: |m - m^T| = " << asym << " (|m| = " << norm << ")";
    throw SymmetryError(os.str());
  }
  TakagiResult out;
  out.U = Eigen::MatrixXcd::Identity(N, N);
  out.sigma = Eigen::VectorXd::Zero(N);
  if (N == 0 || norm == 0.0) return out;

  const Eigen::MatrixXd X = m.real();
  const Eigen::MatrixXd Y = m.imag();
  Eigen::MatrixXd H(2 * N, 2 * N);
  H << X, Y, Y, -X;
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw DecompositionError("takagi: symmetric eigensolver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  const double top = ev.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * top;

  // Positive spectrum, largest first.
  std::vector<Eigen::VectorXd> chosen;
  std::vector<double> sig;
  for (Eigen::Index i = 2 * N - 1; i >= 0 && ev[i] > tol && static_cast<Eigen::Index>(chosen.size()) < N; --i) {
    chosen.push_back(vecs.col(i));
    sig.push_back(ev[i]);
  }
  const Eigen::Index npos = static_cast<Eigen::Index>(chosen.size());

  // Null cluster: the middle 2(N − npos) eigenvectors.
  std::vector<Eigen::VectorXd> pool;
  for (Eigen::Index i = npos; i < 2 * N - npos; ++i) pool.push_back(vecs.col(i));

  std::vector<Eigen::VectorXd> basis;  // chosen vectors and their partners
  for (const auto& v : chosen) {
    basis.push_back(v);
    basis.push_back(partner(v));
  }
  auto project_out = [&basis](Eigen::VectorXd v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    return v;
  };
  while (static_cast<Eigen::Index>(chosen.size()) < N) {
    double best = -1.0;
    Eigen::VectorXd pick;
    for (auto& c : pool) {
      c = project_out(c);
      const double r = c.norm();
      if (r > best) {
        best = r;
        pick = c;
      }
    }
    if (best < 1e-6) throw DecompositionError("takagi: null space selection lost rank");
    pick /= best;
    chosen.push_back(pick);
    sig.push_back(0.0);
    basis.push_back(pick);
    basis.push_back(partner(pick));
  }

  for (Eigen::Index k = 0; k < N; ++k) {
    const Eigen::VectorXd& v = chosen[static_cast<std::size_t>(k)];
    out.U.col(k) = v.head(N).cast<cplx>() + cplx(0.0, 1.0) * v.tail(N).cast<cplx>();
    out.sigma[k] = sig[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace sos
