#include "sos/decompositions.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sos/error.hpp"

namespace sos {

namespace {

constexpr double kDropRelative = 1e-12;
constexpr double kClusterGap = 1e-4;
constexpr double kMixing = 0.5772156649015329;
constexpr double kNormalResidual = 1e-8;

// Eigenbasis of a normal matrix with no sector structure.
NormalEigen diagonalize_block(const Eigen::MatrixXcd& z) {
  const Eigen::Index n = z.rows();
  NormalEigen out{Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n)};
  const double scale = z.norm();
  if (n == 0 || scale == 0.0) return out;

  const Eigen::MatrixXcd H = 0.5 * (z + z.adjoint());
  const Eigen::MatrixXcd mK = cplx(0.0, -0.5) * (z - z.adjoint());  // −iK, hermitian
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const Eigen::VectorXd h = es.eigenvalues();
  const Eigen::MatrixXcd V = es.eigenvectors();

  Eigen::MatrixXcd mu(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && h[end] - h[end - 1] <= kClusterGap * scale) ++end;
    const Eigen::Index w = end - start;
    const Eigen::MatrixXcd Vc = V.middleCols(start, w);
    if (w == 1) {
      mu.col(start) = Vc;
    } else {
      Eigen::MatrixXcd M = Vc.adjoint() * (H + kMixing * mK) * Vc;
      M = 0.5 * (M + M.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(M);
      mu.middleCols(start, w) = Vc * inner.eigenvectors();
    }
    start = end;
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    mu.col(k).cwiseAbs().maxCoeff(&arg);
    const cplx c = mu(arg, k);
    mu.col(k) *= std::conj(c) / std::abs(c);
  }

  const Eigen::MatrixXcd D = mu.adjoint() * z * mu;
  out.lambda = D.diagonal();
  Eigen::MatrixXcd off = D;
  off.diagonal().setZero();
  const double resid = off.norm();
  if (resid > kNormalResidual * scale) {
    std::ostringstream os;
    os << "normal diagonalization failed: off-diagonal residual " << resid / scale
       << " relative (is the matrix normal? |[z,z^dag]| = " << (z * z.adjoint() - z.adjoint() * z).norm() << ")";
    throw DecompositionError(os.str());
  }
  out.mu = mu;
  return out;
}

Eigen::MatrixXcd reshape_vector(const Eigen::VectorXcd& v, Eigen::Index n) {
  Eigen::MatrixXcd y(n, n);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index s = 0; s < n; ++s) y(p, s) = v[p * n + s];
  return y;
}

void require_symmetric_supermatrix(const CoeffTensor4& t) {
  const auto m = t.as_matrix();
  const double norm = m.norm();
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-10 * norm) {
    std::ostringstream os;
    os << "geminal matrix is not complex symmetric (relative asymmetry " << asym / norm
       << "); symmetrize it first and carry the one-body correction";
    throw SymmetryError(os.str());
  }
}

void append_normal_factor(std::vector<SOSFactor>& out, const Eigen::MatrixXcd& z, cplx weight,
                          FactorOrigin origin, const Sectors& sectors, std::size_t index, double scale) {
  if (z.norm() <= 1e-14 * scale) return;
  try {
    out.push_back(factor_from_normal(z, weight, origin, sectors, scale));
  } catch (const DecompositionError& e) {
    throw DecompositionError("factor " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

NormalEigen diagonalize_normal(const Eigen::MatrixXcd& z, const Sectors& sectors, double scale) {
  if (z.rows() != z.cols()) throw ShapeError("diagonalize_normal needs a square matrix");
  if (sectors.empty()) return diagonalize_block(z);
  const Eigen::Index n = z.rows();
  NormalEigen out{Eigen::MatrixXcd::Identity(n, n), Eigen::VectorXcd::Zero(n)};
  Eigen::MatrixXcd covered = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& sector : sectors) {
    const auto w = static_cast<Eigen::Index>(sector.size());
    Eigen::MatrixXcd block(w, w);
    for (Eigen::Index i = 0; i < w; ++i)
      for (Eigen::Index j = 0; j < w; ++j) {
        block(i, j) = z(sector[i], sector[j]);
        covered(sector[i], sector[j]) = z(sector[i], sector[j]);
      }
    const NormalEigen be = diagonalize_block(block);
    for (Eigen::Index i = 0; i < w; ++i) {
      out.lambda[sector[i]] = be.lambda[i];
      out.mu.col(sector[i]).setZero();
    }
    for (Eigen::Index i = 0; i < w; ++i)
      for (Eigen::Index j = 0; j < w; ++j) out.mu(sector[i], sector[j]) = be.mu(i, j);
  }
  const double leak = (z - covered).norm();
  if (leak > 1e-10 * std::max({z.norm(), scale, 1e-300})) {
    std::ostringstream os;
    os << "normal matrix couples sectors (off-sector weight " << leak << ")";
    throw SymmetryError(os.str());
  }
  return out;
}

OperatorParity detect_parity(const CoeffTensor4& t, double tol) {
  const double norm = t.norm();
  if (norm == 0.0) return OperatorParity::Antihermitian;
  const CoeffTensor4 adj = adjoint(t);
  if ((t.data() + adj.data()).norm() <= tol * norm) return OperatorParity::Antihermitian;
  if ((t.data() - adj.data()).norm() <= tol * norm) return OperatorParity::Hermitian;
  return OperatorParity::General;
}

std::pair<CoeffTensor4, CoeffTensor4> parity_parts(const CoeffTensor4& t) {
  const CoeffTensor4 adj = adjoint(t);
  return {CoeffTensor4(t.modes(), t.convention(), 0.5 * (t.data() - adj.data())),
          CoeffTensor4(t.modes(), t.convention(), 0.5 * (t.data() + adj.data()))};
}

TakagiSosIntermediates takagi_intermediates(const CoeffTensor4& t, OperatorParity parity) {
  if (parity == OperatorParity::General)
    throw SymmetryError("takagi_intermediates needs a hermitian or antihermitian tensor");
  const SuperMatrix sm = reshape_to_supermatrix(t);
  require_symmetric_supermatrix(t);
  const auto n = static_cast<Eigen::Index>(t.modes());
  const TakagiResult tk = takagi(sm.mat);
  TakagiSosIntermediates out;
  const double smax = tk.sigma.size() ? tk.sigma[0] : 0.0;
  std::vector<double> kept;
  const cplx phase = parity == OperatorParity::Antihermitian ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  for (Eigen::Index l = 0; l < tk.sigma.size(); ++l) {
    if (smax == 0.0 || tk.sigma[l] < kDropRelative * smax) break;
    const Eigen::MatrixXcd y = std::sqrt(tk.sigma[l]) * reshape_vector(tk.U.col(l), n);
    out.y.push_back(y);
    out.y_plus.push_back(y + phase * y.adjoint());
    out.y_minus.push_back(y - phase * y.adjoint());
    kept.push_back(tk.sigma[l]);
  }
  out.sigma = Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

SvdSosIntermediates svd_intermediates(const CoeffTensor4& t) {
  const SuperMatrix sm = reshape_to_supermatrix(t);
  require_symmetric_supermatrix(t);
  const auto n = static_cast<Eigen::Index>(t.modes());
  SvdSosIntermediates out;
  std::vector<double> kept;
  if (sm.mat.size() > 0 && sm.mat.norm() > 0) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(sm.mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    for (Eigen::Index l = 0; l < sv.size(); ++l) {
      if (sv[l] < kDropRelative * sv[0]) break;
      const double r = std::sqrt(sv[l]);
      out.u.push_back(r * reshape_vector(svd.matrixU().col(l), n));
      out.v.push_back(r * reshape_vector(svd.matrixV().col(l).conjugate(), n));
      kept.push_back(sv[l]);
    }
  }
  out.sigma = Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size()));
  return out;
}

std::vector<SOSFactor> takagi_sos(const CoeffTensor4& t, const Sectors& sectors, int max_columns) {
  const OperatorParity parity = detect_parity(t);
  if (parity == OperatorParity::General) {
    const auto [anti, herm] = parity_parts(t);
    auto out = takagi_sos(anti, sectors, max_columns);
    auto rest = takagi_sos(herm, sectors, max_columns);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  const TakagiSosIntermediates in = takagi_intermediates(t, parity);
  std::vector<SOSFactor> out;
  const std::size_t L = max_columns < 0 ? in.y.size() : std::min<std::size_t>(in.y.size(), max_columns);
  for (std::size_t l = 0; l < L; ++l) {
    const double scale = in.y[l].norm();
    append_normal_factor(out, in.y_plus[l], 0.25, FactorOrigin::Takagi, sectors, l, scale);
    append_normal_factor(out, in.y_minus[l], 0.25, FactorOrigin::Takagi, sectors, l, scale);
  }
  return out;
}

std::vector<SOSFactor> svd_sos(const CoeffTensor4& t, const Sectors& sectors, int max_values) {
  const OperatorParity parity = detect_parity(t);
  if (parity == OperatorParity::General) {
    const auto [anti, herm] = parity_parts(t);
    auto out = svd_sos(anti, sectors, max_values);
    auto rest = svd_sos(herm, sectors, max_values);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  const SvdSosIntermediates in = svd_intermediates(t);
  const cplx phase = parity == OperatorParity::Antihermitian ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  std::vector<SOSFactor> out;
  const std::size_t L = max_values < 0 ? in.u.size() : std::min<std::size_t>(in.u.size(), max_values);
  for (std::size_t l = 0; l < L; ++l) {
    const Eigen::MatrixXcd S = in.u[l] + in.v[l];
    const Eigen::MatrixXcd D = in.u[l] - in.v[l];
    const double scale = in.u[l].norm() + in.v[l].norm();
    append_normal_factor(out, S + phase * S.adjoint(), 1.0 / 16, FactorOrigin::Svd, sectors, l, scale);
    append_normal_factor(out, S - phase * S.adjoint(), 1.0 / 16, FactorOrigin::Svd, sectors, l, scale);
    append_normal_factor(out, D + phase * D.adjoint(), -1.0 / 16, FactorOrigin::Svd, sectors, l, scale);
    append_normal_factor(out, D - phase * D.adjoint(), -1.0 / 16, FactorOrigin::Svd, sectors, l, scale);
  }
  return out;
}

SOSFactor factor_from_normal(const Eigen::MatrixXcd& z, cplx weight, FactorOrigin origin,
                             const Sectors& sectors, double scale) {
  const NormalEigen ne = diagonalize_normal(z, sectors, scale);
  SOSFactor f;
  f.mu = ne.mu;
  f.J = weight * ne.lambda * ne.lambda.transpose();
  f.origin = origin;
  return f;
}

double rank_one_defect(const Eigen::MatrixXcd& J) {
  if (J.size() == 0) return 0.0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(J).singularValues();
  if (sv[0] == 0.0 || sv.size() < 2) return 0.0;
  return sv[1] / sv[0];
}

NormalOperatorCoeffs factor_to_normal_operator(const SOSFactor& f) {
  const double defect = rank_one_defect(f.J);
  if (defect >= 1e-10) {
    std::ostringstream os;
    os << "factor coupling matrix has rank > 1 (sigma2/sigma1 = " << defect
       << "); it has no single normal operator Z. Use the uc-factor path, which realizes exp(sum J n n) directly";
    throw DecompositionError(os.str());
  }
  const TakagiResult tk = takagi(f.J);
  const Eigen::VectorXcd lambda = std::sqrt(tk.sigma.size() ? tk.sigma[0] : 0.0) * tk.U.col(0);
  return NormalOperatorCoeffs{f.mu * lambda.asDiagonal() * f.mu.adjoint()};
}

}  // namespace sos
