#include "sos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sos/error.hpp"

namespace sos {

std::string_view to_string(Convention c) {
  switch (c) {
    case Convention::PqrsLadder: return "pqrs-ladder";
    case Convention::ChargeCharge: return "charge-charge";
    case Convention::HermitianChemist: return "hermitian-chemist";
  }
  return "unknown";
}

Convention convention_from_string(std::string_view s) {
  if (s == "pqrs-ladder") return Convention::PqrsLadder;
  if (s == "charge-charge") return Convention::ChargeCharge;
  if (s == "hermitian-chemist") return Convention::HermitianChemist;
  throw ConventionError("unknown tensor convention '" + std::string(s) + "'");
}

std::string_view to_string(FactorOrigin o) {
  switch (o) {
    case FactorOrigin::Svd: return "svd";
    case FactorOrigin::Takagi: return "takagi";
    case FactorOrigin::Uc: return "uc";
  }
  return "unknown";
}

FactorOrigin origin_from_string(std::string_view s) {
  if (s == "svd") return FactorOrigin::Svd;
  if (s == "takagi") return FactorOrigin::Takagi;
  if (s == "uc") return FactorOrigin::Uc;
  throw FormatError("unknown factor tag '" + std::string(s) + "'");
}

CoeffTensor4::CoeffTensor4(std::size_t n, Convention convention)
    : n_(n), convention_(convention),
      data_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n * n * n * n))) {}

CoeffTensor4::CoeffTensor4(std::size_t n, Convention convention, Eigen::VectorXcd data)
    : n_(n), convention_(convention), data_(std::move(data)) {
  if (static_cast<std::size_t>(data_.size()) != n * n * n * n)
    throw ShapeError("tensor data has " + std::to_string(data_.size()) + " entries, expected n^4 = " +
                     std::to_string(n * n * n * n));
}

CoeffTensor4 CoeffTensor4::with_convention(Convention c) const {
  CoeffTensor4 out = *this;
  out.convention_ = c;
  return out;
}

Eigen::Map<const RowMatrixXcd> CoeffTensor4::as_matrix() const {
  const auto m = static_cast<Eigen::Index>(n_ * n_);
  return Eigen::Map<const RowMatrixXcd>(data_.data(), m, m);
}

Eigen::Map<RowMatrixXcd> CoeffTensor4::as_matrix() {
  const auto m = static_cast<Eigen::Index>(n_ * n_);
  return Eigen::Map<RowMatrixXcd>(data_.data(), m, m);
}

namespace {

void require_same_shape(const CoeffTensor4& a, const CoeffTensor4& b, const char* what) {
  if (a.modes() != b.modes())
    throw ShapeError(std::string(what) + ": mode counts differ (" + std::to_string(a.modes()) + " vs " +
                     std::to_string(b.modes()) + ")");
}

void require_same_convention(const CoeffTensor4& a, const CoeffTensor4& b, const char* what) {
  if (a.convention() != b.convention())
    throw ConventionError(std::string(what) + ": conventions differ (" + std::string(to_string(a.convention())) +
                          " vs " + std::string(to_string(b.convention())) + ")");
}

bool reads_as_charge_charge(Convention c) {
  return c == Convention::ChargeCharge || c == Convention::HermitianChemist;
}

double relative(double num, double den) { return den > 0 ? num / den : num; }

}  // namespace

CoeffTensor4 operator+(const CoeffTensor4& a, const CoeffTensor4& b) {
  require_same_shape(a, b, "tensor sum");
  require_same_convention(a, b, "tensor sum");
  return CoeffTensor4(a.modes(), a.convention(), a.data() + b.data());
}

CoeffTensor4 operator-(const CoeffTensor4& a, const CoeffTensor4& b) {
  require_same_shape(a, b, "tensor difference");
  require_same_convention(a, b, "tensor difference");
  return CoeffTensor4(a.modes(), a.convention(), a.data() - b.data());
}

CoeffTensor4 operator*(cplx s, const CoeffTensor4& a) {
  return CoeffTensor4(a.modes(), a.convention(), s * a.data());
}

SuperMatrix reshape_to_supermatrix(const CoeffTensor4& t) {
  if (!reads_as_charge_charge(t.convention()))
    throw ConventionError("reshape_to_supermatrix needs a charge-charge tensor, got " +
                          std::string(to_string(t.convention())));
  return SuperMatrix{t.modes(), Eigen::MatrixXcd(t.as_matrix())};
}

CoeffTensor4 from_supermatrix(const SuperMatrix& m) {
  const auto nn = static_cast<Eigen::Index>(m.n * m.n);
  if (m.mat.rows() != nn || m.mat.cols() != nn)
    throw ShapeError("supermatrix is " + std::to_string(m.mat.rows()) + "x" + std::to_string(m.mat.cols()) +
                     ", expected n^2 x n^2 with n = " + std::to_string(m.n));
  CoeffTensor4 t(m.n, Convention::ChargeCharge);
  t.as_matrix() = m.mat;
  return t;
}

ChargeChargeForm normal_order_to_charge_charge(const CoeffTensor4& a) {
  if (a.convention() != Convention::PqrsLadder)
    throw ConventionError("normal_order_to_charge_charge needs a pqrs-ladder tensor, got " +
                          std::string(to_string(a.convention())));
  const std::size_t n = a.modes();
  CoeffTensor4 t(n, Convention::ChargeCharge);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const cplx v = a(p, q, r, s);
          t(p, r, q, s) = v;
          if (q == r) S(p, s) += v;
        }
  return {std::move(t), OneBodyCorrection{std::move(S)}};
}

LadderForm charge_charge_to_ladder(const CoeffTensor4& t) {
  if (!reads_as_charge_charge(t.convention()))
    throw ConventionError("charge_charge_to_ladder needs a charge-charge tensor, got " +
                          std::string(to_string(t.convention())));
  const std::size_t n = t.modes();
  CoeffTensor4 a(n, Convention::PqrsLadder);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t w = 0; w < n; ++w) {
          const cplx v = t(x, u, y, w);
          a(x, y, u, w) = v;
          if (u == y) S(x, w) += v;
        }
  return {std::move(a), OneBodyCorrection{std::move(S)}};
}

CoeffTensor4 antisymmetrize(const CoeffTensor4& a) {
  if (a.convention() != Convention::PqrsLadder)
    throw ConventionError("antisymmetrize needs a pqrs-ladder tensor");
  const std::size_t n = a.modes();
  CoeffTensor4 out(n, Convention::PqrsLadder);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out(p, q, r, s) = 0.25 * (a(p, q, r, s) - a(q, p, r, s) - a(p, q, s, r) + a(q, p, s, r));
  return out;
}

CoeffTensor4 adjoint(const CoeffTensor4& t) {
  const std::size_t n = t.modes();
  CoeffTensor4 out(n, t.convention());
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (t.convention() == Convention::PqrsLadder)
            out(p, q, r, s) = std::conj(t(r, s, p, q));
          else
            out(p, q, r, s) = std::conj(t(s, r, q, p));
        }
  return out;
}

ChargeChargeForm symmetrize_supermatrix(const CoeffTensor4& t) {
  if (!reads_as_charge_charge(t.convention()))
    throw ConventionError("symmetrize_supermatrix needs a charge-charge tensor");
  const std::size_t n = t.modes();
  CoeffTensor4 sym(n, Convention::ChargeCharge);
  sym.as_matrix() = 0.5 * (t.as_matrix() + t.as_matrix().transpose());
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += t(i, q, p, i) - t(p, i, i, q);
      S(p, q) = 0.5 * acc;
    }
  return {std::move(sym), OneBodyCorrection{std::move(S)}};
}

SymmetryReport verify_symmetries(const CoeffTensor4& t, double tol) {
  SymmetryReport r;
  const double norm = t.norm();
  if (t.convention() == Convention::PqrsLadder) {
    r.antisymmetry_residual = relative((t.data() - antisymmetrize(t).data()).norm(), norm);
    r.antisymmetric = r.antisymmetry_residual < tol;
  } else {
    const auto m = t.as_matrix();
    r.supermatrix_asymmetry = relative((m - m.transpose()).norm(), norm);
    r.complex_symmetric = r.supermatrix_asymmetry < tol;
  }
  const CoeffTensor4 adj = adjoint(t);
  r.hermitian_residual = relative((t.data() - adj.data()).norm(), norm);
  r.antihermitian_residual = relative((t.data() + adj.data()).norm(), norm);
  r.hermitian = r.hermitian_residual < tol;
  r.antihermitian = r.antihermitian_residual < tol;
  return r;
}

CoeffTensor4 factor_tensor(const SOSFactor& f) {
  const std::size_t n = f.modes();
  const auto nn = static_cast<Eigen::Index>(n * n);
  const auto ni = static_cast<Eigen::Index>(n);
  if (f.mu.cols() != ni || f.J.rows() != ni || f.J.cols() != ni)
    throw ShapeError("factor mu/J dimensions are inconsistent");
  Eigen::MatrixXcd N(nn, ni);
  for (Eigen::Index p = 0; p < ni; ++p)
    for (Eigen::Index s = 0; s < ni; ++s)
      for (Eigen::Index k = 0; k < ni; ++k) N(p * ni + s, k) = f.mu(p, k) * std::conj(f.mu(s, k));
  CoeffTensor4 t(n, Convention::ChargeCharge);
  t.as_matrix() = N * f.J * N.transpose();
  return t;
}

CoeffTensor4 reconstruct(const std::vector<SOSFactor>& factors, std::size_t n) {
  CoeffTensor4 t(n, Convention::ChargeCharge);
  for (const auto& f : factors) {
    if (f.modes() != n) throw ShapeError("factor mode count differs from reconstruction size");
    t.data() += factor_tensor(f).data();
  }
  return t;
}

int supermatrix_rank(const CoeffTensor4& t, double absolute_cutoff) {
  if (t.modes() == 0) return 0;
  const Eigen::MatrixXcd m = t.as_matrix();
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > absolute_cutoff) ++rank;
  return rank;
}

ResidualMetrics residual_metrics(const CoeffTensor4& reference, const CoeffTensor4& approx) {
  require_same_shape(reference, approx, "residual_metrics");
  ResidualMetrics m;
  const Eigen::VectorXcd diff = reference.data() - approx.data();
  m.l2 = diff.norm();
  m.mad = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  if (m.l2 == 0.0) return m;
  const CoeffTensor4 residual(reference.modes(), Convention::ChargeCharge, diff);
  double scale = 0.0;
  if (reference.norm() > 0)
    scale = Eigen::BDCSVD<Eigen::MatrixXcd>(Eigen::MatrixXcd(reference.as_matrix())).singularValues()[0];
  if (scale == 0.0)
    scale = Eigen::BDCSVD<Eigen::MatrixXcd>(Eigen::MatrixXcd(residual.as_matrix())).singularValues()[0];
  m.takagi_rank = supermatrix_rank(residual, kRankThreshold * scale);
  return m;
}

double cc_doubles_energy(const CoeffTensor4& t2, const CoeffTensor4& v) {
  require_same_shape(t2, v, "cc_doubles_energy");
  return 0.25 * v.data().cwiseProduct(t2.data()).sum().real();
}

CoeffTensor4 doubles_amplitudes(const CoeffTensor4& generator) {
  const LadderForm ladder = charge_charge_to_ladder(generator);
  const CoeffTensor4& A = ladder.tensor;
  const std::size_t n = generator.modes();
  CoeffTensor4 t2(n, Convention::PqrsLadder);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          t2(i, j, a, b) = A(a, b, i, j) - A(b, a, i, j) - A(a, b, j, i) + A(b, a, j, i);
  return t2;
}

}  // namespace sos
