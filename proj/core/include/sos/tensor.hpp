#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sos {

using cplx = std::complex<double>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Index convention of a rank-4 coefficient tensor.
///
///  - PqrsLadder:       a[p,q,r,s] multiplies a†_p a†_q a_s a_r
///  - ChargeCharge:     t[i,j,k,l] multiplies a†_i a_j a†_k a_l
///  - HermitianChemist: v[i,j,k,l] = (ij|kl), real, 8-fold symmetric; as an
///                      operator it is read like ChargeCharge.
enum class Convention { PqrsLadder, ChargeCharge, HermitianChemist };

std::string_view to_string(Convention c);
Convention convention_from_string(std::string_view s);

/// Dense rank-4 complex tensor over n modes, row-major (p,q,r,s).
class CoeffTensor4 {
 public:
  CoeffTensor4() = default;
  CoeffTensor4(std::size_t n, Convention convention);
  CoeffTensor4(std::size_t n, Convention convention, Eigen::VectorXcd data);

  std::size_t modes() const { return n_; }
  Convention convention() const { return convention_; }
  const Eigen::VectorXcd& data() const { return data_; }
  Eigen::VectorXcd& data() { return data_; }

  std::size_t index(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return ((p * n_ + q) * n_ + r) * n_ + s;
  }
  const cplx& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[static_cast<Eigen::Index>(index(p, q, r, s))];
  }
  cplx& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[static_cast<Eigen::Index>(index(p, q, r, s))];
  }

  double norm() const { return data_.norm(); }
  CoeffTensor4 with_convention(Convention c) const;

  /// Row-major n²×n² view: row = p*n+q, column = r*n+s.
  Eigen::Map<const RowMatrixXcd> as_matrix() const;
  Eigen::Map<RowMatrixXcd> as_matrix();

 private:
  std::size_t n_ = 0;
  Convention convention_ = Convention::ChargeCharge;
  Eigen::VectorXcd data_;
};

CoeffTensor4 operator+(const CoeffTensor4& a, const CoeffTensor4& b);
CoeffTensor4 operator-(const CoeffTensor4& a, const CoeffTensor4& b);
CoeffTensor4 operator*(cplx s, const CoeffTensor4& a);

/// n²×n² geminal matrix of a charge-charge tensor: mat[(p,s),(q,r)] = t[p,s,q,r].
struct SuperMatrix {
  std::size_t n = 0;
  Eigen::MatrixXcd mat;
};

/// S_{pr}: coefficients of a†_p a_r in the one-body remainder of reordering.
struct OneBodyCorrection {
  Eigen::MatrixXcd S;
  std::size_t modes() const { return static_cast<std::size_t>(S.rows()); }
};

enum class FactorOrigin { Svd, Takagi, Uc };
std::string_view to_string(FactorOrigin o);
FactorOrigin origin_from_string(std::string_view s);

/// One term Σ_kl J_kl ñ_k ñ_l with ñ_k = b†_k b_k and b†_k = Σ_p mu[p,k] a†_p.
///
/// As a charge-charge tensor the term is
///   t[p,s,q,r] = Σ_kl mu[p,k] conj(mu[s,k]) J[k,l] mu[q,l] conj(mu[r,l]).
struct SOSFactor {
  Eigen::MatrixXcd mu;
  Eigen::MatrixXcd J;
  FactorOrigin origin = FactorOrigin::Uc;
  std::string sector;  // "alpha" | "beta" | "cross" | "" when not spin-adapted
  int simultaneous_group = -1;

  std::size_t modes() const { return static_cast<std::size_t>(mu.rows()); }
};

/// Coefficients z of Z = Σ z_pq a†_p a_q.
struct NormalOperatorCoeffs {
  Eigen::MatrixXcd z;
};

/// Which structural symmetries a tensor satisfies, with the measured residuals.
struct SymmetryReport {
  double antisymmetry_residual = 0.0;   // ladder convention only
  double supermatrix_asymmetry = 0.0;   // ‖mat − matᵀ‖ / ‖mat‖
  double hermitian_residual = 0.0;      // ‖T − T^adj‖ / ‖T‖
  double antihermitian_residual = 0.0;  // ‖T + T^adj‖ / ‖T‖
  bool antisymmetric = false;
  bool complex_symmetric = false;
  bool hermitian = false;
  bool antihermitian = false;
};

SymmetryReport verify_symmetries(const CoeffTensor4& t, double tol = 1e-12);

// --- geminal reshaping -----------------------------------------------------

SuperMatrix reshape_to_supermatrix(const CoeffTensor4& t);
CoeffTensor4 from_supermatrix(const SuperMatrix& m);

// --- reordering ----------------------------------------------------------------

/// Rewrites Σ a[p,q,r,s] a†_p a†_q a_s a_r as T_cc − Σ S_pr a†_p a_r with
/// T_cc[p,r,q,s] = a[p,q,r,s] and S_pr = Σ_q a[p,q,q,r]. Valid for any a.
struct ChargeChargeForm {
  CoeffTensor4 tensor;
  OneBodyCorrection correction;
};
ChargeChargeForm normal_order_to_charge_charge(const CoeffTensor4& a);

/// Inverse reordering: K_cc = A_ladder + Σ S_pr a†_p a_r with A[x,y,u,w] = K[x,u,y,w]
/// and S_pr = Σ_u K[p,u,u,r]. Returned correction has the opposite meaning to the
/// one above (it is added, not subtracted).
struct LadderForm {
  CoeffTensor4 tensor;
  OneBodyCorrection one_body;
};
LadderForm charge_charge_to_ladder(const CoeffTensor4& t);

/// Antisymmetrizer (a − a_qp − a_sr + a_qpsr)/4 on the ladder convention.
CoeffTensor4 antisymmetrize(const CoeffTensor4& a);

/// Coefficient tensor of the adjoint operator, same convention.
CoeffTensor4 adjoint(const CoeffTensor4& t);

/// Symmetrizes the geminal matrix of a charge-charge tensor, returning the
/// one-body term that keeps the operator unchanged (operator = sym − S).
ChargeChargeForm symmetrize_supermatrix(const CoeffTensor4& t);

// --- factors -------------------------------------------------------------------

/// Charge-charge tensor represented by one factor.
CoeffTensor4 factor_tensor(const SOSFactor& f);
/// Σ of factor tensors; an empty list needs the mode count.
CoeffTensor4 reconstruct(const std::vector<SOSFactor>& factors, std::size_t n);

// --- diagnostics -----------------------------------------------------------------

struct ResidualMetrics {
  double l2 = 0.0;
  double mad = 0.0;
  int takagi_rank = 0;
};

inline constexpr double kRankThreshold = 1e-10;

/// Frobenius norm, max-abs deviation, and numerical rank of the residual
/// supermatrix. The rank cutoff is kRankThreshold times the largest singular
/// value of `reference` (or of the residual when the reference vanishes).
ResidualMetrics residual_metrics(const CoeffTensor4& reference, const CoeffTensor4& approx);

/// Number of singular values of the geminal matrix above rel·σ_ref.
int supermatrix_rank(const CoeffTensor4& t, double absolute_cutoff);

/// (1/4) Σ v[i,j,a,b] t2[i,j,a,b] (real part).
double cc_doubles_energy(const CoeffTensor4& t2, const CoeffTensor4& v);

/// Antisymmetric doubles amplitudes t2[i,j,a,b] of the excitation part of a
/// charge-charge generator: T2 = (1/4) Σ t2[i,j,a,b] a†_a a†_b a_j a_i.
/// Entries outside the occupied/virtual blocks are kept; the integrals
/// tensor passed to cc_doubles_energy selects the block.
CoeffTensor4 doubles_amplitudes(const CoeffTensor4& generator);

}  // namespace sos
