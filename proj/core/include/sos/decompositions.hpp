#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sos/tensor.hpp"

namespace sos {

/// m = U diag(sigma) Uᵀ with U unitary and sigma sorted descending.
struct TakagiResult {
  Eigen::MatrixXcd U;
  Eigen::VectorXd sigma;
};

/// Takagi (Autonne) factorization of a complex symmetric matrix.
///
/// Works on the real symmetric embedding [[Re m, Im m], [Im m, −Re m]] whose
/// spectrum is ±sigma. Eigenvectors (x, y) of +sigma give Takagi vectors x + iy;
/// inside the null space a half-dimensional set closed under (x,y) → (y,−x) is
/// picked by pivoted Gram–Schmidt against the already chosen vectors and their
/// partners. Throws SymmetryError when ‖m − mᵀ‖ ≥ 1e-10‖m‖.
TakagiResult takagi(const Eigen::MatrixXcd& m);

/// Mode partition used to keep normal-operator eigenbases sector local.
/// An empty partition means a single sector containing every mode.
using Sectors = std::vector<std::vector<int>>;

/// Unitary eigenbasis of a normal matrix: z = mu diag(lambda) mu†.
struct NormalEigen {
  Eigen::MatrixXcd mu;
  Eigen::VectorXcd lambda;
};

/// Diagonalizes a normal matrix with hermitian solvers only: eigenvectors of
/// H = (z+z†)/2, then within near-degenerate clusters of H a generic hermitian
/// combination of H and −iK with K = (z−z†)/2. With `sectors`, z must be block
/// diagonal up to 1e-10·max(‖z‖, scale) and the result is assembled block by block.
NormalEigen diagonalize_normal(const Eigen::MatrixXcd& z, const Sectors& sectors = {}, double scale = 0.0);

/// Per-column intermediates of the Takagi sum of squares.
struct TakagiSosIntermediates {
  std::vector<Eigen::MatrixXcd> y;       // √σ(l) u(l), n×n
  std::vector<Eigen::MatrixXcd> y_plus;  // y + i y†  (hermitian inputs: y + y†)
  std::vector<Eigen::MatrixXcd> y_minus; // y − i y†  (hermitian inputs: y − y†)
  Eigen::VectorXd sigma;
};

/// Per-singular-value intermediates of the SVD sum of squares.
struct SvdSosIntermediates {
  std::vector<Eigen::MatrixXcd> u;  // √σ(l) U_l reshaped
  std::vector<Eigen::MatrixXcd> v;  // √σ(l) conj(V_l) reshaped
  Eigen::VectorXd sigma;
};

/// Whether the coefficient tensor equals minus its adjoint (the generator
/// case), its adjoint, or neither. General tensors are decomposed as the sum of
/// their antihermitian and hermitian parts.
enum class OperatorParity { Antihermitian, Hermitian, General };
OperatorParity detect_parity(const CoeffTensor4& t, double tol = 1e-10);

/// Splits t into (t − t^adj)/2 and (t + t^adj)/2.
std::pair<CoeffTensor4, CoeffTensor4> parity_parts(const CoeffTensor4& t);

/// `parity` selects the normal combinations (± i y† or ± y†); General is rejected.
TakagiSosIntermediates takagi_intermediates(const CoeffTensor4& t, OperatorParity parity);
SvdSosIntermediates svd_intermediates(const CoeffTensor4& t);

/// Takagi sum of squares. Each retained Takagi column yields up to two factors
/// (the ± normal combinations) with the ¼ weight absorbed into J. Columns with
/// σ < 1e-12·σ_max are dropped; `max_columns` truncates after sorting.
std::vector<SOSFactor> takagi_sos(const CoeffTensor4& t, const Sectors& sectors = {},
                                  int max_columns = -1);

/// SVD sum of squares: up to four normal squares per singular value built from
/// S = U+V and D = U−V, weights ±1/16 absorbed into J.
std::vector<SOSFactor> svd_sos(const CoeffTensor4& t, const Sectors& sectors = {},
                               int max_values = -1);

/// Turns a normal one-body coefficient matrix and a scalar weight into a factor
/// of w·Z²: mu diagonalizes z and J = w λλᵀ. `scale` is the magnitude z was
/// formed from, used for the sector leak test.
SOSFactor factor_from_normal(const Eigen::MatrixXcd& z, cplx weight, FactorOrigin origin,
                             const Sectors& sectors = {}, double scale = 0.0);

/// Inverse direction for rank-one factors: z = mu diag(λ) mu† with J = λλᵀ.
/// Throws DecompositionError for J of rank > 1 (uc factors have no single Z).
NormalOperatorCoeffs factor_to_normal_operator(const SOSFactor& f);

/// Second-largest over largest singular value of J.
double rank_one_defect(const Eigen::MatrixXcd& J);

}  // namespace sos
