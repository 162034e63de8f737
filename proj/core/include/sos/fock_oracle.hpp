#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sos/circuit.hpp"
#include "sos/tensor.hpp"

namespace sos::fock {

/// Full 2ⁿ×2ⁿ matrix of a fermionic operator under Jordan–Wigner.
/// Basis states are occupation bitstrings with mode 0 in the least significant bit.
struct DenseOperator {
  std::size_t n = 0;
  Eigen::MatrixXcd mat;
};

/// Mode cap for dense construction: SOS_COMPRESS_ORACLE_CAP or 10.
std::size_t oracle_mode_cap();
void check_oracle_size(std::size_t n);

/// Result of applying a ladder operator to a basis state.
struct LadderResult {
  std::uint64_t state;
  int sign;  // 0 when the state is annihilated
};
LadderResult apply_create(std::uint64_t state, std::size_t p);
LadderResult apply_annihilate(std::uint64_t state, std::size_t p);

/// Checks {a_p, a†_q} = δ_pq and {a_p, a_q} = 0 on every basis state.
bool check_anticommutation(std::size_t n);

DenseOperator identity(std::size_t n);
DenseOperator creation(std::size_t n, std::size_t p);
DenseOperator annihilation(std::size_t n, std::size_t p);
DenseOperator number(std::size_t n, std::size_t p);

/// Σ h_pq a†_p a_q.
DenseOperator build_one_body(const Eigen::MatrixXcd& h);

/// Operator of a rank-4 tensor in its declared convention, minus the optional
/// one-body correction: G = T − Σ S_pr a†_p a_r.
DenseOperator build_two_body(const CoeffTensor4& t,
                             const std::optional<OneBodyCorrection>& s = std::nullopt);

/// Sz = ½ Σ_p (n_{pα} − n_{pβ}) with spin-orbital 2p+σ, α = 0.
DenseOperator sz_operator(std::size_t n);
DenseOperator total_number(std::size_t n);

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// exp(mat): hermitian eigendecomposition for antihermitian input, otherwise
/// scaling and squaring.
DenseOperator exp_operator(const DenseOperator& g);
Eigen::MatrixXcd exp_via_eigen(const Eigen::MatrixXcd& antihermitian);
Eigen::MatrixXcd exp_via_scaling_squaring(const Eigen::MatrixXcd& m);

/// Fock-space unitary R(g) with R a†_k R† = Σ_p g_pk a†_p.
DenseOperator lift_unitary(const Eigen::MatrixXcd& g);

/// Σ_kl J_kl n_k n_l as a diagonal (entries per basis state).
Eigen::VectorXcd charge_diagonal(const Eigen::MatrixXcd& J);

/// Σ J_kl ñ_k ñ_l = R(mu) (Σ J_kl n_k n_l) R(mu)†.
DenseOperator factor_operator(const SOSFactor& f);
/// exp of the same, R(mu) exp(Σ J n n) R(mu)†.
DenseOperator factor_exponential(const SOSFactor& f);

enum class VerifyMode { ExactSum, Trotter };

struct VerifyResult {
  double op_error = 0.0;      // Frobenius ‖G − (Σ factors − S)‖
  double trotter_error = 0.0; // ‖exp(G) − e^{−S} Π_l e^{Z_l²}‖₂, only in Trotter mode
};

/// `t` is the original tensor in any convention; `s` the correction that was
/// split off when the factors were computed (G = Σ factors − S).
VerifyResult verify_factorization(const CoeffTensor4& t, const std::optional<OneBodyCorrection>& s,
                                  const std::vector<SOSFactor>& factors, VerifyMode mode);

/// e^{−S} · e^{Z_L²} ⋯ e^{Z_1²}, factor 1 applied first.
DenseOperator trotter_product(const std::vector<SOSFactor>& factors,
                              const std::optional<OneBodyCorrection>& s, std::size_t n);

/// Fock-space unitary of a compiled circuit: Givens layers are lifted from
/// their network unitaries, charge and phase layers are diagonal phases.
DenseOperator realize_circuit(const CircuitIR& ir);

}  // namespace sos::fock
