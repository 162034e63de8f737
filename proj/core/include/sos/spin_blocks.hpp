#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "sos/tensor.hpp"
#include "sos/unitary_compression.hpp"

namespace sos {

/// Spin-orbital index of spatial orbital p with spin sigma (0 = α, 1 = β).
inline std::size_t spin_orbital(std::size_t p, int sigma) { return 2 * p + static_cast<std::size_t>(sigma); }

/// α modes {0, 2, 4, ...} and β modes {1, 3, 5, ...} of 2m spin-orbitals.
Sectors spin_sectors(std::size_t n_spatial);

/// Geminal blocks of an Sz-adapted charge-charge tensor over 2m spin-orbitals.
/// Rows/columns of each block are spatial pairs p*m+s.
///   A = Ã(αα,αα), C = Ã(ββ,ββ), B = Ã(αα,ββ) and Ã(ββ,αα) = Bᵀ.
struct SpinBlockedSuperMatrix {
  std::size_t n_spatial = 0;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd B;
  Eigen::MatrixXcd C;
};

/// Moves terms a†_{pσ} a_{sτ} a†_{qτ} a_{rσ} (σ ≠ τ) to the spin-diagonal pairing
/// a†_{pσ} a_{rσ} a†_{qτ} a_{sτ}; operator = result.tensor − result.correction.
ChargeChargeForm spin_canonicalize(const CoeffTensor4& t);

/// Splits a spin-canonical tensor into blocks. Throws SymmetryError listing the
/// largest offending entries when mixed-spin geminal pairs carry weight
/// (Sz-violating terms, or spin-flip pairs that were not canonicalized).
SpinBlockedSuperMatrix partition_by_sz(const CoeffTensor4& t, double tol = 1e-12);

/// Reassembles the full 2m-mode charge-charge tensor.
CoeffTensor4 assemble(const SpinBlockedSuperMatrix& s);

/// Embeds one block (A, C, or the B/Bᵀ cross part) as a 2m-mode tensor.
enum class SpinBlock { Alpha, Beta, Cross };
CoeffTensor4 block_tensor(const SpinBlockedSuperMatrix& s, SpinBlock which);

enum class BlockMethod { Takagi, Svd, Uc };

struct BlockedDecomposition {
  std::vector<SOSFactor> factors;
  std::vector<CompressionReport> reports;  // filled for Uc
};

/// Decomposes A, C and the cross part separately with sector-local rotations.
/// Factor k of A and factor k of C share simultaneous_group; cross factors get
/// their own groups. Output order: (A_0, C_0), (A_1, C_1), ..., then cross.
BlockedDecomposition decompose_blocked(const SpinBlockedSuperMatrix& s, BlockMethod method,
                                       const CompressionConfig& config = {});

}  // namespace sos
