#pragma once

#include <vector>

#include "sos/tensor.hpp"
#include "sos/unitary_compression.hpp"

namespace sos {

/// Checks the 8-fold symmetry and realness of a chemist-notation ERI tensor.
/// Returns the largest violation.
double eri_symmetry_defect(const CoeffTensor4& v);

struct CholeskyOptions {
  double negative_tolerance = 1e-10;  // eigenvalues below −tol are an error
};

/// Eigen-decomposition ("Cholesky via SVD") baseline: top-L eigenpairs of the
/// (ij),(kl) matrix as rank-one real factors, L ≤ 0 meaning all.
std::vector<SOSFactor> cholesky_baseline(const CoeffTensor4& v, int L = -1,
                                         const CholeskyOptions& options = {});

/// Greedy compression with real orthogonal rotations (m(m−1)/2 parameters).
CompressionResult compress_eri(const CoeffTensor4& v, const CompressionConfig& config);

}  // namespace sos
