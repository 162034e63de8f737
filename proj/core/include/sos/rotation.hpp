#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "sos/decompositions.hpp"

namespace sos {

/// Real parameters of an antihermitian generator κ, U = exp(κ).
///
/// Layout for n modes (n² entries):
///   [0, m)        Re κ_ab for a < b, row-major over the strict upper triangle
///   [m, 2m)       Im κ_ab for a < b, same order
///   [2m, 2m + n)  Im κ_aa
/// with m = n(n−1)/2. κ_ba = −conj(κ_ab) by construction.
struct KappaParams {
  std::size_t n = 0;
  Eigen::VectorXd params;

  static KappaParams zero(std::size_t n);
};

Eigen::MatrixXcd kappa_matrix(const KappaParams& k);
/// Reads the parameters of the antihermitian part of κ.
KappaParams kappa_from_matrix(const Eigen::MatrixXcd& kappa);

enum class DirectionKind { Real, Imag, Diag };
struct Direction {
  DirectionKind kind;
  int a;
  int b;
};
Direction direction(std::size_t n, std::size_t index);
/// Antihermitian basis matrix E for one real parameter.
Eigen::MatrixXcd direction_matrix(std::size_t n, std::size_t index);

/// Subset of generator directions that an optimization may move.
class RotationSpace {
 public:
  static RotationSpace full(std::size_t n);
  /// Real orthogonal rotations (real parts of the strict upper triangle only).
  static RotationSpace real(std::size_t n);
  /// Block-diagonal generators; every rotation stays inside one sector.
  static RotationSpace sectors(std::size_t n, Sectors sectors, bool real_only = false);

  std::size_t modes() const { return n_; }
  std::size_t dimension() const { return indices_.size(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  const Sectors& sector_list() const { return sectors_; }
  bool real_only() const { return real_only_; }

  KappaParams embed(const Eigen::VectorXd& x) const;
  Eigen::VectorXd restrict(const KappaParams& k) const;
  /// Drops the components of κ outside this space.
  KappaParams project(const KappaParams& k) const { return embed(restrict(k)); }

 private:
  RotationSpace(std::size_t n, std::vector<std::size_t> idx, Sectors s, bool real_only)
      : n_(n), indices_(std::move(idx)), sectors_(std::move(s)), real_only_(real_only) {}
  std::size_t n_ = 0;
  std::vector<std::size_t> indices_;
  Sectors sectors_;
  bool real_only_ = false;
};

/// Spectral data of κ = V diag(i h) V†, kept so U and its derivatives share it.
struct RotationEigen {
  Eigen::VectorXd h;
  Eigen::MatrixXcd V;
  Eigen::MatrixXcd U;  // exp(κ)
};
RotationEigen rotation_eigen(const KappaParams& k);

/// Φ_ij = (e^{λ_i−λ_j} − 1)/(λ_i − λ_j) for λ = i h, evaluated as
/// e^{iφ/2} sin(φ/2)/(φ/2) with φ = h_i − h_j; Φ_ii = 1.
Eigen::MatrixXcd wilcox_phi(const Eigen::VectorXd& h);

/// ∂U/∂θ = W·U for one real direction.
struct RotationDerivative {
  Eigen::MatrixXcd W;
};
RotationDerivative wilcox_derivative(const KappaParams& k, std::size_t direction_index);
RotationDerivative wilcox_derivative(const RotationEigen& eig, std::size_t direction_index);

}  // namespace sos
