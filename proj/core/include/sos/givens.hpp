#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace sos {

/// Two-mode rotation on adjacent modes (p, q = p+1):
///   [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]].
struct GivensRotation {
  int p = 0;
  int q = 1;
  double theta = 0.0;
  double phi = 0.0;
  int round = 0;
};

/// u = diag(e^{i·phases}) · G_last ⋯ G_first; `rotations` is in time order.
struct GivensNetwork {
  std::size_t n = 0;
  std::vector<GivensRotation> rotations;
  Eigen::VectorXd phases;
  int rounds = 0;
};

Eigen::MatrixXcd givens_matrix(std::size_t n, const GivensRotation& g);
Eigen::MatrixXcd network_unitary(const GivensNetwork& net);

/// Rectangular (Clements) nulling order: alternately clears entries of the
/// lower triangle from the right and from the left, then commutes the
/// diagonal remainder through the left-hand rotations. Rotations are assigned
/// to nearest-neighbour rounds greedily; the mesh has depth ≤ n.
GivensNetwork givens_decompose(const Eigen::MatrixXcd& u, double tol = 1e-10);

}  // namespace sos
