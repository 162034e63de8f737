#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "sos/givens.hpp"
#include "sos/tensor.hpp"

namespace sos {

struct GivensLayer {
  GivensNetwork network;
  Eigen::MatrixXcd source;  // single-particle unitary it implements
};

/// exp(i·angle·n_p n_q) for every pair, in odd–even transposition rounds.
struct ChargeCoupling {
  int p = 0;
  int q = 0;
  double angle = 0.0;
  int round = 0;
};
struct ChargeLayer {
  std::vector<ChargeCoupling> couplings;
  Eigen::VectorXd phases;  // diagonal J_pp n_p terms, exp(i·phase·n_p)
  int rounds = 0;
};

struct PhaseLayer {
  Eigen::VectorXd phases;
};

using Layer = std::variant<GivensLayer, ChargeLayer, PhaseLayer>;

struct FactorStats {
  int factor_index = 0;
  int gate_count = 0;        // charge couplings + the Givens layer that follows
  int cumulative_depth = 0;
};

struct CircuitIR {
  std::size_t n = 0;
  std::vector<Layer> layers;  // time order
  int gate_count = 0;
  int depth = 0;
  std::vector<FactorStats> stats;
};

struct CompileOptions {
  bool merge = true;                    // telescoping Ũ_l = U_l U_{l−1}†
  bool separate_phase_layers = false;   // emit J_pp terms as a PhaseLayer
  std::optional<double> evolution_time; // hermitian factors: J → −i t J
};

/// Givens network for one single-particle unitary.
GivensLayer make_givens_layer(const Eigen::MatrixXcd& u);
/// Swap-network schedule for Σ J_pq n_p n_q (J imaginary).
ChargeLayer make_charge_layer(const Eigen::MatrixXcd& J);

/// Emits givens(U_1), charge(J_1), givens(U_2 U_1†), ..., charge(J_L),
/// givens(e^{−S} U_L†) with U_l = mu_l†. Adjacent factors sharing a
/// simultaneous_group on disjoint modes are fused into one slice first.
CircuitIR merge_and_schedule(const std::vector<SOSFactor>& factors,
                             const std::optional<OneBodyCorrection>& s = std::nullopt,
                             const CompileOptions& options = {});

/// Fuses adjacent same-group factors (exposed for tests).
std::vector<SOSFactor> fuse_simultaneous(const std::vector<SOSFactor>& factors);

/// Single-particle unitary of a layer's Givens part (for audits).
Eigen::MatrixXcd layer_unitary(const GivensLayer& g);

}  // namespace sos
