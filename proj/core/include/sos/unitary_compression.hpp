#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sos/rotation.hpp"
#include "sos/tensor.hpp"

namespace sos {

/// t̃[p,q,r,s] = Σ conj(u_ip) u_jq conj(u_kr) u_ls t[i,j,k,l] with u = exp(κ),
/// done as four single-index contractions.
CoeffTensor4 transform_tensor(const CoeffTensor4& t, const KappaParams& kappa);
CoeffTensor4 transform_tensor(const CoeffTensor4& t, const Eigen::MatrixXcd& u);

/// D[x,y] = t̃[x,x,y,y].
Eigen::MatrixXcd rotated_diagonal(const CoeffTensor4& t, const Eigen::MatrixXcd& u);

/// O(κ) = Σ_xy |t̃[x,x,y,y]|².
double objective(const CoeffTensor4& t, const KappaParams& kappa);

/// ∂O/∂θ for all n² parameters by the chain rule through ∂O/∂u and ∂O/∂u*,
/// O(n⁵) overall.
Eigen::VectorXd gradient(const CoeffTensor4& t, const KappaParams& kappa);

/// Objective and chain-rule gradient in one pass (shares the intermediates).
double objective_and_gradient(const CoeffTensor4& t, const KappaParams& kappa,
                              Eigen::VectorXd* grad);

/// Slow reference: for every direction forms W explicitly and differentiates
/// each t̃[x,x,y,y] term by term. O(n⁷).
Eigen::VectorXd reference_gradient(const CoeffTensor4& t, const KappaParams& kappa);

enum class InitMode { Random, TakagiSeed };
std::string_view to_string(InitMode m);
InitMode init_mode_from_string(std::string_view s);

struct CompressionConfig {
  double threshold = 1e-5;
  int max_factors = 50;
  InitMode init = InitMode::TakagiSeed;
  int restarts = 2;  // random restarts in addition to the seeded start
  std::uint64_t seed = 7;
  double random_scale = 0.1;
  int max_iterations = 500;
  double gradient_tolerance = 1e-7;  // on O/‖t‖²
  int polish_steps = 3;              // Newton steps on ∇O = 0 after BFGS
  bool track_rank = true;
  bool parallel_restarts = true;
};

enum class CompressionStatus { ThresholdMet, MaxFactors, OptimizerFailure };
std::string_view to_string(CompressionStatus s);

struct IterationRecord {
  int index = 0;
  double objective = 0.0;       // O(κ*) = ‖subtracted piece‖²
  double residual_l2 = 0.0;
  double residual_mad = 0.0;
  int residual_rank = -1;       // −1 when rank tracking is off
  int optimizer_iterations = 0;
  double wall_seconds = 0.0;
  double j_asymmetry = 0.0;     // max |t̃_xxyy − t̃_yyxx| before symmetrizing
  std::string start;            // which start won: "takagi-seed" or "random-k"
};

struct CompressionReport {
  double initial_l2 = 0.0;
  std::vector<IterationRecord> iterations;
  CompressionStatus status = CompressionStatus::ThresholdMet;
  std::string diagnostic;
};

struct CompressionResult {
  std::vector<SOSFactor> factors;
  CompressionReport report;
  CoeffTensor4 remainder;
};

/// Greedy unitary compression of a charge-charge tensor:
///  1. maximize O(κ) over the rotation space,
///  2. keep J = diag(t̃) (symmetrized) and mu = exp(κ),
///  3. rotate the diagonal part back and subtract it,
///  4. repeat until ‖remainder‖ < threshold or max_factors.
CompressionResult greedy_compress(const CoeffTensor4& t, const CompressionConfig& config,
                                  const std::optional<RotationSpace>& space = std::nullopt);

/// Result of one orbital optimization (exposed for tests and benchmarks).
struct OptimizationOutcome {
  KappaParams kappa;
  double objective = 0.0;
  int iterations = 0;
  bool ok = false;
  std::string message;
};
OptimizationOutcome maximize_objective(const CoeffTensor4& t, const RotationSpace& space,
                                       const KappaParams& start, const CompressionConfig& config);

/// Starting κ from the leading Takagi vector of t: the eigenbasis of the best of
/// its normal combinations, projected onto `space`.
KappaParams takagi_seed(const CoeffTensor4& t, const RotationSpace& space);

}  // namespace sos
