#include "sos/unitary_compression.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <string>

#include "sos/decompositions.hpp"
#include "sos/error.hpp"
#include "sos/linalg.hpp"

namespace sos {

namespace {

void require_charge_charge(const CoeffTensor4& t, const char* what) {
  if (t.convention() == Convention::PqrsLadder)
    throw ConventionError(std::string(what) + " needs a charge-charge tensor");
}

// Contracts the last index with m and rotates it to the front:
// Y[d', a, b, c] = Σ_d X[a, b, c, d] m[d, d'].
Eigen::VectorXcd contract_last(const Eigen::VectorXcd& x, const Eigen::MatrixXcd& m, Eigen::Index n) {
  const Eigen::Index n3 = n * n * n;
  Eigen::Map<const RowMatrixXcd> X(x.data(), n3, n);
  RowMatrixXcd Z = X * m;
  Eigen::VectorXcd y(x.size());
  Eigen::Map<RowMatrixXcd>(y.data(), n, n3) = Z.transpose();
  return y;
}

// P[(i,j), x] = conj(u_ix) u_jx.
Eigen::MatrixXcd pair_projector(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  Eigen::MatrixXcd P(n * n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index x = 0; x < n; ++x) P(i * n + j, x) = std::conj(u(i, x)) * u(j, x);
  return P;
}

// Diagonal transform with independent factor matrices, by plain loops:
// D[x,y] = Σ conj(a_ix) b_jx conj(c_ky) d_ly t[i,j,k,l].
Eigen::MatrixXcd diagonal_transform_loops(const CoeffTensor4& t, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                          const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& d) {
  const std::size_t n = t.modes();
  std::vector<cplx> t1(n * n * n * n, 0.0);  // [i,j,k,y]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t y = 0; y < n; ++y) {
          cplx acc = 0.0;
          for (std::size_t l = 0; l < n; ++l) acc += t(i, j, k, l) * d(l, y);
          t1[((i * n + j) * n + k) * n + y] = acc;
        }
  std::vector<cplx> t2(n * n * n, 0.0);  // [i,j,y]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t y = 0; y < n; ++y) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += std::conj(c(k, y)) * t1[((i * n + j) * n + k) * n + y];
        t2[(i * n + j) * n + y] = acc;
      }
  std::vector<cplx> t3(n * n * n, 0.0);  // [i,x,y]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += b(j, x) * t2[(i * n + j) * n + y];
        t3[(i * n + x) * n + y] = acc;
      }
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::conj(a(i, x)) * t3[(i * n + x) * n + y];
      D(x, y) = acc;
    }
  return D;
}

// Minimizes 1 − O/‖t‖² over a rotation subspace.
class NegativeObjective final : public ceres::FirstOrderFunction {
 public:
  NegativeObjective(const CoeffTensor4& t, const RotationSpace& space, double scale)
      : t_(t), space_(space), scale_(scale) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    const Eigen::Map<const Eigen::VectorXd> x(parameters, NumParameters());
    const KappaParams k = space_.embed(x);
    Eigen::VectorXd g;
    const double o = objective_and_gradient(t_, k, gradient ? &g : nullptr);
    if (!std::isfinite(o)) return false;
    *cost = 1.0 - o / scale_;
    if (gradient) {
      const Eigen::VectorXd gr = space_.restrict(KappaParams{k.n, g});
      for (Eigen::Index i = 0; i < gr.size(); ++i) gradient[i] = -gr[i] / scale_;
    }
    return true;
  }
  int NumParameters() const override { return static_cast<int>(space_.dimension()); }

 private:
  const CoeffTensor4& t_;
  const RotationSpace& space_;
  double scale_;
};

Eigen::VectorXd restricted_gradient(const CoeffTensor4& t, const RotationSpace& space, const Eigen::VectorXd& x,
                                    double* value) {
  Eigen::VectorXd g;
  const double o = objective_and_gradient(t, space.embed(x), &g);
  if (value) *value = o;
  return space.restrict(KappaParams{space.modes(), g});
}

// Newton iterations on the stationarity condition with a forward-difference
// Hessian of the analytic gradient. Line searches on O stall once O stops
// resolving the κ error (O deficit ∝ |δκ|²); the gradient still resolves it.
Eigen::VectorXd newton_polish(const CoeffTensor4& t, const RotationSpace& space, Eigen::VectorXd x, int steps,
                              double scale) {
  const Eigen::Index d = x.size();
  if (d == 0 || steps <= 0) return x;
  double o = 0.0;
  Eigen::VectorXd g = restricted_gradient(t, space, x, &o);
  for (int it = 0; it < steps; ++it) {
    const double gnorm = g.norm();
    if (gnorm < 1e-14 * scale) break;
    const double h = 1e-6;
    Eigen::MatrixXd H(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      Eigen::VectorXd xp = x;
      xp[i] += h;
      H.col(i) = (restricted_gradient(t, space, xp, nullptr) - g) / h;
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lmax = lam.cwiseAbs().maxCoeff();
    if (lmax == 0.0) break;
    const Eigen::VectorXd gc = es.eigenvectors().transpose() * g;
    Eigen::VectorXd step = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i)
      if (std::abs(lam[i]) > 1e-8 * lmax) step -= (gc[i] / lam[i]) * es.eigenvectors().col(i);
    const Eigen::VectorXd xn = x + step;
    double on = 0.0;
    const Eigen::VectorXd gn = restricted_gradient(t, space, xn, &on);
    if (!(gn.norm() < gnorm) || on < o - 1e-12 * scale) break;
    x = xn;
    g = gn;
    o = on;
  }
  return x;
}

}  // namespace

CoeffTensor4 transform_tensor(const CoeffTensor4& t, const Eigen::MatrixXcd& u) {
  require_charge_charge(t, "transform_tensor");
  const auto n = static_cast<Eigen::Index>(t.modes());
  if (u.rows() != n || u.cols() != n) throw ShapeError("transform_tensor: rotation has the wrong size");
  if (n == 0) return t;
  const Eigen::MatrixXcd uc = u.conjugate();
  Eigen::VectorXcd x = contract_last(t.data(), u, n);  // [s, i, j, k]
  x = contract_last(x, uc, n);                         // [r, s, i, j]
  x = contract_last(x, u, n);                          // [q, r, s, i]
  x = contract_last(x, uc, n);                         // [p, q, r, s]
  return CoeffTensor4(t.modes(), t.convention(), std::move(x));
}

CoeffTensor4 transform_tensor(const CoeffTensor4& t, const KappaParams& kappa) {
  return transform_tensor(t, rotation_eigen(kappa).U);
}

Eigen::MatrixXcd rotated_diagonal(const CoeffTensor4& t, const Eigen::MatrixXcd& u) {
  require_charge_charge(t, "rotated_diagonal");
  const Eigen::MatrixXcd P = pair_projector(u);
  return P.transpose() * (t.as_matrix() * P);
}

double objective(const CoeffTensor4& t, const KappaParams& kappa) {
  return rotated_diagonal(t, rotation_eigen(kappa).U).squaredNorm();
}

double objective_and_gradient(const CoeffTensor4& t, const KappaParams& kappa, Eigen::VectorXd* grad) {
  require_charge_charge(t, "objective");
  const std::size_t n = t.modes();
  const auto N = static_cast<Eigen::Index>(n);
  const RotationEigen eig = rotation_eigen(kappa);
  const Eigen::MatrixXcd& u = eig.U;
  const Eigen::MatrixXcd P = pair_projector(u);
  const auto M = t.as_matrix();
  const Eigen::MatrixXcd R = M * P;              // n²×n
  const Eigen::MatrixXcd D = P.transpose() * R;  // n×n
  const double value = D.squaredNorm();
  if (!grad) return value;

  const Eigen::MatrixXcd L = P.transpose() * M;                    // n×n²
  const Eigen::MatrixXcd Q = R * D.adjoint();                      // Q[(i,j),x]
  const Eigen::MatrixXcd Qp = L.transpose() * D.conjugate();       // Q'[(k,l),y]
  const Eigen::MatrixXcd Qt = Q + Qp;

  // F[c,d] = conj(Σ_j u_jd Qt[(c,j),d]) + Σ_i conj(u_id) Qt[(i,c),d]
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index c = 0; c < N; ++c)
    for (Eigen::Index d = 0; d < N; ++d) {
      cplx alpha = 0.0, beta = 0.0;
      for (Eigen::Index j = 0; j < N; ++j) {
        alpha += u(j, d) * Qt(c * N + j, d);
        beta += std::conj(u(j, d)) * Qt(j * N + c, d);
      }
      F(c, d) = std::conj(alpha) + beta;
    }

  // dO = 2 Re tr(W Gm) with Gm = u Fᵀ; pull W's Wilcox form through V.
  const Eigen::MatrixXcd Gm = u * F.transpose();
  const Eigen::MatrixXcd Hm = eig.V.adjoint() * Gm * eig.V;
  const Eigen::MatrixXcd C = wilcox_phi(eig.h).cwiseProduct(Hm.transpose());
  const Eigen::MatrixXcd Y = eig.V.conjugate() * C * eig.V.transpose();

  grad->resize(static_cast<Eigen::Index>(n * n));
  const std::size_t m = n * (n - 1) / 2;
  std::size_t idx = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b, ++idx) {
      (*grad)[idx] = 2.0 * (Y(a, b) - Y(b, a)).real();
      (*grad)[m + idx] = -2.0 * (Y(a, b) + Y(b, a)).imag();
    }
  for (std::size_t a = 0; a < n; ++a) (*grad)[2 * m + a] = -2.0 * Y(a, a).imag();
  return value;
}

Eigen::VectorXd gradient(const CoeffTensor4& t, const KappaParams& kappa) {
  Eigen::VectorXd g;
  objective_and_gradient(t, kappa, &g);
  return g;
}

Eigen::VectorXd reference_gradient(const CoeffTensor4& t, const KappaParams& kappa) {
  require_charge_charge(t, "reference_gradient");
  const std::size_t n = t.modes();
  const RotationEigen eig = rotation_eigen(kappa);
  const Eigen::MatrixXcd& u = eig.U;
  const Eigen::MatrixXcd D = diagonal_transform_loops(t, u, u, u, u);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n * n));
  for (std::size_t k = 0; k < n * n; ++k) {
    const Eigen::MatrixXcd du = wilcox_derivative(eig, k).W * u;
    const Eigen::MatrixXcd dD = diagonal_transform_loops(t, du, u, u, u) + diagonal_transform_loops(t, u, du, u, u) +
                                diagonal_transform_loops(t, u, u, du, u) + diagonal_transform_loops(t, u, u, u, du);
    g[static_cast<Eigen::Index>(k)] = 2.0 * (D.conjugate().cwiseProduct(dD)).sum().real();
  }
  return g;
}

std::string_view to_string(InitMode m) { return m == InitMode::Random ? "random" : "takagi-seed"; }

InitMode init_mode_from_string(std::string_view s) {
  if (s == "random") return InitMode::Random;
  if (s == "takagi-seed" || s == "takagi") return InitMode::TakagiSeed;
  throw Error("unknown init mode '" + std::string(s) + "'");
}

std::string_view to_string(CompressionStatus s) {
  switch (s) {
    case CompressionStatus::ThresholdMet: return "threshold-met";
    case CompressionStatus::MaxFactors: return "max-factors";
    case CompressionStatus::OptimizerFailure: return "optimizer-failure";
  }
  return "unknown";
}

OptimizationOutcome maximize_objective(const CoeffTensor4& t, const RotationSpace& space, const KappaParams& start,
                                       const CompressionConfig& config) {
  OptimizationOutcome out;
  const double scale = t.data().squaredNorm();
  Eigen::VectorXd x = space.restrict(start);
  if (scale == 0.0 || space.dimension() == 0) {
    out.kappa = space.embed(x);
    out.objective = objective(t, out.kappa);
    out.ok = true;
    out.message = "nothing to optimize";
    return out;
  }
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::BFGS;
  options.max_num_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  options.function_tolerance = 1e-15;
  options.parameter_tolerance = 1e-15;
  options.logging_type = ceres::SILENT;
  ceres::GradientProblem problem(new NegativeObjective(t, space, scale));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);
  out.iterations = static_cast<int>(summary.iterations.size());
  out.message = summary.message;
  if (summary.termination_type == ceres::FAILURE || !x.allFinite()) {
    out.ok = false;
    return out;
  }
  x = newton_polish(t, space, x, config.polish_steps, scale);
  out.kappa = space.embed(x);
  out.objective = objective(t, out.kappa);
  out.ok = std::isfinite(out.objective);
  return out;
}

KappaParams takagi_seed(const CoeffTensor4& t, const RotationSpace& space) {
  const std::size_t n = t.modes();
  if (n == 0 || t.norm() == 0.0) return KappaParams::zero(n);
  const CoeffTensor4 sym = symmetrize_supermatrix(t).tensor;
  const TakagiResult tk = takagi(Eigen::MatrixXcd(sym.as_matrix()));
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd y(N, N);
  for (Eigen::Index p = 0; p < N; ++p)
    for (Eigen::Index s = 0; s < N; ++s) y(p, s) = tk.U(p * N + s, 0);
  const cplx I(0.0, 1.0);
  const Eigen::MatrixXcd candidates[] = {y + I * y.adjoint(), y - I * y.adjoint(), y + y.adjoint(),
                                         I * (y - y.adjoint())};
  double best = -1.0;
  KappaParams seed = KappaParams::zero(n);
  for (const auto& z : candidates) {
    if (z.norm() < 1e-12) continue;
    try {
      const NormalEigen ne = diagonalize_normal(z, space.sector_list());
      const Eigen::MatrixXcd u = linalg::align_columns(ne.mu, space.real_only());
      const KappaParams k = space.project(kappa_from_matrix(linalg::log_unitary(u)));
      const double o = objective(t, k);
      if (o > best) {
        best = o;
        seed = k;
      }
    } catch (const Error&) {
      continue;
    }
  }
  return seed;
}

CompressionResult greedy_compress(const CoeffTensor4& t, const CompressionConfig& config,
                                  const std::optional<RotationSpace>& space_in) {
  require_charge_charge(t, "greedy_compress");
  if (!(config.threshold > 0)) throw Error("greedy_compress: threshold must be positive");
  const std::size_t n = t.modes();
  const RotationSpace space = space_in ? *space_in : RotationSpace::full(n);
  if (space.modes() != n) throw ShapeError("rotation space and tensor have different mode counts");

  CompressionResult result;
  result.remainder = t.with_convention(Convention::ChargeCharge);
  result.report.initial_l2 = t.norm();
  const double rank_scale =
      (config.track_rank && t.norm() > 0)
          ? Eigen::BDCSVD<Eigen::MatrixXcd>(Eigen::MatrixXcd(t.as_matrix())).singularValues()[0]
          : 0.0;

  CoeffTensor4& R = result.remainder;
  result.report.status = CompressionStatus::MaxFactors;
  for (int iter = 0;; ++iter) {
    if (R.norm() < config.threshold) {
      result.report.status = CompressionStatus::ThresholdMet;
      break;
    }
    if (iter >= config.max_factors) break;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::pair<std::string, KappaParams>> starts;
    if (config.init == InitMode::TakagiSeed) {
      try {
        starts.emplace_back("takagi-seed", takagi_seed(R, space));
      } catch (const Error&) {
      }
    }
    for (int r = 0; r < config.restarts; ++r) {
      std::seed_seq seq{static_cast<std::uint64_t>(config.seed), static_cast<std::uint64_t>(iter),
                        static_cast<std::uint64_t>(r)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> dist(0.0, config.random_scale);
      Eigen::VectorXd x(space.dimension());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
      starts.emplace_back("random-" + std::to_string(r), space.embed(x));
    }
    if (starts.empty()) starts.emplace_back("zero", KappaParams::zero(n));

    std::vector<OptimizationOutcome> outcomes(starts.size());
    auto run = [&](std::size_t i) {
      try {
        return maximize_objective(R, space, starts[i].second, config);
      } catch (const std::exception& e) {
        OptimizationOutcome bad;
        bad.message = e.what();
        return bad;
      }
    };
    if (config.parallel_restarts && starts.size() > 1) {
      std::vector<std::future<OptimizationOutcome>> futures;
      for (std::size_t i = 0; i < starts.size(); ++i) futures.push_back(std::async(std::launch::async, run, i));
      for (std::size_t i = 0; i < starts.size(); ++i) outcomes[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < starts.size(); ++i) outcomes[i] = run(i);
    }

    int best = -1;
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      if (outcomes[i].ok && (best < 0 || outcomes[i].objective > outcomes[best].objective)) best = static_cast<int>(i);
    if (best < 0) {
      std::ostringstream os;
      os << "iteration " << iter << ": optimizer failed on every start";
      for (std::size_t i = 0; i < outcomes.size(); ++i) os << "; " << starts[i].first << ": " << outcomes[i].message;
      result.report.status = CompressionStatus::OptimizerFailure;
      result.report.diagnostic = os.str();
      break;
    }

    const OptimizationOutcome& win = outcomes[best];
    SOSFactor f;
    f.mu = rotation_eigen(win.kappa).U;
    const Eigen::MatrixXcd D = rotated_diagonal(R, f.mu);
    f.J = 0.5 * (D + D.transpose());
    f.origin = FactorOrigin::Uc;
    const double asym = D.size() ? (D - D.transpose()).cwiseAbs().maxCoeff() : 0.0;
    const double piece_norm2 = f.J.squaredNorm();
    if (!(piece_norm2 > 1e-14 * R.data().squaredNorm())) {
      std::ostringstream os;
      os << "iteration " << iter << ": best objective " << piece_norm2 << " does not improve the remainder (|R|^2 = "
         << R.data().squaredNorm() << ")";
      result.report.status = CompressionStatus::OptimizerFailure;
      result.report.diagnostic = os.str();
      break;
    }
    R.data() -= factor_tensor(f).data();
    result.factors.push_back(f);

    IterationRecord rec;
    rec.index = iter;
    rec.objective = piece_norm2;
    rec.residual_l2 = R.norm();
    rec.residual_mad = R.data().size() ? R.data().cwiseAbs().maxCoeff() : 0.0;
    rec.residual_rank = config.track_rank ? supermatrix_rank(R, kRankThreshold * rank_scale) : -1;
    rec.optimizer_iterations = win.iterations;
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.j_asymmetry = asym;
    rec.start = starts[best].first;
    result.report.iterations.push_back(rec);
  }
  return result;
}

}  // namespace sos
