#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sos/decompositions.hpp"
#include "sos/error.hpp"
#include "sos/fock_oracle.hpp"

using namespace sos;

namespace {

Eigen::MatrixXcd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = oracle::gaussian(n, n, rng);
  return g + g.transpose();
}

void expect_takagi_valid(const Eigen::MatrixXcd& m, const TakagiResult& r, double tol) {
  const Eigen::Index n = m.rows();
  EXPECT_LT((r.U.adjoint() * r.U - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), tol);
  for (Eigen::Index i = 0; i < r.sigma.size(); ++i) {
    EXPECT_GE(r.sigma[i], 0.0);
    if (i > 0) EXPECT_LE(r.sigma[i], r.sigma[i - 1] + 1e-14);
  }
  const Eigen::MatrixXcd back = r.U * r.sigma.cast<cplx>().asDiagonal() * r.U.transpose();
  EXPECT_LT((back - m).norm(), tol * std::max(1.0, m.norm()));
}

// Operator G of a random antihermitian ladder tensor, its charge-charge form
// and correction, and the Fock operator of Σ factors − S.
struct SosCase {
  CoeffTensor4 ladder;
  ChargeChargeForm cc;
};

SosCase make_case(std::size_t n, std::mt19937_64& rng) {
  SosCase c{oracle::random_antihermitian_ladder(n, rng), {}};
  c.cc = normal_order_to_charge_charge(c.ladder);
  return c;
}

}  // namespace

TEST(Takagi, RandomSymmetricMatrices) {
  std::mt19937_64 rng(1);
  for (int n : {1, 2, 5, 9}) {
    const Eigen::MatrixXcd m = random_symmetric(n, rng);
    expect_takagi_valid(m, takagi(m), 1e-11);
  }
}

TEST(Takagi, IdentityHasUnitSingularValues) {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
  const TakagiResult r = takagi(m);
  EXPECT_LT((r.sigma - Eigen::VectorXd::Ones(3)).norm(), 1e-12);
  expect_takagi_valid(m, r, 1e-12);
}

TEST(Takagi, ZeroMatrix) {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  const TakagiResult r = takagi(m);
  EXPECT_EQ(r.sigma.norm(), 0.0);
  expect_takagi_valid(m, r, 1e-12);
}

TEST(Takagi, RankDeficientAndDegenerate) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXcd u = oracle::unitary(6, rng);
  Eigen::VectorXd s(6);
  s << 3.0, 2.0, 2.0, 0.0, 0.0, 0.0;
  const Eigen::MatrixXcd m = u * s.cast<cplx>().asDiagonal() * u.transpose();
  const TakagiResult r = takagi(m);
  EXPECT_LT((r.sigma - s).norm(), 1e-12);
  expect_takagi_valid(m, r, 1e-11);
}

TEST(Takagi, RealSymmetricIndefinite) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd g = oracle::gaussian_real(5, 5, rng);
  const Eigen::MatrixXcd m = (g + g.transpose()).cast<cplx>();
  expect_takagi_valid(m, takagi(m), 1e-11);
}

TEST(Takagi, RejectsNonSymmetricAndNonSquare) {
  std::mt19937_64 rng(4);
  EXPECT_THROW(takagi(oracle::gaussian(3, 3, rng)), SymmetryError);
  EXPECT_THROW(takagi(oracle::gaussian(3, 2, rng)), ShapeError);
}

TEST(NormalDiagonalization, RandomNormalWithDegeneracies) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd u = oracle::unitary(5, rng);
  Eigen::VectorXcd lam(5);
  lam << cplx(1, 1), cplx(1, 1), cplx(1, -1), cplx(-2, 0), cplx(0, 0.5);
  const Eigen::MatrixXcd z = u * lam.asDiagonal() * u.adjoint();
  const NormalEigen ne = diagonalize_normal(z);
  EXPECT_LT((ne.mu.adjoint() * ne.mu - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-12);
  EXPECT_LT((ne.mu * ne.lambda.asDiagonal() * ne.mu.adjoint() - z).norm(), 1e-11);
}

TEST(NormalDiagonalization, SameRealPartDifferentImaginary) {
  // H alone is fully degenerate; the antihermitian part must split it.
  std::mt19937_64 rng(6);
  const Eigen::MatrixXcd u = oracle::unitary(4, rng);
  Eigen::VectorXcd lam(4);
  lam << cplx(2, 1), cplx(2, -1), cplx(2, 3), cplx(2, 0);
  const Eigen::MatrixXcd z = u * lam.asDiagonal() * u.adjoint();
  const NormalEigen ne = diagonalize_normal(z);
  EXPECT_LT((ne.mu * ne.lambda.asDiagonal() * ne.mu.adjoint() - z).norm(), 1e-11);
}

TEST(NormalDiagonalization, SectorsKeepBlockStructure) {
  std::mt19937_64 rng(7);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(4, 4);
  const Eigen::MatrixXcd a = oracle::gaussian(2, 2, rng), b = oracle::gaussian(2, 2, rng);
  const Eigen::MatrixXcd ha = a + a.adjoint(), hb = b + b.adjoint();
  // sector {0,2} and {1,3}
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      z(2 * i, 2 * j) = ha(i, j);
      z(2 * i + 1, 2 * j + 1) = hb(i, j);
    }
  const NormalEigen ne = diagonalize_normal(z, {{0, 2}, {1, 3}});
  EXPECT_LT((ne.mu * ne.lambda.asDiagonal() * ne.mu.adjoint() - z).norm(), 1e-11);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      if (i % 2 != k % 2) EXPECT_EQ(std::abs(ne.mu(i, k)), 0.0);
  // A small z formed by cancellation keeps the round-off of its source.
  Eigen::MatrixXcd tiny = 1e-8 * z;
  tiny(0, 1) = tiny(1, 0) = 1e-17;
  EXPECT_THROW(diagonalize_normal(tiny, {{0, 2}, {1, 3}}), SymmetryError);
  EXPECT_NO_THROW(diagonalize_normal(tiny, {{0, 2}, {1, 3}}, 1.0));
  EXPECT_THROW(diagonalize_normal(tiny, {{0, 2}, {1, 3}}, 1e-8), SymmetryError);
  z(0, 1) = 1.0;
  z(1, 0) = 1.0;
  EXPECT_THROW(diagonalize_normal(z, {{0, 2}, {1, 3}}), SymmetryError);
}

TEST(SumOfSquares, TakagiReconstructsTensorAndOperator) {
  std::mt19937_64 rng(8);
  for (std::size_t n : {2u, 3u, 4u}) {
    const SosCase c = make_case(n, rng);
    const auto factors = takagi_sos(c.cc.tensor);
    EXPECT_LT(oracle::rel_elementwise(reconstruct(factors, n), c.cc.tensor), 1e-10);
    oracle::JordanWigner jw(n);
    Eigen::MatrixXcd approx = -jw.one_body(c.cc.correction.S);
    for (const auto& f : factors) approx += jw.charge_charge(oracle::factor_tensor(f.mu, f.J));
    EXPECT_LT(oracle::rel(approx, jw.ladder(c.ladder)), 1e-10);
  }
}

TEST(SumOfSquares, SvdReconstructsTensorAndOperator) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {2u, 3u, 4u}) {
    const SosCase c = make_case(n, rng);
    const auto factors = svd_sos(c.cc.tensor);
    EXPECT_LT(oracle::rel_elementwise(reconstruct(factors, n), c.cc.tensor), 1e-10);
    oracle::JordanWigner jw(n);
    Eigen::MatrixXcd approx = -jw.one_body(c.cc.correction.S);
    for (const auto& f : factors) approx += jw.charge_charge(oracle::factor_tensor(f.mu, f.J));
    EXPECT_LT(oracle::rel(approx, jw.ladder(c.ladder)), 1e-10);
  }
}

TEST(SumOfSquares, HermitianAndGeneralTensors) {
  std::mt19937_64 rng(10);
  const CoeffTensor4 s = oracle::random_symmetric_cc(3, rng);
  const CoeffTensor4 adj = oracle::adjoint_cc(s);
  const CoeffTensor4 herm(3, Convention::ChargeCharge, 0.5 * (s.data() + adj.data()));
  EXPECT_EQ(detect_parity(herm), OperatorParity::Hermitian);
  EXPECT_EQ(detect_parity(s), OperatorParity::General);
  for (const CoeffTensor4* t : {&herm, &s}) {
    EXPECT_LT(oracle::rel_elementwise(reconstruct(takagi_sos(*t), 3), *t), 1e-10);
    EXPECT_LT(oracle::rel_elementwise(reconstruct(svd_sos(*t), 3), *t), 1e-10);
  }
}

TEST(SumOfSquares, AnalyticFactorsHaveRankOneJ) {
  std::mt19937_64 rng(11);
  const SosCase c = make_case(4, rng);
  for (const auto& f : takagi_sos(c.cc.tensor)) EXPECT_LT(rank_one_defect(f.J), 1e-10);
  for (const auto& f : svd_sos(c.cc.tensor)) EXPECT_LT(rank_one_defect(f.J), 1e-10);
}

TEST(SumOfSquares, FactorsAreUnitaryAndTagged) {
  std::mt19937_64 rng(12);
  const SosCase c = make_case(3, rng);
  for (const auto& f : takagi_sos(c.cc.tensor)) {
    EXPECT_EQ(f.origin, FactorOrigin::Takagi);
    EXPECT_LT((f.mu.adjoint() * f.mu - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-12);
  }
  for (const auto& f : svd_sos(c.cc.tensor)) EXPECT_EQ(f.origin, FactorOrigin::Svd);
}

TEST(SumOfSquares, TruncationErrorDecreases) {
  std::mt19937_64 rng(13);
  const SosCase c = make_case(4, rng);
  double previous = c.cc.tensor.norm() * (1 + 1e-12);
  const auto all = takagi_intermediates(c.cc.tensor, OperatorParity::Antihermitian);
  for (int k = 1; k <= static_cast<int>(all.sigma.size()); ++k) {
    const double err = (reconstruct(takagi_sos(c.cc.tensor, {}, k), 4) - c.cc.tensor).norm();
    EXPECT_LE(err, previous * (1 + 1e-10));
    previous = err;
  }
  EXPECT_LT(previous, 1e-10 * c.cc.tensor.norm());
}

TEST(SumOfSquares, ZeroTensorGivesNoFactors) {
  const CoeffTensor4 z(3, Convention::ChargeCharge);
  EXPECT_TRUE(takagi_sos(z).empty());
  EXPECT_TRUE(svd_sos(z).empty());
}

TEST(SumOfSquares, RejectsAsymmetricSupermatrix) {
  std::mt19937_64 rng(14);
  const CoeffTensor4 t = oracle::random_tensor(3, Convention::ChargeCharge, rng);
  const CoeffTensor4 adj = oracle::adjoint_cc(t);
  const CoeffTensor4 anti(3, Convention::ChargeCharge, 0.5 * (t.data() - adj.data()));
  EXPECT_THROW(takagi_sos(anti), SymmetryError);
  EXPECT_THROW(svd_sos(anti), SymmetryError);
}

TEST(SumOfSquares, RankOneFactorGivesNormalOperatorSquare) {
  std::mt19937_64 rng(15);
  const SosCase c = make_case(3, rng);
  oracle::JordanWigner jw(3);
  for (const auto& f : takagi_sos(c.cc.tensor)) {
    const NormalOperatorCoeffs z = factor_to_normal_operator(f);
    const Eigen::MatrixXcd Z = jw.one_body(z.z);
    EXPECT_LT(oracle::rel(Z * Z, jw.charge_charge(factor_tensor(f))), 1e-10);
  }
  SOSFactor wide{Eigen::MatrixXcd::Identity(3, 3), Eigen::MatrixXcd::Identity(3, 3)};
  EXPECT_THROW(factor_to_normal_operator(wide), DecompositionError);
}

TEST(SumOfSquares, SectorsKeepFactorsLocal) {
  // Operator acting on modes {0,2} only: every factor's rotation stays there.
  std::mt19937_64 rng(16);
  const CoeffTensor4 a = oracle::random_antihermitian_ladder(2, rng);
  CoeffTensor4 big(4, Convention::PqrsLadder);
  const std::size_t map[2] = {0, 2};
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 0; s < 2; ++s) big(map[p], map[q], map[r], map[s]) = a(p, q, r, s);
  const ChargeChargeForm cc = normal_order_to_charge_charge(big);
  const Sectors sectors = {{0, 2}, {1, 3}};
  const auto factors = takagi_sos(cc.tensor, sectors);
  ASSERT_FALSE(factors.empty());
  for (const auto& f : factors)
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        if (i % 2 != k % 2) EXPECT_EQ(std::abs(f.mu(i, k)), 0.0);
  EXPECT_LT(oracle::rel_elementwise(reconstruct(factors, 4), cc.tensor), 1e-10);
}
