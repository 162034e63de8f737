#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "sos/error.hpp"
#include "sos/io.hpp"
#include "sos/tensor.hpp"

using namespace sos;

namespace {

std::mt19937_64 rng_for(int seed) { return std::mt19937_64(static_cast<std::uint64_t>(seed)); }

}  // namespace

TEST(Tensor, ConventionNamesRoundTrip) {
  for (Convention c : {Convention::PqrsLadder, Convention::ChargeCharge, Convention::HermitianChemist})
    EXPECT_EQ(convention_from_string(to_string(c)), c);
  EXPECT_THROW(convention_from_string("physicist"), ConventionError);
}

TEST(Tensor, RejectsWrongDataLength) {
  EXPECT_THROW(CoeffTensor4(3, Convention::ChargeCharge, Eigen::VectorXcd::Zero(80)), ShapeError);
}

TEST(Tensor, AdditionChecksConventionAndShape) {
  CoeffTensor4 a(2, Convention::ChargeCharge), b(3, Convention::ChargeCharge), c(2, Convention::PqrsLadder);
  EXPECT_THROW(a + b, ShapeError);
  EXPECT_THROW(a + c, ConventionError);
}

TEST(Tensor, SupermatrixReshapeRoundTrip) {
  auto rng = rng_for(1);
  const CoeffTensor4 t = oracle::random_tensor(4, Convention::ChargeCharge, rng);
  const SuperMatrix m = reshape_to_supermatrix(t);
  ASSERT_EQ(m.mat.rows(), 16);
  EXPECT_EQ(m.mat(1 * 4 + 2, 3 * 4 + 0), t(1, 2, 3, 0));
  const CoeffTensor4 back = from_supermatrix(m);
  EXPECT_EQ((back.data() - t.data()).norm(), 0.0);
}

TEST(Tensor, ReshapeRejectsLadderConvention) {
  CoeffTensor4 a(2, Convention::PqrsLadder);
  EXPECT_THROW(reshape_to_supermatrix(a), ConventionError);
}

TEST(Tensor, NormalOrderingPreservesOperator) {
  for (int seed = 0; seed < 4; ++seed) {
    auto rng = rng_for(10 + seed);
    const std::size_t n = 3 + static_cast<std::size_t>(seed % 2);
    const CoeffTensor4 a = oracle::random_tensor(n, Convention::PqrsLadder, rng);
    const ChargeChargeForm cc = normal_order_to_charge_charge(a);
    oracle::JordanWigner jw(n);
    const Eigen::MatrixXcd lhs = jw.ladder(a);
    const Eigen::MatrixXcd rhs = jw.charge_charge(cc.tensor) - jw.one_body(cc.correction.S);
    EXPECT_LT(oracle::rel(rhs, lhs), 1e-12) << "seed " << seed;
  }
}

TEST(Tensor, InverseReorderingPreservesOperator) {
  auto rng = rng_for(20);
  const CoeffTensor4 k = oracle::random_tensor(3, Convention::ChargeCharge, rng);
  const LadderForm lf = charge_charge_to_ladder(k);
  oracle::JordanWigner jw(3);
  EXPECT_LT(oracle::rel(jw.ladder(lf.tensor) + jw.one_body(lf.one_body.S), jw.charge_charge(k)), 1e-12);
}

TEST(Tensor, ReorderingRoundTripsOnTensors) {
  auto rng = rng_for(21);
  const CoeffTensor4 a = oracle::random_tensor(3, Convention::PqrsLadder, rng);
  const ChargeChargeForm cc = normal_order_to_charge_charge(a);
  const LadderForm back = charge_charge_to_ladder(cc.tensor);
  EXPECT_LT(oracle::rel(back.tensor, a), 1e-14);
  EXPECT_LT(oracle::rel(back.one_body.S, cc.correction.S), 1e-14);
}

TEST(Tensor, ReorderingChecksConvention) {
  CoeffTensor4 cc(2, Convention::ChargeCharge), ld(2, Convention::PqrsLadder);
  EXPECT_THROW(normal_order_to_charge_charge(cc), ConventionError);
  EXPECT_THROW(charge_charge_to_ladder(ld), ConventionError);
  EXPECT_THROW(antisymmetrize(cc), ConventionError);
}

TEST(Tensor, AdjointMatchesOperatorAdjoint) {
  auto rng = rng_for(30);
  oracle::JordanWigner jw(3);
  for (Convention c : {Convention::ChargeCharge, Convention::PqrsLadder}) {
    const CoeffTensor4 t = oracle::random_tensor(3, c, rng);
    EXPECT_LT(oracle::rel(jw.operator_of(adjoint(t)), jw.operator_of(t).adjoint()), 1e-12);
  }
}

TEST(Tensor, AntisymmetrizeKeepsOperator) {
  auto rng = rng_for(31);
  const CoeffTensor4 a = oracle::random_tensor(3, Convention::PqrsLadder, rng);
  const CoeffTensor4 s = antisymmetrize(a);
  oracle::JordanWigner jw(3);
  EXPECT_LT(oracle::rel(jw.ladder(s), jw.ladder(a)), 1e-12);
  EXPECT_TRUE(verify_symmetries(s).antisymmetric);
  EXPECT_FALSE(verify_symmetries(a).antisymmetric);
}

TEST(Tensor, SymmetrizeSupermatrixKeepsOperator) {
  auto rng = rng_for(32);
  const CoeffTensor4 t = oracle::random_tensor(3, Convention::ChargeCharge, rng);
  const ChargeChargeForm sym = symmetrize_supermatrix(t);
  const Eigen::MatrixXcd m = reshape_to_supermatrix(sym.tensor).mat;
  EXPECT_LT((m - m.transpose()).norm(), 1e-13);
  oracle::JordanWigner jw(3);
  EXPECT_LT(oracle::rel(jw.charge_charge(sym.tensor) - jw.one_body(sym.correction.S), jw.charge_charge(t)), 1e-12);
}

TEST(Tensor, AntisymmetricLadderGivesSymmetricSupermatrix) {
  auto rng = rng_for(33);
  const CoeffTensor4 a = oracle::random_antihermitian_ladder(4, rng);
  const ChargeChargeForm cc = normal_order_to_charge_charge(a);
  const SymmetryReport r = verify_symmetries(cc.tensor);
  EXPECT_TRUE(r.complex_symmetric);
  EXPECT_TRUE(r.antihermitian);
  EXPECT_FALSE(r.hermitian);
}

TEST(Tensor, FactorTensorMatchesLoops) {
  auto rng = rng_for(40);
  SOSFactor f;
  f.mu = oracle::unitary(4, rng);
  f.J = oracle::gaussian(4, 4, rng);
  EXPECT_LT(oracle::rel(factor_tensor(f), oracle::factor_tensor(f.mu, f.J)), 1e-13);
}

TEST(Tensor, FactorOperatorIsRotatedChargeProduct) {
  auto rng = rng_for(41);
  SOSFactor f;
  f.mu = oracle::unitary(3, rng);
  f.J = oracle::gaussian(3, 3, rng);
  oracle::JordanWigner jw(3);
  // ñ_k = Σ_pr mu_pk conj(mu_rk) a†_p a_r
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(jw.dim(), jw.dim());
  std::vector<Eigen::MatrixXcd> nt;
  for (int k = 0; k < 3; ++k) nt.push_back(jw.one_body(f.mu.col(k) * f.mu.col(k).adjoint()));
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) expected += f.J(k, l) * nt[k] * nt[l];
  EXPECT_LT(oracle::rel(jw.charge_charge(factor_tensor(f)), expected), 1e-12);
}

TEST(Tensor, ReconstructEmptyListIsZero) {
  const CoeffTensor4 z = reconstruct({}, 3);
  EXPECT_EQ(z.modes(), 3u);
  EXPECT_EQ(z.norm(), 0.0);
}

TEST(Tensor, ReconstructRejectsMixedSizes) {
  SOSFactor a{Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
  SOSFactor b{Eigen::MatrixXcd::Identity(3, 3), Eigen::MatrixXcd::Zero(3, 3)};
  EXPECT_THROW(reconstruct({a, b}, 2), ShapeError);
}

TEST(Tensor, ResidualMetricsOfPlantedRank) {
  auto rng = rng_for(50);
  SOSFactor f{oracle::unitary(3, rng), Eigen::MatrixXcd::Zero(3, 3)};
  const Eigen::VectorXcd lam = oracle::gaussian(3, 1, rng);
  f.J = lam * lam.transpose();
  const CoeffTensor4 t = factor_tensor(f);
  const CoeffTensor4 zero(3, Convention::ChargeCharge);
  const ResidualMetrics full = residual_metrics(t, zero);
  EXPECT_NEAR(full.l2, t.norm(), 1e-12);
  EXPECT_NEAR(full.mad, t.data().cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(full.takagi_rank, 1);
  const ResidualMetrics none = residual_metrics(t, t);
  EXPECT_EQ(none.l2, 0.0);
  EXPECT_EQ(none.takagi_rank, 0);
}

TEST(Tensor, DoublesEnergyMatchesFixtureReference) {
  const auto meta = nlohmann::json::parse(io::read_text(oracle::fixture_dir() / "fixtures.json"));
  for (const char* name : {"hf_sto3g", "h4_631g", "o2_sto3g"}) {
    const auto& m = meta.at(name);
    const CoeffTensor4 gen = io::read_tensor(oracle::fixture_dir() / m.at("generator").get<std::string>());
    const CoeffTensor4 v = io::read_tensor(oracle::fixture_dir() / m.at("energy_integrals").get<std::string>());
    const double e = cc_doubles_energy(doubles_amplitudes(gen), v);
    EXPECT_NEAR(e, m.at("e_doubles_ab").get<double>(), 1e-9) << name;
  }
}

TEST(Tensor, DoublesAmplitudesAreAntisymmetric) {
  auto rng = rng_for(60);
  const CoeffTensor4 t = oracle::random_antihermitian_cc(4, rng);
  const CoeffTensor4 t2 = doubles_amplitudes(t);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
          EXPECT_NEAR(std::abs(t2(i, j, a, b) + t2(j, i, a, b)), 0.0, 1e-12);
          EXPECT_NEAR(std::abs(t2(i, j, a, b) + t2(i, j, b, a)), 0.0, 1e-12);
        }
}
