#include <iostream>
#include <json.hpp>

#include "commands.hpp"
#include "sos/decompositions.hpp"
#include "sos/eri_compression.hpp"
#include "sos/error.hpp"
#include "sos/fock_oracle.hpp"
#include "sos/io.hpp"
#include "sos/spin_blocks.hpp"
#include "sos/unitary_compression.hpp"

namespace sos::cli {

namespace {

using json = nlohmann::json;

enum class Method { Takagi, Svd, Uc, UcTakagi, Cholesky, Eri };

Method method_from_string(const std::string& s) {
  if (s == "takagi") return Method::Takagi;
  if (s == "svd") return Method::Svd;
  if (s == "uc") return Method::Uc;
  if (s == "uc-takagi") return Method::UcTakagi;
  if (s == "cholesky") return Method::Cholesky;
  if (s == "eri") return Method::Eri;
  throw Error("unknown method '" + s + "'");
}

bool is_eri(Method m) { return m == Method::Cholesky || m == Method::Eri; }

std::string effective_init(const DecomposeArgs& a, Method m) {
  if (m != Method::Uc && m != Method::UcTakagi && m != Method::Eri) return "";
  if (!a.init.empty()) return a.init;
  return m == Method::Uc ? "random" : "takagi-seed";
}

// Charge-charge tensor with a symmetric geminal matrix plus the one-body term
// split off on the way: operator(input) = target − S.
struct Prepared {
  CoeffTensor4 target;
  Eigen::MatrixXcd S;
};

Prepared prepare(const CoeffTensor4& input, bool sz_adapted) {
  const auto n = static_cast<Eigen::Index>(input.modes());
  Prepared p{input.with_convention(Convention::ChargeCharge), Eigen::MatrixXcd::Zero(n, n)};
  if (input.convention() == Convention::PqrsLadder) {
    const ChargeChargeForm f = normal_order_to_charge_charge(input);
    p.target = f.tensor;
    p.S = f.correction.S;
  }
  if (sz_adapted) {
    const ChargeChargeForm f = spin_canonicalize(p.target);
    p.target = f.tensor;
    p.S += f.correction.S;
  }
  const ChargeChargeForm f = symmetrize_supermatrix(p.target);
  p.target = f.tensor;
  p.S += f.correction.S;
  return p;
}

CompressionConfig compression_config(const DecomposeArgs& a, Method m) {
  CompressionConfig c;
  c.threshold = a.threshold;
  c.max_factors = a.max_factors;
  c.seed = a.seed;
  c.restarts = a.restarts;
  c.init = init_mode_from_string(effective_init(a, m));
  if (m == Method::UcTakagi && c.init != InitMode::TakagiSeed)
    throw Error("--method uc-takagi implies --init takagi-seed");
  if (c.init == InitMode::Random && c.restarts < 1)
    throw Error("random initialization needs --restarts >= 1");
  return c;
}

struct Outcome {
  std::vector<SOSFactor> factors;
  CompressionStatus status = CompressionStatus::ThresholdMet;
  std::string diagnostic;
};

CompressionStatus combine(const std::vector<CompressionReport>& reports, std::string* diagnostic) {
  CompressionStatus s = CompressionStatus::ThresholdMet;
  for (const auto& r : reports) {
    if (r.status == CompressionStatus::OptimizerFailure) {
      *diagnostic = r.diagnostic;
      return r.status;
    }
    if (r.status == CompressionStatus::MaxFactors) s = r.status;
  }
  return s;
}

// Keeps the shortest prefix of an analytic factor list whose residual is below
// the threshold, capped at max_factors.
Outcome truncate_prefix(std::vector<SOSFactor> all, const CoeffTensor4& target, const DecomposeArgs& a) {
  Outcome out;
  CoeffTensor4 acc(target.modes(), Convention::ChargeCharge);
  std::size_t k = 0;
  while ((target - acc).norm() >= a.threshold) {
    if (k == all.size() || static_cast<int>(k) >= a.max_factors) {
      out.status = CompressionStatus::MaxFactors;
      break;
    }
    acc.data() += factor_tensor(all[k]).data();
    ++k;
  }
  all.resize(k);
  out.factors = std::move(all);
  return out;
}

Outcome run_method(Method m, const Prepared& p, const CoeffTensor4& input, const DecomposeArgs& a) {
  Outcome out;
  if (m == Method::Cholesky) return truncate_prefix(cholesky_baseline(input), p.target, a);
  if (m == Method::Eri) {
    const CompressionResult r = compress_eri(input, compression_config(a, Method::Eri));
    out.factors = r.factors;
    out.status = r.report.status;
    out.diagnostic = r.report.diagnostic;
    return out;
  }
  const bool uc = m == Method::Uc || m == Method::UcTakagi;
  if (a.sz_adapted) {
    const SpinBlockedSuperMatrix b = partition_by_sz(p.target);
    if (uc) {
      const BlockedDecomposition d = decompose_blocked(b, BlockMethod::Uc, compression_config(a, m));
      out.factors = d.factors;
      out.status = combine(d.reports, &out.diagnostic);
      return out;
    }
    const BlockMethod bm = m == Method::Takagi ? BlockMethod::Takagi : BlockMethod::Svd;
    return truncate_prefix(decompose_blocked(b, bm).factors, p.target, a);
  }
  if (uc) {
    const CompressionResult r = greedy_compress(p.target, compression_config(a, m));
    out.factors = r.factors;
    out.status = r.report.status;
    out.diagnostic = r.report.diagnostic;
    return out;
  }
  return truncate_prefix(m == Method::Takagi ? takagi_sos(p.target) : svd_sos(p.target), p.target, a);
}

std::vector<io::ReportRow> report_rows(const std::vector<SOSFactor>& factors, const CoeffTensor4& target,
                                       const std::optional<CoeffTensor4>& integrals) {
  std::optional<double> e_ref;
  if (integrals) e_ref = cc_doubles_energy(doubles_amplitudes(target), *integrals);
  std::vector<io::ReportRow> rows;
  CoeffTensor4 acc(target.modes(), Convention::ChargeCharge);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    acc.data() += factor_tensor(factors[k]).data();
    const ResidualMetrics m = residual_metrics(target, acc);
    io::ReportRow row{static_cast<int>(k), m.l2, m.mad, m.takagi_rank, factors[k].J.squaredNorm(), std::nullopt};
    if (e_ref) row.cum_cc_energy_error = std::abs(cc_doubles_energy(doubles_amplitudes(acc), *integrals) - *e_ref);
    rows.push_back(row);
  }
  return rows;
}

json row_json(const io::ReportRow& r) {
  json j{{"factor_index", r.factor_index},
         {"residual_l2", r.residual_l2},
         {"residual_mad", r.residual_mad},
         {"residual_takagi_rank", r.residual_takagi_rank},
         {"objective", r.objective}};
  if (r.cum_cc_energy_error) j["cum_cc_energy_error"] = *r.cum_cc_energy_error;
  return j;
}

}  // namespace

int run_decompose(const DecomposeArgs& a) {
  const Method method = method_from_string(a.method);
  const Convention fallback = a.convention.empty() ? Convention::ChargeCharge : convention_from_string(a.convention);
  const CoeffTensor4 input = io::read_tensor(a.input, fallback);
  if (is_eri(method) && input.convention() != Convention::HermitianChemist)
    throw ConventionError("--method " + a.method + " needs a hermitian-chemist ERI tensor, got " +
                          std::string(to_string(input.convention())));
  if (is_eri(method) && a.sz_adapted) throw Error("--sz-adapted does not apply to ERI methods");
  if (is_eri(method) && !a.energy_fixture.empty()) throw Error("--energy-fixture does not apply to ERI methods");
  if (!(a.threshold > 0)) throw Error("--threshold must be positive");
  if (a.max_factors < 0) throw Error("--max-factors must be nonnegative");
  if (a.verify) fock::check_oracle_size(input.modes());

  std::optional<CoeffTensor4> integrals;
  if (!a.energy_fixture.empty()) {
    integrals = io::read_tensor(a.energy_fixture, Convention::PqrsLadder);
    if (integrals->modes() != input.modes())
      throw ShapeError("--energy-fixture has " + std::to_string(integrals->modes()) + " modes, input has " +
                       std::to_string(input.modes()));
  }

  const Prepared prepared = is_eri(method)
                                ? Prepared{input.with_convention(Convention::ChargeCharge),
                                           Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(input.modes()),
                                                                  static_cast<Eigen::Index>(input.modes()))}
                                : prepare(input, a.sz_adapted);
  const Outcome outcome = run_method(method, prepared, input, a);
  const std::vector<io::ReportRow> rows = report_rows(outcome.factors, prepared.target, integrals);

  std::filesystem::create_directories(a.out_dir);
  const auto factors_path = a.out_dir / "factors.json";
  const auto report_path = a.out_dir / "report.csv";
  const auto one_body_path = a.out_dir / "one_body.ften";
  const auto manifest_path = a.out_dir / "manifest.json";
  io::write_factors(factors_path, outcome.factors, {is_eri(method)});
  io::write_text(report_path, io::report_csv(rows));
  io::write_matrix(one_body_path, prepared.S);

  json manifest;
  manifest["version"] = SOS_VERSION;
  manifest["command"] = "decompose";
  manifest["input"] = a.input.string();
  manifest["method"] = a.method;
  manifest["seed"] = a.seed;
  manifest["config"] = {{"threshold", a.threshold},
                        {"max_factors", a.max_factors},
                        {"init", effective_init(a, method)},
                        {"restarts", a.restarts},
                        {"sz_adapted", a.sz_adapted},
                        {"verify", a.verify},
                        {"tol", a.tol},
                        {"energy_fixture", a.energy_fixture.string()},
                        {"convention", std::string(to_string(input.convention()))}};
  manifest["status"] = std::string(to_string(outcome.status));
  if (!outcome.diagnostic.empty()) manifest["diagnostic"] = outcome.diagnostic;
  manifest["factor_count"] = outcome.factors.size();
  manifest["initial_l2"] = prepared.target.norm();
  manifest["one_body_norm"] = prepared.S.norm();
  manifest["rows"] = json::array();
  for (const auto& r : rows) manifest["rows"].push_back(row_json(r));
  manifest["artifacts"] = {{"factors", factors_path.string()},
                           {"report", report_path.string()},
                           {"one_body", one_body_path.string()},
                           {"manifest", manifest_path.string()}};

  if (a.verify) {
    const std::optional<OneBodyCorrection> s =
        prepared.S.norm() > 0 ? std::optional<OneBodyCorrection>{{prepared.S}} : std::nullopt;
    const fock::VerifyResult v = fock::verify_factorization(input, s, outcome.factors, fock::VerifyMode::ExactSum);
    manifest["verify"] = {{"op_error", v.op_error}, {"tol", a.tol}, {"passed", v.op_error < a.tol}};
    std::cout << "op_error " << v.op_error << "\n";
  }
  io::write_text(manifest_path, manifest.dump(2) + "\n");

  const double final_l2 = rows.empty() ? prepared.target.norm() : rows.back().residual_l2;
  std::cout << a.method << ": " << outcome.factors.size() << " factors, residual_l2 " << final_l2 << ", "
            << to_string(outcome.status) << "\n";
  switch (outcome.status) {
    case CompressionStatus::ThresholdMet:
      return kOk;
    case CompressionStatus::MaxFactors:
      return kMaxFactors;
    case CompressionStatus::OptimizerFailure:
      std::cerr << "error: " << outcome.diagnostic << "\n";
      return kFailure;
  }
  return kFailure;
}

}  // namespace sos::cli
