#include <iostream>

#include "commands.hpp"
#include "sos/error.hpp"
#include "sos/fock_oracle.hpp"
#include "sos/io.hpp"

namespace sos::cli {

int run_verify(const VerifyArgs& a) {
  const Convention fallback = a.convention.empty() ? Convention::ChargeCharge : convention_from_string(a.convention);
  const CoeffTensor4 input = io::read_tensor(a.input, fallback);
  fock::check_oracle_size(input.modes());
  const std::vector<SOSFactor> factors = io::read_factors(a.factors);
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].modes() != input.modes())
      throw ShapeError("factor " + std::to_string(i) + " has " + std::to_string(factors[i].modes()) +
                       " modes, tensor has " + std::to_string(input.modes()));
  std::optional<OneBodyCorrection> s;
  if (!a.one_body.empty()) {
    const Eigen::MatrixXcd S = io::read_matrix(a.one_body);
    if (S.norm() > 0) s = OneBodyCorrection{S};
  }
  const fock::VerifyResult r = fock::verify_factorization(
      input, s, factors, a.trotter ? fock::VerifyMode::Trotter : fock::VerifyMode::ExactSum);
  std::cout.precision(6);
  std::cout << "op_error " << std::scientific << r.op_error << "\n";
  if (a.trotter) std::cout << "trotter_error " << r.trotter_error << "\n";
  return r.op_error < a.tol ? kOk : kFailure;
}

}  // namespace sos::cli
