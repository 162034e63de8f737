#include <iostream>

#include "commands.hpp"
#include "sos/circuit.hpp"
#include "sos/error.hpp"
#include "sos/io.hpp"

namespace sos::cli {

int run_compile(const CompileArgs& a) {
  const std::vector<SOSFactor> factors = io::read_factors(a.factors);
  std::optional<OneBodyCorrection> s;
  if (!a.one_body.empty()) {
    const Eigen::MatrixXcd S = io::read_matrix(a.one_body);
    if (S.norm() > 0) s = OneBodyCorrection{S};
  }
  CompileOptions options;
  options.merge = !a.no_merge;
  options.separate_phase_layers = a.separate_phases;
  options.evolution_time = a.evolution_time;
  const CircuitIR ir = merge_and_schedule(factors, s, options);

  std::filesystem::create_directories(a.out_dir);
  io::write_text(a.out_dir / "circuit.json", io::ir_json_dump(ir));
  io::write_text(a.out_dir / "circuit_stats.csv", io::stats_csv(ir));
  std::cout << "layers " << ir.layers.size() << ", gates " << ir.gate_count << ", depth " << ir.depth << "\n";
  return kOk;
}

}  // namespace sos::cli
