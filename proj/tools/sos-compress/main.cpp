#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "sos/error.hpp"

int main(int argc, char** argv) {
  using namespace sos::cli;
  CLI::App app{"Sum-of-squares compression of two-body fermionic operators", "sos-compress"};
  app.set_version_flag("--version", SOS_VERSION);
  app.require_subcommand(1);

  DecomposeArgs d;
  std::string d_config;
  auto* dec = app.add_subcommand("decompose", "Factor a rank-4 tensor into sum-of-squares terms");
  dec->add_option("input", d.input, "FTEN tensor (JSON or binary)")->required()->check(CLI::ExistingFile);
  dec->add_option("--method", d.method, "takagi | svd | uc | uc-takagi | cholesky | eri")
      ->check(CLI::IsMember({"takagi", "svd", "uc", "uc-takagi", "cholesky", "eri"}))
      ->capture_default_str();
  dec->add_option("--threshold", d.threshold, "Stop once the residual l2 norm is below this")->capture_default_str();
  dec->add_option("--max-factors", d.max_factors, "Factor budget")->capture_default_str();
  dec->add_option("--seed", d.seed, "Seed for random restarts")->capture_default_str();
  dec->add_option("--init", d.init, "random | takagi-seed (default from the method)")
      ->check(CLI::IsMember({"random", "takagi-seed"}));
  dec->add_option("--restarts", d.restarts, "Random restarts per iteration")->capture_default_str();
  dec->add_flag("--sz-adapted", d.sz_adapted, "Decompose the Sz blocks separately");
  dec->add_flag("--verify", d.verify, "Check the factors against the dense Fock-space oracle");
  dec->add_option("--tol", d.tol, "Tolerance reported with --verify")->capture_default_str();
  dec->add_option("--energy-fixture", d.energy_fixture, "Antisymmetrized integrals for the energy column")
      ->check(CLI::ExistingFile);
  dec->add_option("--out-dir", d.out_dir, "Output directory")->capture_default_str();
  dec->add_option("--convention", d.convention, "Convention for binary inputs")
      ->check(CLI::IsMember({"pqrs-ladder", "charge-charge", "hermitian-chemist"}));
  dec->add_option("--config", d_config, "JSON file with defaults for the options above")->check(CLI::ExistingFile);

  CompileArgs c;
  double evolution_time = 0.0;
  auto* cmp = app.add_subcommand("compile", "Schedule factors into a layered circuit");
  cmp->add_option("factors", c.factors, "Factor JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("--one-body", c.one_body, "One-body correction FTEN")->check(CLI::ExistingFile);
  auto* t_opt = cmp->add_option("--evolution-time", evolution_time, "Compile exp(-i t H) for hermitian factors");
  cmp->add_flag("--no-merge", c.no_merge, "Keep one Givens layer pair per factor");
  cmp->add_flag("--separate-phases", c.separate_phases, "Emit diagonal terms as phase layers");
  cmp->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();

  VerifyArgs v;
  auto* ver = app.add_subcommand("oracle-verify", "Compare factors with the tensor in the dense Fock space");
  ver->add_option("input", v.input, "FTEN tensor")->required()->check(CLI::ExistingFile);
  ver->add_option("factors", v.factors, "Factor JSON")->required()->check(CLI::ExistingFile);
  ver->add_option("--one-body", v.one_body, "One-body correction FTEN")->check(CLI::ExistingFile);
  ver->add_option("--tol", v.tol, "Pass when op_error is below this")->capture_default_str();
  ver->add_flag("--trotter", v.trotter, "Also report the Trotter product error");
  ver->add_option("--convention", v.convention, "Convention for binary inputs")
      ->check(CLI::IsMember({"pqrs-ladder", "charge-charge", "hermitian-chemist"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kFailure;
  }

  try {
    if (dec->parsed()) {
      if (!d_config.empty()) apply_json_config(*dec, d_config);
      return run_decompose(d);
    }
    if (cmp->parsed()) {
      if (t_opt->count() > 0) c.evolution_time = evolution_time;
      return run_compile(c);
    }
    return run_verify(v);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kFailure;
}
