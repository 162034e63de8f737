#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace CLI {
class App;
}

namespace sos::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kMaxFactors = 2 };

struct DecomposeArgs {
  std::filesystem::path input;
  std::string method = "takagi";
  double threshold = 1e-5;
  int max_factors = 50;
  std::uint64_t seed = 7;
  std::string init;  // empty: taken from the method
  int restarts = 2;
  bool sz_adapted = false;
  bool verify = false;
  double tol = 1e-8;
  std::filesystem::path energy_fixture;
  std::filesystem::path out_dir = ".";
  std::string convention;  // for binary inputs
};

struct CompileArgs {
  std::filesystem::path factors;
  std::filesystem::path one_body;
  std::optional<double> evolution_time;
  bool no_merge = false;
  bool separate_phases = false;
  std::filesystem::path out_dir = ".";
};

struct VerifyArgs {
  std::filesystem::path input;
  std::filesystem::path factors;
  std::filesystem::path one_body;
  double tol = 1e-8;
  bool trotter = false;
  std::string convention;
};

int run_decompose(const DecomposeArgs& args);
int run_compile(const CompileArgs& args);
int run_verify(const VerifyArgs& args);

/// Fills options of `app` that were not given on the command line from a flat
/// JSON object whose keys are long option names without dashes.
void apply_json_config(CLI::App& app, const std::filesystem::path& path);

}  // namespace sos::cli
