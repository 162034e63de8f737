#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sos/circuit.hpp"
#include "sos/tensor.hpp"
#include "sos/unitary_compression.hpp"

namespace sos::io {

/// Rank-2 or rank-4 array as read from an FTEN file.
struct FtenArray {
  std::vector<std::size_t> dims;
  std::string convention;  // "one-body" for order-2 arrays
  Eigen::VectorXcd data;
};

// JSON FTEN
std::string ften_json_dump(const FtenArray& a);
FtenArray ften_json_parse(const std::string& text);

// Binary FTEN ("FTENBIN1", u32 order, u32 dims, float64 re/im pairs, little endian).
std::string ften_binary_dump(const FtenArray& a);
FtenArray ften_binary_parse(const std::string& bytes);

/// Reads either variant, dispatching on the magic bytes.
FtenArray read_ften(const std::filesystem::path& path);
void write_ften(const std::filesystem::path& path, const FtenArray& a, bool binary = false);

FtenArray to_ften(const CoeffTensor4& t);
FtenArray to_ften(const Eigen::MatrixXcd& m);
/// Binary files carry no convention; `fallback` is used when the array has none.
CoeffTensor4 tensor_from_ften(const FtenArray& a, Convention fallback = Convention::ChargeCharge);
Eigen::MatrixXcd matrix_from_ften(const FtenArray& a);

CoeffTensor4 read_tensor(const std::filesystem::path& path,
                         Convention fallback = Convention::ChargeCharge);
void write_tensor(const std::filesystem::path& path, const CoeffTensor4& t, bool binary = false);
Eigen::MatrixXcd read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);

// Factor lists
struct FactorFileOptions {
  bool real = false;  // adds "real": true to every entry
};
std::string factors_json_dump(const std::vector<SOSFactor>& factors,
                              const FactorFileOptions& options = {});
std::vector<SOSFactor> factors_json_parse(const std::string& text);
std::vector<SOSFactor> read_factors(const std::filesystem::path& path);
void write_factors(const std::filesystem::path& path, const std::vector<SOSFactor>& factors,
                   const FactorFileOptions& options = {});

// Circuit IR
inline constexpr int kIrVersion = 1;
std::string ir_json_dump(const CircuitIR& ir);
CircuitIR ir_json_parse(const std::string& text);
std::string stats_csv(const CircuitIR& ir);

// Reports
struct ReportRow {
  int factor_index = 0;
  double residual_l2 = 0.0;
  double residual_mad = 0.0;
  int residual_takagi_rank = 0;
  double objective = 0.0;
  std::optional<double> cum_cc_energy_error;
};
std::string report_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> report_csv_parse(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sos::io
