#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "sos/error.hpp"
#include "sos/io.hpp"

namespace sos::cli {

namespace {

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw FormatError("config key '" + key + "' must be a string, number or boolean");
}

}  // namespace

void apply_json_config(CLI::App& app, const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError(path.string() + ": config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = app.get_option_no_throw("--" + name);
    if (!opt) throw FormatError(path.string() + ": unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(scalar_text(value, key));
    opt->run_callback();
  }
}

}  // namespace sos::cli
