#include "sos/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sos/error.hpp"

namespace sos::io {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'F', 'T', 'E', 'N', 'B', 'I', 'N', '1'};

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > in.size()) throw FormatError("binary FTEN file is truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}

json array_json(const FtenArray& a) {
  json doc;
  doc["version"] = 1;
  doc["order"] = a.dims.size();
  doc["dims"] = a.dims;
  doc["layout"] = "row-major";
  doc["convention"] = a.convention;
  doc["dtype"] = "complex128";
  json data = json::array();
  for (Eigen::Index i = 0; i < a.data.size(); ++i) {
    data.push_back(a.data[i].real());
    data.push_back(a.data[i].imag());
  }
  doc["data"] = std::move(data);
  return doc;
}

FtenArray array_from_json(const json& doc) {
  try {
    if (doc.at("version").get<int>() != 1) throw FormatError("unsupported FTEN version");
    FtenArray a;
    a.dims = doc.at("dims").get<std::vector<std::size_t>>();
    if (doc.contains("order") && doc.at("order").get<std::size_t>() != a.dims.size())
      throw FormatError("FTEN order does not match dims");
    if (doc.contains("layout") && doc.at("layout").get<std::string>() != "row-major")
      throw FormatError("FTEN layout must be row-major");
    if (doc.contains("dtype") && doc.at("dtype").get<std::string>() != "complex128")
      throw FormatError("FTEN dtype must be complex128");
    a.convention = doc.value("convention", std::string{});
    const auto& data = doc.at("data");
    const std::size_t count = product(a.dims);
    if (data.size() != 2 * count)
      throw FormatError("FTEN data has " + std::to_string(data.size()) + " reals, expected " + std::to_string(2 * count));
    a.data.resize(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i)
      a.data[static_cast<Eigen::Index>(i)] = cplx(data[2 * i].get<double>(), data[2 * i + 1].get<double>());
    return a;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed FTEN document: ") + e.what());
  }
}

json factor_json(const SOSFactor& f, const FactorFileOptions& options) {
  json j;
  j["mu"] = array_json(to_ften(f.mu));
  j["J"] = array_json(to_ften(f.J));
  j["tag"] = std::string(to_string(f.origin));
  j["weight"] = 1.0;
  if (!f.sector.empty()) j["sector"] = f.sector;
  if (f.simultaneous_group >= 0) j["simultaneous_group"] = f.simultaneous_group;
  if (options.real) j["real"] = true;
  return j;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string ften_json_dump(const FtenArray& a) { return array_json(a).dump(); }

FtenArray ften_json_parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("FTEN file is not valid JSON: ") + e.what());
  }
  return array_from_json(doc);
}

std::string ften_binary_dump(const FtenArray& a) {
  std::string out(kMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(a.dims.size()));
  for (auto d : a.dims) put_u32(out, static_cast<std::uint32_t>(d));
  for (Eigen::Index i = 0; i < a.data.size(); ++i) {
    put_f64(out, a.data[i].real());
    put_f64(out, a.data[i].imag());
  }
  return out;
}

FtenArray ften_binary_parse(const std::string& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw FormatError("missing FTENBIN1 magic");
  std::size_t pos = 8;
  const auto order = static_cast<std::size_t>(get_le(bytes, pos, 4));
  if (order != 2 && order != 4) throw FormatError("binary FTEN order must be 2 or 4");
  FtenArray a;
  for (std::size_t i = 0; i < order; ++i) a.dims.push_back(static_cast<std::size_t>(get_le(bytes, pos, 4)));
  const std::size_t count = product(a.dims);
  if (bytes.size() != pos + 16 * count) throw FormatError("binary FTEN payload size does not match dims");
  a.data.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const double re = std::bit_cast<double>(get_le(bytes, pos, 8));
    const double im = std::bit_cast<double>(get_le(bytes, pos, 8));
    a.data[static_cast<Eigen::Index>(i)] = cplx(re, im);
  }
  return a;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

FtenArray read_ften(const std::filesystem::path& path) {
  const std::string bytes = read_text(path);
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 8) == 0) return ften_binary_parse(bytes);
  return ften_json_parse(bytes);
}

void write_ften(const std::filesystem::path& path, const FtenArray& a, bool binary) {
  write_text(path, binary ? ften_binary_dump(a) : ften_json_dump(a));
}

FtenArray to_ften(const CoeffTensor4& t) {
  const std::size_t n = t.modes();
  return FtenArray{{n, n, n, n}, std::string(to_string(t.convention())), t.data()};
}

FtenArray to_ften(const Eigen::MatrixXcd& m) {
  FtenArray a{{static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())}, "one-body", {}};
  a.data.resize(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.data[i * m.cols() + j] = m(i, j);
  return a;
}

CoeffTensor4 tensor_from_ften(const FtenArray& a, Convention fallback) {
  if (a.dims.size() != 4) throw FormatError("expected an order-4 FTEN array");
  const std::size_t n = a.dims[0];
  for (auto d : a.dims)
    if (d != n) throw FormatError("order-4 FTEN arrays must have equal dims");
  const Convention c = a.convention.empty() ? fallback : convention_from_string(a.convention);
  return CoeffTensor4(n, c, a.data);
}

Eigen::MatrixXcd matrix_from_ften(const FtenArray& a) {
  if (a.dims.size() != 2) throw FormatError("expected an order-2 FTEN array");
  const auto r = static_cast<Eigen::Index>(a.dims[0]), c = static_cast<Eigen::Index>(a.dims[1]);
  Eigen::MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = a.data[i * c + j];
  return m;
}

CoeffTensor4 read_tensor(const std::filesystem::path& path, Convention fallback) {
  return tensor_from_ften(read_ften(path), fallback);
}

void write_tensor(const std::filesystem::path& path, const CoeffTensor4& t, bool binary) {
  write_ften(path, to_ften(t), binary);
}

Eigen::MatrixXcd read_matrix(const std::filesystem::path& path) { return matrix_from_ften(read_ften(path)); }

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m) { write_ften(path, to_ften(m)); }

std::string factors_json_dump(const std::vector<SOSFactor>& factors, const FactorFileOptions& options) {
  json arr = json::array();
  for (const auto& f : factors) arr.push_back(factor_json(f, options));
  return arr.dump();
}

std::vector<SOSFactor> factors_json_parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("factor file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("factor file must hold a JSON array");
  std::vector<SOSFactor> out;
  std::size_t n = 0;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& j = doc[i];
    try {
      SOSFactor f;
      f.mu = matrix_from_ften(array_from_json(j.at("mu")));
      f.J = matrix_from_ften(array_from_json(j.at("J")));
      f.origin = origin_from_string(j.at("tag").get<std::string>());
      const double w = j.value("weight", 1.0);
      if (w != 1.0) f.J *= w;
      f.sector = j.value("sector", std::string{});
      f.simultaneous_group = j.value("simultaneous_group", -1);
      if (f.mu.rows() != f.mu.cols() || f.J.rows() != f.mu.rows() || f.J.cols() != f.mu.rows())
        throw FormatError("mu and J must be square and of equal size");
      if (i == 0) n = f.modes();
      if (f.modes() != n) throw FormatError("factors have inconsistent mode counts");
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw FormatError("factor " + std::to_string(i) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("factor " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SOSFactor> read_factors(const std::filesystem::path& path) { return factors_json_parse(read_text(path)); }

void write_factors(const std::filesystem::path& path, const std::vector<SOSFactor>& factors,
                   const FactorFileOptions& options) {
  write_text(path, factors_json_dump(factors, options));
}

std::string ir_json_dump(const CircuitIR& ir) {
  json doc;
  doc["version"] = kIrVersion;
  doc["n"] = ir.n;
  doc["gate_count"] = ir.gate_count;
  doc["depth"] = ir.depth;
  json layers = json::array();
  for (const auto& layer : ir.layers) {
    json l;
    if (const auto* g = std::get_if<GivensLayer>(&layer)) {
      l["type"] = "givens";
      json rots = json::array();
      for (const auto& r : g->network.rotations)
        rots.push_back({{"p", r.p}, {"q", r.q}, {"theta", r.theta}, {"phi", r.phi}, {"round", r.round}});
      l["rotations"] = std::move(rots);
      l["phases"] = vector_json(g->network.phases);
      l["rounds"] = g->network.rounds;
    } else if (const auto* c = std::get_if<ChargeLayer>(&layer)) {
      l["type"] = "charge";
      json cs = json::array();
      for (const auto& k : c->couplings)
        cs.push_back({{"p", k.p}, {"q", k.q}, {"angle", k.angle}, {"round", k.round}});
      l["couplings"] = std::move(cs);
      l["phases"] = vector_json(c->phases);
      l["rounds"] = c->rounds;
      l["schedule"] = "odd-even";
    } else if (const auto* p = std::get_if<PhaseLayer>(&layer)) {
      l["type"] = "phase";
      l["phases"] = vector_json(p->phases);
    }
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  json stats = json::array();
  for (const auto& s : ir.stats)
    stats.push_back({{"factor_index", s.factor_index}, {"gate_count", s.gate_count}, {"cumulative_depth", s.cumulative_depth}});
  doc["stats"] = std::move(stats);
  return doc.dump();
}

CircuitIR ir_json_parse(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("version").get<int>() != kIrVersion) throw FormatError("unsupported IR version");
    CircuitIR ir;
    ir.n = doc.at("n").get<std::size_t>();
    ir.gate_count = doc.at("gate_count").get<int>();
    ir.depth = doc.at("depth").get<int>();
    for (const auto& l : doc.at("layers")) {
      const std::string type = l.at("type").get<std::string>();
      if (type == "givens") {
        GivensNetwork net;
        net.n = ir.n;
        for (const auto& r : l.at("rotations"))
          net.rotations.push_back({r.at("p").get<int>(), r.at("q").get<int>(), r.at("theta").get<double>(),
                                   r.at("phi").get<double>(), r.at("round").get<int>()});
        net.phases = vector_from_json(l.at("phases"));
        net.rounds = l.at("rounds").get<int>();
        Eigen::MatrixXcd source = network_unitary(net);
        ir.layers.emplace_back(GivensLayer{std::move(net), std::move(source)});
      } else if (type == "charge") {
        ChargeLayer c;
        for (const auto& k : l.at("couplings"))
          c.couplings.push_back({k.at("p").get<int>(), k.at("q").get<int>(), k.at("angle").get<double>(),
                                 k.at("round").get<int>()});
        c.phases = vector_from_json(l.at("phases"));
        c.rounds = l.at("rounds").get<int>();
        ir.layers.emplace_back(std::move(c));
      } else if (type == "phase") {
        ir.layers.emplace_back(PhaseLayer{vector_from_json(l.at("phases"))});
      } else {
        throw FormatError("unknown IR layer type '" + type + "'");
      }
    }
    for (const auto& s : doc.at("stats"))
      ir.stats.push_back({s.at("factor_index").get<int>(), s.at("gate_count").get<int>(),
                          s.at("cumulative_depth").get<int>()});
    return ir;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed IR document: ") + e.what());
  }
}

std::string stats_csv(const CircuitIR& ir) {
  std::ostringstream os;
  os << "factor_index,gate_count,cumulative_depth\n";
  for (const auto& s : ir.stats) os << s.factor_index << ',' << s.gate_count << ',' << s.cumulative_depth << '\n';
  return os.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  const bool energy = !rows.empty() && rows.front().cum_cc_energy_error.has_value();
  std::ostringstream os;
  os << "factor_index,residual_l2,residual_mad,residual_takagi_rank,objective";
  if (energy) os << ",cum_cc_energy_error";
  os << '\n';
  for (const auto& r : rows) {
    os << r.factor_index << ',' << fmt(r.residual_l2) << ',' << fmt(r.residual_mad) << ',' << r.residual_takagi_rank
       << ',' << fmt(r.objective);
    if (energy) os << ',' << fmt(r.cum_cc_energy_error.value_or(0.0));
    os << '\n';
  }
  return os.str();
}

std::vector<ReportRow> report_csv_parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return {};
  const bool energy = line.find("cum_cc_energy_error") != std::string::npos;
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) throw FormatError("report row has too few columns: " + line);
    ReportRow r;
    r.factor_index = std::stoi(cells[0]);
    r.residual_l2 = std::stod(cells[1]);
    r.residual_mad = std::stod(cells[2]);
    r.residual_takagi_rank = std::stoi(cells[3]);
    r.objective = std::stod(cells[4]);
    if (energy && cells.size() > 5) r.cum_cc_energy_error = std::stod(cells[5]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace sos::io
