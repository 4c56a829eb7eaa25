#include "hflag/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hflag/error.hpp"

namespace hflag {

namespace {

constexpr char kMagic[8] = {'H', 'F', 'L', 'A', 'G', 'B', 'I', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> b;
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw ConfigError("truncated binary container");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

void put_double(std::ostream& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }
double get_double(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

nlohmann::json axis_json(const Axis& a) { return {{"count", a.count()}, {"half_width", a.half_width()}}; }

Axis axis_from(const nlohmann::json& j) {
  return Axis(j.at("count").get<std::size_t>(), j.at("half_width").get<double>());
}

void require_kind(const Container& c, const char* kind) {
  const auto it = c.header.find("kind");
  if (it == c.header.end() || *it != kind)
    throw ConfigError(std::string("container is not a ") + kind);
}

void require_size(const Container& c, std::size_t n) {
  if (c.data.size() != n)
    throw ConfigError("container holds " + std::to_string(c.data.size()) + " values, header implies " +
                      std::to_string(n));
}

}  // namespace

ContainerFormat format_for_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0 ? ContainerFormat::Json
                                                                           : ContainerFormat::Binary;
}

void write_container(std::ostream& out, const Container& c, ContainerFormat format) {
  if (format == ContainerFormat::Json) {
    nlohmann::json j = c.header;
    j["format"] = "hflag";
    j["version"] = kVersion;
    auto& data = j["data"] = nlohmann::json::array();
    for (const Complex& z : c.data) data.push_back({z.real(), z.imag()});
    out << j.dump() << '\n';
    return;
  }
  const std::string header = c.header.dump();
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  put_le<std::uint64_t>(out, c.data.size());
  for (const Complex& z : c.data) {
    put_double(out, z.real());
    put_double(out, z.imag());
  }
}

Container read_container(std::istream& in) {
  Container c;
  const int first = in.peek();
  if (first == '{') {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed JSON container: ") + e.what());
    }
    if (j.value("format", "") != "hflag") throw ConfigError("JSON is not an hflag container");
    if (j.value("version", 0u) != kVersion) throw ConfigError("unsupported container version");
    for (const auto& z : j.at("data")) c.data.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    j.erase("data");
    j.erase("format");
    j.erase("version");
    c.header = std::move(j);
    return c;
  }
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw ConfigError("not an hflag container (bad magic)");
  if (get_le<std::uint32_t>(in) != kVersion) throw ConfigError("unsupported container version");
  const auto hlen = get_le<std::uint64_t>(in);
  if (hlen > (std::uint64_t{1} << 30)) throw ConfigError("implausible container header length");
  std::string header(hlen, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(hlen))) throw ConfigError("truncated binary container");
  try {
    c.header = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed container header: ") + e.what());
  }
  const auto n = get_le<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 34)) throw ConfigError("implausible container size");
  c.data.resize(n);
  for (auto& z : c.data) {
    const double re = get_double(in);
    z = {re, get_double(in)};
  }
  return c;
}

void save_container(const Container& c, const std::string& path) {
  const auto format = format_for_path(path);
  std::ofstream out(path, format == ContainerFormat::Binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot write " + path);
  write_container(out, c, format);
  if (!out) throw ConfigError("error writing " + path);
}

Container load_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  return read_container(in);
}

Container to_container(const SampledField& f) {
  Container c;
  c.header["kind"] = "field";
  auto& axes = c.header["axes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < f.rank(); ++i) {
    auto a = axis_json(f.axis(i));
    a["domain"] = f.domain(i) == Domain::Spatial ? "spatial" : "spectral";
    axes.push_back(std::move(a));
  }
  c.data.assign(f.values().begin(), f.values().end());
  return c;
}

SampledField field_from(const Container& c) {
  require_kind(c, "field");
  std::vector<Axis> axes;
  std::vector<Domain> domains;
  for (const auto& a : c.header.at("axes")) {
    axes.push_back(axis_from(a));
    const auto d = a.at("domain").get<std::string>();
    if (d != "spatial" && d != "spectral") throw ConfigError("unknown axis domain '" + d + "'");
    domains.push_back(d == "spatial" ? Domain::Spatial : Domain::Spectral);
  }
  SampledField f(axes, domains);
  require_size(c, f.size());
  std::copy(c.data.begin(), c.data.end(), f.values().begin());
  return f;
}

Container to_container(const FiberOperator& a) {
  Container c;
  c.header = {{"kind", "fiber-operator"},
              {"lambda", a.lambda},
              {"grid", axis_json(a.grid)},
              {"rows", a.matrix.rows()},
              {"cols", a.matrix.cols()}};
  c.data.reserve(a.matrix.size());
  for (Eigen::Index i = 0; i < a.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < a.matrix.cols(); ++j) c.data.push_back(a.matrix(i, j));
  return c;
}

FiberOperator fiber_operator_from(const Container& c) {
  require_kind(c, "fiber-operator");
  FiberOperator a;
  a.lambda = c.header.at("lambda").get<double>();
  a.grid = axis_from(c.header.at("grid"));
  const auto rows = c.header.at("rows").get<Eigen::Index>(), cols = c.header.at("cols").get<Eigen::Index>();
  if (rows != static_cast<Eigen::Index>(a.grid.count()) || cols != rows)
    throw DimensionError("fiber operator shape does not match its grid");
  require_size(c, static_cast<std::size_t>(rows * cols));
  a.matrix.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a.matrix(i, j) = c.data[static_cast<std::size_t>(i * cols + j)];
  return a;
}

Container to_container(const std::vector<SymbolGrid>& family, const std::string& name) {
  if (family.empty()) throw ConfigError("empty symbol family");
  Container c;
  std::vector<double> lambdas;
  for (const auto& s : family) {
    if (!(s.grid == family.front().grid)) throw DimensionError("symbol family mixes line grids");
    lambdas.push_back(s.lambda);
    for (Eigen::Index m = 0; m < s.values.rows(); ++m)
      for (Eigen::Index j = 0; j < s.values.cols(); ++j) c.data.push_back(s.values(m, j));
  }
  // rows: xi on grid.dual(); columns: eta on grid
  c.header = {{"kind", "spectrum-grid"}, {"name", name}, {"grid", axis_json(family.front().grid)}, {"lambdas", lambdas}};
  return c;
}

std::vector<SymbolGrid> symbol_grids_from(const Container& c) {
  require_kind(c, "spectrum-grid");
  const Axis g = axis_from(c.header.at("grid"));
  const auto lambdas = c.header.at("lambdas").get<std::vector<double>>();
  const std::size_t n = g.count();
  require_size(c, lambdas.size() * n * n);
  std::vector<SymbolGrid> out;
  std::size_t q = 0;
  for (double l : lambdas) {
    SymbolGrid s(l, g);
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t j = 0; j < n; ++j) s.values(m, j) = c.data[q++];
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hflag
