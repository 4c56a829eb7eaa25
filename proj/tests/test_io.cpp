#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/io.hpp"
#include "support.hpp"

using namespace hflag;

namespace {

Container round_trip(const Container& c, ContainerFormat f) {
  std::stringstream s;
  write_container(s, c, f);
  return read_container(s);
}

}  // namespace

TEST_CASE("field containers round-trip bit for bit") {
  const Axis v(8, 2.0), t(16, 4.0);
  auto f = testsupport::sample(v, t, testsupport::GaussianSpec{1.0, 0.7, 1.3, 0.1, 0.0, 0.2, 0.3});
  f[3] = Complex(1.0 / 3.0, -std::numeric_limits<double>::denorm_min());
  const auto spectral = partial_fourier(f, {2});
  for (auto format : {ContainerFormat::Binary, ContainerFormat::Json})
    for (const SampledField* field : {static_cast<const SampledField*>(&f), &spectral}) {
      const auto back = field_from(round_trip(to_container(*field), format));
      CHECK(back.same_layout(*field));
      bool same = true;
      for (std::size_t i = 0; i < field->size(); ++i) same = same && back[i] == (*field)[i];
      CHECK(same);
    }
}

TEST_CASE("binary layout is little-endian with a JSON header") {
  Container c;
  c.header = {{"kind", "test"}};
  c.data = {Complex(1.0, -2.0)};
  std::stringstream s;
  write_container(s, c, ContainerFormat::Binary);
  const std::string b = s.str();
  REQUIRE(b.size() == 8 + 4 + 8 + c.header.dump().size() + 8 + 16);
  CHECK(b.substr(0, 8) == "HFLAGBIN");
  CHECK(b[8] == 1);
  // 1.0 = 0x3FF0000000000000, stored low byte first.
  const std::string one = b.substr(b.size() - 16, 8);
  CHECK(static_cast<unsigned char>(one[7]) == 0x3f);
  CHECK(static_cast<unsigned char>(one[6]) == 0xf0);
  CHECK(one[0] == 0);
}

TEST_CASE("fiber operators and symbol families") {
  const LineGrid g(16, 2.0);
  const auto k = make_kernel("log-chirp");
  const auto a = kn_quantize(fiber_symbol(*k, -0.5, g));
  for (auto format : {ContainerFormat::Binary, ContainerFormat::Json}) {
    const auto back = fiber_operator_from(round_trip(to_container(a), format));
    CHECK(back.lambda == -0.5);
    CHECK(back.grid == g);
    CHECK(back.matrix == a.matrix);
  }
  const std::vector<SymbolGrid> fam = {fiber_symbol(*k, 0.5, g), fiber_symbol(*k, 2.0, g)};
  const auto c = round_trip(to_container(fam, "log-chirp"), ContainerFormat::Binary);
  CHECK(c.header["name"] == "log-chirp");
  const auto back = symbol_grids_from(c);
  REQUIRE(back.size() == 2);
  CHECK(back[1].lambda == 2.0);
  CHECK(back[1].values == fam[1].values);
}

TEST_CASE("malformed containers are rejected") {
  std::stringstream junk("NOTMAGIC....");
  CHECK_THROWS_AS(read_container(junk), ConfigError);
  std::stringstream other(R"({"format": "something"})");
  CHECK_THROWS_AS(read_container(other), ConfigError);

  Container c = to_container(kn_quantize(constant_symbol(1.0, LineGrid(4, 1.0), 1.0)));
  CHECK_THROWS_AS(field_from(c), ConfigError);
  std::stringstream s;
  write_container(s, c, ContainerFormat::Binary);
  std::string bytes = s.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream cut(bytes);
  CHECK_THROWS_AS(read_container(cut), ConfigError);
  c.data.pop_back();
  CHECK_THROWS_AS(fiber_operator_from(c), ConfigError);
}

TEST_CASE("file round trip picks the format from the extension") {
  const auto dir = std::filesystem::temp_directory_path() / "hflag_io_test";
  std::filesystem::create_directories(dir);
  const auto a = kn_quantize(constant_symbol(2.0, LineGrid(8, 1.0), 3.0));
  for (const char* name : {"op.bin", "op.json"}) {
    const auto path = (dir / name).string();
    save_container(to_container(a), path);
    CHECK(fiber_operator_from(load_container(path)).matrix == a.matrix);
  }
  CHECK(format_for_path("x.json") == ContainerFormat::Json);
  CHECK(format_for_path("x.bin") == ContainerFormat::Binary);
  CHECK_THROWS_AS(load_container((dir / "missing.bin").string()), ConfigError);
  std::filesystem::remove_all(dir);
}
