#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "hflag/grid.hpp"
#include "hflag/schrodinger.hpp"
#include "hflag/symbolcalc.hpp"

namespace hflag {

// Self-describing container: a JSON header plus a row-major complex array.
//
// Binary layout (all integers and doubles little-endian):
//   8 bytes  magic "HFLAGBIN"
//   u32      format version (1)
//   u64      header length in bytes, then the UTF-8 JSON header
//   u64      number of complex values, then (re, im) double pairs
// The JSON form is one object: the header keys plus "data": [[re, im], ...].
struct Container {
  nlohmann::json header;  // always carries "kind"
  std::vector<Complex> data;
};

enum class ContainerFormat { Binary, Json };

// ".json" selects JSON, anything else binary.
ContainerFormat format_for_path(const std::string& path);

void write_container(std::ostream& out, const Container& c, ContainerFormat format);
// Detects the format from the first byte. Throws ConfigError on malformed input.
Container read_container(std::istream& in);
void save_container(const Container& c, const std::string& path);
Container load_container(const std::string& path);

Container to_container(const SampledField& f);
SampledField field_from(const Container& c);

Container to_container(const FiberOperator& a);
FiberOperator fiber_operator_from(const Container& c);

// Per-lambda symbol grids on a shared line grid; rows stacked in lambda order.
Container to_container(const std::vector<SymbolGrid>& family, const std::string& name);
std::vector<SymbolGrid> symbol_grids_from(const Container& c);

}  // namespace hflag
