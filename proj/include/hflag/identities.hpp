#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "hflag/grid.hpp"

namespace hflag {

// Random Gaussian test field on (v, v, t) whose central frequencies sit exactly
// at the given bins (ConfigError if one is not a bin of t.dual()). Widths,
// centres and phases are drawn from `seed`.
SampledField random_banded_field(const Axis& v, const Axis& t, const std::vector<double>& bins, std::uint64_t seed);

struct IdentityConfig {
  std::uint64_t seed = 1;
  int draws = 100;  // random (h, h', lambda) draws for the group suites
  // Fibers for the intertwining and scaling checks; multiples of 1/4 in [-4, 4], no 0.
  std::vector<double> lambda_band{-4.0, -2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0, 4.0};
  int jobs = 1;
  std::map<std::string, double> tolerances;  // per-identity overrides

  void validate() const;  // ConfigError on a bad band or draw count
};

struct IdentityResult {
  std::string name;
  std::string module;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error <= tolerance; }  // false for NaN
};

struct IdentitySpec {
  std::string name;
  std::string module;
  std::string description;
  double tolerance;
  std::function<double(const IdentityConfig&)> run;  // worst error over the suite
};

const std::vector<IdentitySpec>& identity_registry();
const IdentitySpec& find_identity(const std::string& name);

IdentityResult run_identity(const IdentitySpec& spec, const IdentityConfig& cfg);
// All registered identities (or those whose name starts with `prefix`), in registry order.
std::vector<IdentityResult> run_identities(const IdentityConfig& cfg, const std::string& prefix = "");
nlohmann::json identities_json(const IdentityConfig& cfg, const std::vector<IdentityResult>& results);

}  // namespace hflag
