#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

namespace hflag::cli {

enum Exit { kOk = 0, kToleranceFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

// Everything a run depends on. Defaults are embedded so every command runs
// with no config file; a JSON file may set any subset of the keys below and
// command-line flags override both.
struct ExperimentConfig {
  std::string kernel = "perturbed-identity";  // catalog name or inline expression
  double eps = 0.1;
  std::size_t grid_count = 64;  // fiber line grid
  double grid_half_width = 4.0;
  std::vector<double> lambda_band;  // empty: +-2^j, j = -2..2
  int alpha_max = 3;
  int beta_max = 2;
  int m_max = 2;  // lambda-derivative order for the inverse symbols
  std::string out = "hflag-out";
  std::uint64_t seed = 1;
  int draws = 100;
  int jobs = 1;
  bool strict_symmetric = false;
  double threshold = 0.5;  // uniform lower bound required of sigma_min
  double cond_limit = 1e8;
  double residual_tolerance = 1e-6;
  std::map<std::string, double> tolerances;  // identity overrides

  std::vector<double> lambdas() const;  // band or the dyadic default
  void validate() const;                // ConfigError
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);  // rejects unknown keys
};

ExperimentConfig load_config(const std::string& path);
// "a,b,c" or "dyadic:jmin:jmax" (meaning +-2^j for j in [jmin, jmax])
std::vector<double> parse_lambda_band(const std::string& s);
// "N" or "N:L" (count and half-width of the fiber grid)
void parse_grid(const std::string& s, ExperimentConfig& cfg);

}  // namespace hflag::cli
