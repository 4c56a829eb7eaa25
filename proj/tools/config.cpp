#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hflag/error.hpp"
#include "hflag/grid.hpp"

namespace hflag::cli {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  const double v = parse_double(s, what);
  if (v != std::floor(v)) throw ConfigError(what + " must be an integer: '" + s + "'");
  return static_cast<long>(v);
}

}  // namespace

std::vector<double> ExperimentConfig::lambdas() const {
  if (!lambda_band.empty()) return lambda_band;
  std::vector<double> g;
  for (int j = 2; j >= -2; --j) g.push_back(-std::ldexp(1.0, j));
  for (int j = -2; j <= 2; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

void ExperimentConfig::validate() const {
  for (double l : lambda_band)
    if (!std::isfinite(l) || l == 0.0) throw ConfigError("lambda band must exclude lambda = 0");
  if (!is_power_of_two(grid_count) || grid_count < 8) throw ConfigError("grid count must be a power of two >= 8");
  if (!(grid_half_width > 0.0 && std::isfinite(grid_half_width))) throw ConfigError("grid half-width must be positive");
  if (!std::isfinite(eps)) throw ConfigError("eps must be finite");
  if (alpha_max < 0 || alpha_max > 4 || beta_max < 0 || beta_max > 4)
    throw ConfigError("multi-index ranges must lie in [0, 4]");
  if (m_max < 1 || m_max > 4) throw ConfigError("lambda-derivative order must lie in [1, 4]");
  if (draws < 1) throw ConfigError("draws must be positive");
  if (jobs < 1) throw ConfigError("jobs must be positive");
  if (!(threshold >= 0.0) || !(cond_limit > 1.0) || !(residual_tolerance > 0.0))
    throw ConfigError("threshold, cond_limit and residual_tolerance must be positive");
  if (out.empty()) throw ConfigError("output directory is empty");
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"kernel", kernel},
          {"eps", eps},
          {"grid", {{"count", grid_count}, {"half_width", grid_half_width}}},
          {"lambda_band", lambdas()},
          {"alpha_max", alpha_max},
          {"beta_max", beta_max},
          {"m_max", m_max},
          {"seed", seed},
          {"draws", draws},
          {"strict_symmetric", strict_symmetric},
          {"threshold", threshold},
          {"cond_limit", cond_limit},
          {"residual_tolerance", residual_tolerance},
          {"tolerances", tolerances}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "kernel") c.kernel = v.get<std::string>();
      else if (key == "eps") c.eps = v.get<double>();
      else if (key == "grid") {
        c.grid_count = v.at("count").get<std::size_t>();
        c.grid_half_width = v.at("half_width").get<double>();
      } else if (key == "lambda_band") {
        c.lambda_band = v.is_string() ? parse_lambda_band(v.get<std::string>()) : v.get<std::vector<double>>();
      } else if (key == "alpha_max") c.alpha_max = v.get<int>();
      else if (key == "beta_max") c.beta_max = v.get<int>();
      else if (key == "m_max") c.m_max = v.get<int>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "draws") c.draws = v.get<int>();
      else if (key == "jobs") c.jobs = v.get<int>();
      else if (key == "strict_symmetric") c.strict_symmetric = v.get<bool>();
      else if (key == "threshold") c.threshold = v.get<double>();
      else if (key == "cond_limit") c.cond_limit = v.get<double>();
      else if (key == "residual_tolerance") c.residual_tolerance = v.get<double>();
      else if (key == "tolerances") c.tolerances = v.get<std::map<std::string, double>>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  try {
    return ExperimentConfig::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

std::vector<double> parse_lambda_band(const std::string& s) {
  std::vector<double> out;
  if (s.rfind("dyadic:", 0) == 0) {
    const auto rest = s.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("dyadic band needs dyadic:jmin:jmax");
    const long lo = parse_long(rest.substr(0, colon), "band exponent");
    const long hi = parse_long(rest.substr(colon + 1), "band exponent");
    if (lo > hi || hi - lo > 20 || std::abs(lo) > 30 || std::abs(hi) > 30) throw ConfigError("bad dyadic band '" + s + "'");
    for (long j = hi; j >= lo; --j) out.push_back(-std::ldexp(1.0, static_cast<int>(j)));
    for (long j = lo; j <= hi; ++j) out.push_back(std::ldexp(1.0, static_cast<int>(j)));
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, "lambda"));
  if (out.empty()) throw ConfigError("empty lambda band");
  return out;
}

void parse_grid(const std::string& s, ExperimentConfig& cfg) {
  const auto colon = s.find(':');
  const long n = parse_long(s.substr(0, colon), "grid count");
  if (n <= 0) throw ConfigError("grid count must be positive");
  cfg.grid_count = static_cast<std::size_t>(n);
  if (colon != std::string::npos) cfg.grid_half_width = parse_double(s.substr(colon + 1), "grid half-width");
}

}  // namespace hflag::cli
