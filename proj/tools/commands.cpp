#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/estimates.hpp"
#include "hflag/identities.hpp"
#include "hflag/inversion.hpp"
#include "hflag/io.hpp"
#include "hflag/transform.hpp"

namespace hflag::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const ExperimentConfig& cfg, const std::string& name, const std::string& text) {
  fs::create_directories(cfg.out);
  const auto path = fs::path(cfg.out) / name;
  std::ofstream o(path, std::ios::binary);
  o << text;
  if (!o) throw ConfigError("cannot write " + path.string());
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const nlohmann::json& j) {
  write_text(cfg, name, j.dump(2) + "\n");
}

std::string sci(double x) {
  std::ostringstream o;
  o << std::scientific << std::setprecision(3) << x;
  return o.str();
}

InversionOptions inversion_options(const ExperimentConfig& cfg) {
  InversionOptions o;
  o.fiber_grid = LineGrid(cfg.grid_count, cfg.grid_half_width);
  o.lambdas = cfg.lambdas();
  o.cond_limit = cfg.cond_limit;
  o.strict_symmetric = cfg.strict_symmetric;
  o.jobs = cfg.jobs;
  return o;
}

EstimateGrid estimate_grid(const ExperimentConfig& cfg) {
  auto g = EstimateGrid::defaults();
  g.lambdas = cfg.lambdas();
  return g;
}

void print_rows(const SeminormReport& rep, std::ostream& log) {
  for (const auto& row : rep.rows) {
    if (!std::isnan(row.lambda) || row.verdict == Verdict::Pass) continue;
    log << "  alpha=(" << row.alpha[0] << ',' << row.alpha[1] << ") beta=" << row.beta << ": "
        << to_string(row.verdict) << ", sup " << sci(row.sup) << " at w=(" << row.argmax_w[0] << ", "
        << row.argmax_w[1] << "), lambda=" << row.argmax_lambda;
    if (!row.note.empty()) log << " (" << row.note << ")";
    log << '\n';
  }
}

}  // namespace

int cmd_identities(const ExperimentConfig& cfg, const std::string& only, std::ostream& log) {
  IdentityConfig ic;
  ic.seed = cfg.seed;
  ic.draws = cfg.draws;
  ic.lambda_band = cfg.lambdas();
  ic.jobs = cfg.jobs;
  ic.tolerances = cfg.tolerances;
  ic.validate();
  const auto results = run_identities(ic, only);
  if (results.empty()) throw ConfigError("no identity matches '" + only + "'");
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed();
    log << (r.passed() ? "pass " : "FAIL ") << std::left << std::setw(36) << r.name << " max error "
        << sci(r.max_error) << " (tolerance " << sci(r.tolerance) << ")\n";
  }
  write_json(cfg, "identities.json", identities_json(ic, results));
  return all ? kOk : kToleranceFailure;
}

int cmd_estimates(const ExperimentConfig& cfg, std::ostream& log) {
  const auto k = make_kernel(cfg.kernel, cfg.eps);
  const auto flag = flag_estimate_report(*k, cfg.alpha_max, cfg.beta_max, estimate_grid(cfg), cfg.jobs);
  write_text(cfg, "flag_estimates.csv", flag.to_csv());
  write_json(cfg, "flag_estimates.json", flag.to_json());

  const LineGrid grid(cfg.grid_count, cfg.grid_half_width);
  std::vector<SymbolGrid> family;
  for (double l : cfg.lambdas()) family.push_back(fiber_symbol(*k, l, grid));
  const auto sym0 = sym0_seminorms(family, cfg.alpha_max, k->name());
  write_text(cfg, "sym0.csv", sym0.to_csv());
  write_json(cfg, "sym0.json", sym0.to_json());

  log << "kernel " << k->name() << ": flag estimates " << to_string(flag.verdict()) << " (" << flag.method
      << ", " << flag.rows.size() << " rows)\n";
  print_rows(flag, log);
  double worst = 0.0;
  for (const auto& row : sym0.rows)
    if (std::isnan(row.lambda)) worst = std::max(worst, row.sup);
  log << "fiber symbols: largest Sym0 seminorm " << sci(worst) << " over " << family.size() << " fibers\n";
  return flag.verdict() == Verdict::Fail ? kToleranceFailure : kOk;
}
int cmd_invert(const ExperimentConfig& cfg, std::ostream& log) {
  const auto k = make_kernel(cfg.kernel, cfg.eps);
  const auto opt = inversion_options(cfg);
  nlohmann::json summary;
  summary["config"] = cfg.to_json();
  summary["kernel"] = k->name();

  const auto uniform = uniform_invertibility_report(*k, opt, cfg.threshold);
  write_text(cfg, "uniform.csv", uniform.to_csv());
  write_json(cfg, "uniform.json", uniform.to_json());
  summary["min_sigma"] = uniform.min_sigma();
  const auto low = uniform.below_threshold();
  if (!low.empty()) {
    log << "kernel " << k->name() << " is not uniformly invertible: sigma_min below " << cfg.threshold << "\n"
        << "  lambda      sigma_min   phase-space radius of the least singular vector\n";
    for (const auto& row : uniform.rows)
      log << "  " << std::left << std::setw(10) << row.lambda << "  " << sci(row.sigma_min) << "   "
          << sci(row.min_vector_radius) << '\n';
    summary["status"] = "not-invertible";
    summary["offending_lambdas"] = low;
    write_json(cfg, "summary.json", summary);
    return kNumericalFailure;
  }

  InversionResult r;
  try {
    r = invert_flag(k, opt);
  } catch (const NonInvertibleError& e) {
    log << e.what() << '\n';
    summary["status"] = "not-invertible";
    summary["offending_lambdas"] = e.offending_lambdas;
    write_json(cfg, "summary.json", summary);
    return kNumericalFailure;
  }
  write_json(cfg, "inversion.json", r.to_json());
  write_text(cfg, "residuals.csv", r.residual_csv());
  std::vector<SymbolGrid> bs;
  for (const auto& f : r.fibers) bs.push_back(f->b);
  auto c = to_container(bs, r.inverse->name());
  c.header["mapping"] = "L(w, mu) = b_{-mu}(sgn(mu) w1 / sqrt|mu|, -w2 / sqrt|mu|)";
  fs::create_directories(cfg.out);
  save_container(c, (fs::path(cfg.out) / "inverse.bin").string());

  const auto deriv = lambda_derivative_check(r, cfg.m_max, std::min(cfg.alpha_max, 2));
  write_json(cfg, "lambda_derivative.json", deriv.to_json());
  write_text(cfg, "lambda_derivative.csv", deriv.seminorms.to_csv());

  const auto est = flag_estimate_report(*r.inverse, cfg.alpha_max, cfg.beta_max, estimate_grid(cfg), cfg.jobs);
  write_text(cfg, "inverse_flag_estimates.csv", est.to_csv());
  write_json(cfg, "inverse_flag_estimates.json", est.to_json());

  // Field route on bins of a t axis with 1/4 spacing.
  const Axis v(64, 5.0), t(64, 2.0);
  std::vector<double> bins;
  for (double l : opt.lambda_grid())
    if (t.dual().index_of(l)) bins.push_back(l);
  std::vector<SampledField> fields;
  if (!bins.empty()) fields.push_back(random_banded_field(v, t, bins, cfg.seed));
  const auto ver = verify_inverse(*k, *r.inverse, fields, opt);
  write_json(cfg, "verify.json", ver.to_json());

  const bool residual_ok = r.max_residual() <= cfg.residual_tolerance && ver.max_left() <= cfg.residual_tolerance &&
                           ver.max_right() <= cfg.residual_tolerance;
  const bool estimate_ok = est.verdict() != Verdict::Fail;
  summary["max_fiber_residual"] = r.max_residual();
  summary["uniform_inverse_bound"] = r.uniform_inverse_bound();
  summary["verify_left"] = ver.max_left();
  summary["verify_right"] = ver.max_right();
  summary["field_residuals"] = ver.field_residuals;
  summary["derivative_identity_error"] = deriv.max_relative_error();
  summary["inverse_estimate_verdict"] = to_string(est.verdict());
  summary["extrapolated_queries"] = r.inverse->extrapolated();
  summary["status"] = residual_ok && estimate_ok ? "ok" : "tolerance-failure";
  write_json(cfg, "summary.json", summary);

  log << "inverted " << k->name() << " on " << r.fibers.size() << " fibers\n"
      << "  min sigma " << sci(r.min_sigma()) << ", sup ||B|| " << sci(r.uniform_inverse_bound()) << '\n'
      << "  fiber residual " << sci(r.max_residual()) << ", operator residuals " << sci(ver.max_left()) << " / "
      << sci(ver.max_right()) << '\n'
      << "  derivative identity error " << sci(deriv.max_relative_error()) << '\n'
      << "  inverse flag estimates: " << to_string(est.verdict()) << '\n';
  print_rows(est, log);
  for (double e : ver.field_residuals) log << "  field route residual " << sci(e) << '\n';
  return residual_ok && estimate_ok ? kOk : kToleranceFailure;
}

int cmd_report(const std::vector<std::string>& paths, std::ostream& log) {
  if (paths.empty()) throw ConfigError("report needs at least one path");
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      log << p << ":\n";
      for (const auto& f : files) {
        const auto name = f.filename().string();
        if (f.extension() != ".json") {
          log << "  " << name << '\n';
          continue;
        }
        std::ifstream in(f);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception&) {
          log << "  " << name << " (unreadable)\n";
          continue;
        }
        std::vector<std::string> parts;
        if (j.contains("passed")) parts.push_back(j["passed"].get<bool>() ? "all passed" : "FAILURES");
        if (j.contains("verdict")) parts.push_back("verdict " + j["verdict"].get<std::string>());
        if (j.contains("status")) parts.push_back("status " + j["status"].get<std::string>());
        if (j.contains("max_residual")) parts.push_back("max residual " + sci(j["max_residual"].get<double>()));
        if (j.contains("min_sigma") && j["min_sigma"].is_number())
          parts.push_back("min sigma " + sci(j["min_sigma"].get<double>()));
        log << "  " << name;
        for (std::size_t i = 0; i < parts.size(); ++i) log << (i ? ", " : ": ") << parts[i];
        log << '\n';
      }
    } else {
      const auto c = load_container(p);
      log << p << ": " << c.header.value("kind", "?") << ", " << c.data.size() << " values, header "
          << c.header.dump() << '\n';
    }
  }
  return kOk;
}

}  // namespace hflag::cli
