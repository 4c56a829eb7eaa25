#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "hflag/catalog.hpp"
#include "hflag/error.hpp"

using namespace hflag;
using namespace hflag::cli;

namespace {

struct Flags {
  std::string config, kernel, grid, band, out;
  double eps = 0.0, threshold = 0.0;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string only;
  std::vector<std::string> paths;
};

struct Options {
  CLI::Option *config = nullptr, *kernel = nullptr, *eps = nullptr, *grid = nullptr, *band = nullptr,
              *jobs = nullptr, *out = nullptr, *seed = nullptr, *strict = nullptr, *threshold = nullptr;
};

Options add_common(CLI::App* app, Flags& f) {
  Options o;
  o.config = app->add_option("--config", f.config, "JSON config file (flags override it)");
  o.kernel = app->add_option("--kernel", f.kernel, "catalog kernel name or inline multiplier expression");
  o.eps = app->add_option("--eps", f.eps, "value of {eps} in catalog expressions");
  o.grid = app->add_option("--grid", f.grid, "fiber line grid N or N:L (power-of-two N, half-width L)");
  o.band = app->add_option("--lambda-band", f.band, "comma list of lambdas or dyadic:jmin:jmax");
  o.jobs = app->add_option("--jobs", f.jobs, "worker threads");
  o.out = app->add_option("--out", f.out, "output directory");
  o.seed = app->add_option("--seed", f.seed, "seed for randomized suites and test fields");
  o.strict = app->add_flag("--strict-symmetric", f.strict, "reject kernels whose fibers are not Hermitian");
  return o;
}

ExperimentConfig resolve(const Options& o, const Flags& f) {
  ExperimentConfig c = o.config->count() ? load_config(f.config) : ExperimentConfig{};
  if (o.kernel->count()) c.kernel = f.kernel;
  if (o.eps->count()) c.eps = f.eps;
  if (o.grid->count()) parse_grid(f.grid, c);
  if (o.band->count()) c.lambda_band = parse_lambda_band(f.band);
  if (o.jobs->count()) c.jobs = f.jobs;
  if (o.out->count()) c.out = f.out;
  if (o.seed->count()) c.seed = f.seed;
  if (o.strict->count()) c.strict_symmetric = f.strict;
  if (o.threshold && o.threshold->count()) c.threshold = f.threshold;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag-kernel experiments on the Heisenberg group H^1"};
  app.require_subcommand(1);
  Flags f;

  auto* ids = app.add_subcommand("identities", "run the identity suites and write identities.json");
  const auto ids_opt = add_common(ids, f);
  ids->add_option("--only", f.only, "run identities whose name starts with this prefix");

  auto* est = app.add_subcommand("estimates", "flag estimates and fiber Sym0 seminorms of a kernel");
  const auto est_opt = add_common(est, f);

  auto* inv = app.add_subcommand("invert", "invert Op(K) fiberwise and check the inverse");
  auto inv_opt = add_common(inv, f);
  inv_opt.threshold = inv->add_option("--threshold", f.threshold, "required uniform lower bound on sigma_min");

  auto* rep = app.add_subcommand("report", "summarise output directories and container files");
  rep->add_option("paths", f.paths, "directories or container files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  ExperimentConfig cfg;
  try {
    if (*ids) cfg = resolve(ids_opt, f);
    if (*est) cfg = resolve(est_opt, f);
    if (*inv) cfg = resolve(inv_opt, f);
    // Kernel names and expressions are checked before any computation.
    if (*est || *inv) make_kernel(cfg.kernel, cfg.eps);
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*ids) return cmd_identities(cfg, f.only, std::cout);
    if (*est) return cmd_estimates(cfg, std::cout);
    if (*inv) return cmd_invert(cfg, std::cout);
    return cmd_report(f.paths, std::cout);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
