// Acceptance gate: criteria 1-9, one PASS/FAIL line each.
// Usage: acceptance [criterion ...]   (no arguments runs all nine)

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/estimates.hpp"
#include "hflag/identities.hpp"
#include "hflag/inversion.hpp"
#include "hflag/transform.hpp"

using namespace hflag;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records `name = value` and requires value <= limit.
  void at_most(const std::string& name, double value, double limit) {
    const bool ok = value <= limit;
    pass = pass && ok;
    note(name, value, ok ? "<=" : ">", limit);
  }
  void at_least(const std::string& name, double value, double limit) {
    const bool ok = value >= limit;
    pass = pass && ok;
    note(name, value, ok ? ">=" : "<", limit);
  }
  void require(const std::string& what, bool ok) {
    pass = pass && ok;
    sep();
    detail << what << (ok ? "" : " [violated]");
  }

 private:
  void sep() {
    if (detail.tellp() > 0) detail << "; ";
  }
  void note(const std::string& name, double v, const char* rel, double limit) {
    sep();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3e %s %.3g", name.c_str(), v, rel, limit);
    detail << buf;
  }
};

IdentityConfig identity_config() {
  IdentityConfig c;
  c.seed = 1;
  c.draws = 100;
  return c;
}

double identity_error(const std::string& name) { return find_identity(name).run(identity_config()); }

// ---- 1-5: identity suites

Outcome group_representation() {
  Outcome o;
  o.at_most("associativity", identity_error("group.associativity"), 1e-12);
  o.at_most("unitarity", identity_error("schrodinger.unitarity"), 1e-12);
  o.at_most("homomorphism", identity_error("schrodinger.homomorphism"), 1e-8);
  return o;
}

Outcome fourier_plancherel() {
  Outcome o;
  o.at_most("plancherel", identity_error("transform.plancherel"), 1e-10);
  o.at_most("gaussian transform", identity_error("transform.gaussian"), 1e-8);
  return o;
}

Outcome c_function_identities() {
  Outcome o;
  o.at_most("transform of c_{f,g}", identity_error("schrodinger.c_fun_transform"), 1e-8);
  o.at_most("dilation scaling", identity_error("schrodinger.c_fun_dilation"), 1e-8);
  return o;
}

Outcome dictionary() {
  Outcome o;
  o.at_most("dual-route pi_f (HS rel)", identity_error("schrodinger.pi_field_routes"), 1e-6);
  o.at_most("HS norm vs symbol norm", identity_error("symbolcalc.hs_symbol_norm"), 1e-10);
  o.at_most("gramian slice", identity_error("schrodinger.gramian_slice"), 1e-6);
  o.at_most("sum of slices", identity_error("transform.slice_sum"), 1e-4);
  return o;
}

Outcome intertwining() {
  Outcome o;
  o.at_most("pi_{K*phi} vs pi_K pi_phi (HS rel, all lambda)", identity_error("symbolcalc.intertwining"), 1e-5);
  return o;
}

}  // namespace

namespace {

// ---- 6: end-to-end inversion of 1 + 0.1 |w|^2 / (|w|^2 + |lambda|)

Outcome inversion_end_to_end() {
  Outcome o;
  const auto k = make_kernel("perturbed-identity", 0.1);
  const InversionOptions opt;
  const auto r = invert_flag(k, opt);
  double fiber = 0.0;
  for (const auto& f : r.fibers) fiber = std::max(fiber, f->residual);
  o.at_most("(a) fiber residual", fiber, 1e-8);

  // Neumann oracle for (1 + eps s)^{-1}, s the Riesz fiber symbol.
  const auto riesz = make_kernel("riesz");
  double oracle = 0.0;
  for (double lambda : opt.lambda_grid()) {
    const auto n = neumann_inverse(fiber_symbol(*riesz, lambda, opt.fiber_grid), 0.1, 30);
    const auto l = fiber_symbol(*r.inverse, lambda, opt.fiber_grid);
    oracle = std::max(oracle, (l.values - n.b.values).cwiseAbs().maxCoeff() + n.truncation_bound);
  }
  o.at_most("(b) inverse vs Neumann", oracle, 1e-6);

  const auto est = flag_estimate_report(*r.inverse, 3, 2);
  bool finite = true;
  for (const auto& row : est.rows) finite = finite && std::isfinite(row.sup);
  o.require(std::string("(c) flag estimates of the inverse: ") + to_string(est.verdict()) +
                ", |alpha| <= 3, beta <= 2",
            finite && est.verdict() == Verdict::Pass);

  const auto ver = verify_inverse(*k, *r.inverse, {}, opt);
  o.at_most("(d) ||pi_K pi_L - I||", ver.max_left(), 1e-6);
  o.at_most("||pi_L pi_K - I||", ver.max_right(), 1e-6);
  return o;
}

// ---- 7: lambda-derivative structure of b_lambda

Outcome derivative_structure() {
  Outcome o;
  // The perturbed identity has lambda-independent fiber symbols; the chirped
  // variant exercises d_lambda.
  const auto r = invert_flag(make_kernel("log-chirp", 0.1));
  const auto check = lambda_derivative_check(r, 2, 2);
  o.at_most("M = 1 identity (relative)", check.max_relative_error(), 1e-3);
  bool finite = true;
  double spread = 1.0;
  for (const auto& row : check.seminorms.rows) {
    finite = finite && std::isfinite(row.sup);
    if (std::isnan(row.lambda)) spread = std::max(spread, check.spread(row.alpha, row.beta));
  }
  o.require("seminorms finite", finite);
  o.at_most("max/min over lambda, M <= 2", spread, 4.0 - 1e-12);
  return o;
}

// ---- 8: uniform invertibility and the bin-wise energy bound

Outcome uniform_invertibility() {
  Outcome o;
  const auto k = make_kernel("perturbed-identity", 0.1);
  const auto rep = uniform_invertibility_report(*k);
  o.at_least("min sigma", rep.min_sigma(), 0.5);

  const Axis v(64, 4.0), t(32, 4.0);
  const std::vector<double> bins = {-1.0, 0.5, 1.0};
  InversionOptions opt;
  opt.lambdas = {1.0, -0.5, -1.0};  // slices at mu see the fiber at -mu
  const double c = std::min(rep.min_sigma(), uniform_invertibility_report(*k, opt).min_sigma());
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_banded_field(v, t, bins, 100 + seed);
    const auto kf = convolve_spectrum(*k, f);
    for (double mu : bins) {
      const double g = slice_energy(f, mu);
      worst = std::min(worst, (slice_energy(kf, mu) - c * c * g) / g);
    }
  }
  o.at_least("min (G_Kf - c^2 G_f) / G_f over 20 fields", worst, -1e-8);
  return o;
}

// ---- 9: negative controls

Outcome negative_controls() {
  Outcome o;
  // |w| off the origin: the blowup has to be found by probing toward w = 0.
  auto grid = EstimateGrid::defaults();
  grid.radii.erase(grid.radii.begin());
  const auto rep = flag_estimate_report(*make_kernel("abs-w"), 2, 0, grid);
  bool all_fail = true;
  double where = 0.0;
  for (const std::vector<int> a : {std::vector<int>{2, 0}, {1, 1}, {0, 2}}) {
    const auto* row = rep.find(a, 0);
    all_fail = all_fail && row->verdict == Verdict::Fail && row->note == "grows toward w = 0";
    where = std::max(where, std::hypot(row->argmax_w[0], row->argmax_w[1]));
  }
  o.require("abs-w fails at |alpha| = 2, growing toward w = 0", all_fail);
  o.at_most("blowup radius", where, 0.0625);

  const auto riesz = uniform_invertibility_report(*make_kernel("riesz"));
  o.at_most("riesz min sigma (threshold 0.5)", riesz.min_sigma(), 0.5);
  o.require("riesz below threshold on every fiber", riesz.below_threshold().size() == riesz.rows.size());
  double radius = 0.0;
  for (const auto& row : riesz.rows) radius = std::max(radius, row.min_vector_radius);
  o.at_most("least singular vector radius (fiber units)", radius, 0.5);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "group and representation suite", group_representation},
    {2, "Fourier and Plancherel", fourier_plancherel},
    {3, "c_{f,g} transform and dilation identities", c_function_identities},
    {4, "operator-symbol dictionary", dictionary},
    {5, "intertwining", intertwining},
    {6, "inversion end to end", inversion_end_to_end},
    {7, "lambda-derivative structure", derivative_structure},
    {8, "uniform invertibility", uniform_invertibility},
    {9, "negative controls", negative_controls},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > 9) {
      std::cerr << "usage: acceptance [1-9 ...]\n";
      return 2;
    }
    wanted.push_back(id);
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(std::string("threw: ") + e.what(), false);
    }
    failures += o.pass ? 0 : 1;
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << ": "
              << o.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
