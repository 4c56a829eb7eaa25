#include <doctest.h>

#include <random>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/inversion.hpp"
#include "support.hpp"

using namespace hflag;
using testsupport::GaussianSpec;

namespace {

InversionOptions small_options() {
  InversionOptions o;
  o.fiber_grid = LineGrid(32, 3.0);
  o.lambdas = {-2.0, -0.5, 0.5, 1.0, 4.0};
  return o;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("invert_fiber") {
  const LineGrid g(32, 3.0);
  const auto id = kn_quantize(constant_symbol(1.0, g, 1.0));
  const auto inv = invert_fiber(id);
  CHECK(max_abs(inv.matrix - id.matrix) < 1e-13);

  // A Fourier multiplier inverts to the reciprocal multiplier.
  const auto m = SymbolGrid::sample(1.0, g, [](double xi, double) { return Complex(2.0 + std::cos(xi)); });
  const auto r = SymbolGrid::sample(1.0, g, [](double xi, double) { return Complex(1.0 / (2.0 + std::cos(xi))); });
  FiberStats st;
  const auto b = kn_symbol_of(invert_fiber(kn_quantize(m), 1e8, &st));
  CHECK(max_abs(b.values - r.values) < 1e-12);
  // Singular values are the multiplier's values on the dual nodes.
  const double lo = m.values.cwiseAbs().minCoeff(), hi = m.values.cwiseAbs().maxCoeff();
  CHECK(st.sigma_min == doctest::Approx(lo));
  CHECK(st.condition == doctest::Approx(hi / lo));

  const auto z = kn_quantize(constant_symbol(1.0, g, 0.0));
  try {
    invert_fiber({2.5, z.grid, z.matrix});
    FAIL("zero fiber inverted");
  } catch (const NonInvertibleError& e) {
    REQUIRE(e.offending_lambdas.size() == 1);
    CHECK(e.offending_lambdas[0] == 2.5);
  }
  CHECK_THROWS_AS(invert_fiber({1.0, g, Eigen::MatrixXcd::Identity(4, 5)}), DimensionError);
}

TEST_CASE("Neumann series") {
  const LineGrid g(32, 3.0);
  const auto s = fiber_symbol(*make_kernel("riesz"), 1.0, g);
  const auto zero = neumann_inverse(s, 0.0, 5);
  CHECK(max_abs(zero.b.values - constant_symbol(1.0, g, 1.0).values) < 1e-15);

  const auto n = neumann_inverse(s, 0.1, 20);
  CHECK(n.truncation_bound < 1e-15);
  const auto a = constant_symbol(1.0, g, 1.0) + Complex(0.1) * s;
  const auto b = kn_symbol_of(invert_fiber(kn_quantize(a)));
  CHECK(max_abs(n.b.values - b.values) < 1e-8);
  CHECK_THROWS_AS(neumann_inverse(s, 1.5 / n.op_norm, 10), DivergenceError);
  CHECK_THROWS_AS(neumann_inverse(s, 0.1, -1), ConfigError);
}

TEST_CASE("inverting constant multipliers") {
  const auto opt = small_options();
  const auto r = invert_flag(make_kernel("delta"), opt);
  CHECK(r.max_residual() < 1e-12);
  CHECK(r.fibers.size() == opt.lambdas.size());
  for (const auto& f : r.fibers) CHECK_FALSE(f->symmetrized);
  CHECK(std::abs(r.inverse->value(0.3, -0.2, 1.0) - 1.0) < 1e-12);

  const auto two = invert_flag(make_kernel("2"), opt);
  CHECK(std::abs(two.inverse->value(0.1, 0.4, -0.5) - 0.5) < 1e-12);
  CHECK(two.uniform_inverse_bound() == doctest::Approx(0.5));
  CHECK_THROWS_AS(r.inverse->value(0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("inverse spectrum reproduces the fiber inverses") {
  auto opt = small_options();
  const auto r = invert_flag(make_kernel("perturbed-identity"), opt);
  CHECK(r.max_residual() < 1e-10);
  for (const auto& f : r.fibers) {
    CHECK(f->symmetrized);
    const auto back = fiber_symbol(*r.inverse, f->lambda, opt.fiber_grid);
    CHECK(max_abs(back.values - f->b.values) < 1e-8);
  }
  CHECK(r.inverse->extrapolated() == 0);
  CHECK(r.inverse->name() == "inverse(perturbed-identity)");

  opt.strict_symmetric = true;
  CHECK_THROWS_AS(invert_flag(make_kernel("perturbed-identity"), opt), ConfigError);
  const auto sym = invert_flag(make_kernel("1 + w1^2 / (w1^2 + abs(lambda))"), opt);
  for (const auto& f : sym.fibers) {
    CHECK(f->hermitian_defect < 1e-10);
    CHECK((f->B.matrix - f->B.matrix.adjoint()).norm() < 1e-8 * f->B.matrix.norm());
  }
}

TEST_CASE("invert_flag reports every singular fiber") {
  auto opt = small_options();
  try {
    invert_flag(make_kernel("riesz-x"), opt);
    FAIL("riesz-x inverted");
  } catch (const NonInvertibleError& e) {
    // xi = 0 is a dual node, where w1^2 / (w1^2 + |lambda|) vanishes.
    CHECK(e.offending_lambdas == opt.lambdas);
  }
  opt.lambdas = {1.0, 0.0};
  CHECK_THROWS_AS(invert_flag(make_kernel("delta"), opt), DomainError);
}

TEST_CASE("the inverse is a flag multiplier") {
  const auto r = invert_flag(make_kernel("perturbed-identity"));
  auto grid = EstimateGrid::defaults();
  grid.radii = {0.0, 0.25, 0.5, 1.0, 2.0};
  const auto rep = flag_estimate_report(*r.inverse, 2, 1, grid);
  for (const auto& row : rep.rows) CHECK(std::isfinite(row.sup));
  CHECK(rep.verdict() != Verdict::Fail);
}

TEST_CASE("lambda derivatives of the inverse symbols") {
  const auto k = make_kernel("log-chirp");
  auto opt = small_options();
  const auto r = invert_flag(k, opt);
  // Jet route against differences.
  const auto d = lambda_derivative_symbol(*k, 0.75, opt.fiber_grid);
  const double h = 1e-4;
  const Eigen::MatrixXcd fd = (fiber_symbol(*k, 0.75 + h, opt.fiber_grid).values -
                   fiber_symbol(*k, 0.75 - h, opt.fiber_grid).values) /
                  (2.0 * h);
  CHECK(max_abs(d.values - fd) < 1e-5 * std::max(1.0, max_abs(fd)));

  const auto check = lambda_derivative_check(r, 2);
  CHECK(check.lambdas.size() == opt.lambdas.size());
  CHECK(check.max_relative_error() < 1e-5);
  CHECK(check.seminorms.kind == "lambda-derivative");
  for (const auto& row : check.seminorms.rows) CHECK(std::isfinite(row.sup));
  CHECK(check.spread({0, 0}, 1) < 10.0);
  CHECK(check.to_json()["seminorms"]["rows"].size() == check.seminorms.rows.size());
  CHECK_THROWS_AS(lambda_derivative_check(r, 0), ConfigError);
}

TEST_CASE("verify_inverse") {
  const Axis v(64, 4.0), t(32, 4.0);
  auto opt = small_options();
  opt.lambdas = {-1.0, 0.5, 1.0};
  const auto k = make_kernel("perturbed-identity");
  const auto r = invert_flag(k, opt);
  const auto f = testsupport::banded(v, t, GaussianSpec{1.0, 1.5, 1.0, 0.2, -0.1, 0.0, 0.3}, opt.lambdas);
  const auto rep = verify_inverse(*k, *r.inverse, {f}, opt);
  CHECK(rep.max_left() < 1e-8);
  CHECK(rep.max_right() < 1e-8);
  REQUIRE(rep.field_residuals.size() == 1);
  CHECK(rep.field_residuals[0] < 1e-3);

  // Negative control: the kernel itself is not its own inverse.
  const auto bad = verify_inverse(*k, *k, {f}, opt);
  CHECK(bad.max_left() > 0.1);
  CHECK(bad.field_residuals[0] > 0.01);
}

TEST_CASE("uniform invertibility report") {
  InversionOptions opt;
  const auto riesz = uniform_invertibility_report(*make_kernel("riesz"), opt);
  CHECK(riesz.min_sigma() == doctest::Approx(0.1336).epsilon(2e-2));
  CHECK(riesz.below_threshold().size() == riesz.rows.size());
  // Smallest singular value is the same on every fiber (dilation invariance).
  for (const auto& row : riesz.rows) CHECK(row.sigma_min == doctest::Approx(riesz.min_sigma()).epsilon(1e-3));
  CHECK(riesz.numerically_invertible());
  // The deficit sits at w = 0: the least singular vector is the centred
  // coherent state, RMS radius 1 / sqrt(2 pi).
  for (const auto& row : riesz.rows) CHECK(row.min_vector_radius == doctest::Approx(0.3989).epsilon(1e-2));

  const auto pid = uniform_invertibility_report(*make_kernel("perturbed-identity"), opt);
  CHECK(pid.min_sigma() >= 0.5);
  CHECK(pid.below_threshold().empty());

  // |w| has invertible fibers, but their lower bound decays like |lambda|^{1/2}.
  const auto abs_w = uniform_invertibility_report(*make_kernel("abs-w"), opt);
  const auto sigma = [&](double l) {
    for (const auto& row : abs_w.rows)
      if (row.lambda == l) return row.sigma_min;
    return 0.0;
  };
  CHECK(sigma(0.25) / sigma(1.0) == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(sigma(-4.0) / sigma(-1.0) == doctest::Approx(2.0).epsilon(1e-2));
  const auto csv = riesz.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(riesz.rows.size()) + 1);
}

TEST_CASE("lower bound for the convolution energy") {
  const Axis v(64, 4.0), t(32, 4.0);
  const std::vector<double> bins = {-1.0, 0.5, 1.0};
  std::mt19937_64 rng(11);
  for (const char* name : {"perturbed-identity", "riesz"}) {
    const auto k = make_kernel(name);
    InversionOptions opt;
    opt.fiber_grid = LineGrid(64, 4.0);
    opt.lambdas = {1.0, -0.5, -1.0};  // fibers seen by the slices at -bin
    const double c = uniform_invertibility_report(*k, opt).min_sigma();
    for (int trial = 0; trial < 20; ++trial) {
      GaussianSpec g;
      g.a = testsupport::uniform(rng, 0.6, 1.6);
      g.b = testsupport::uniform(rng, 0.6, 1.6);
      g.x0 = testsupport::uniform(rng, -0.5, 0.5);
      g.y0 = testsupport::uniform(rng, -0.5, 0.5);
      g.kx = testsupport::uniform(rng, -0.5, 0.5);
      g.ky = testsupport::uniform(rng, -0.5, 0.5);
      const auto f = testsupport::banded(v, t, g, bins);
      const auto kf = convolve_spectrum(*k, f);
      for (double mu : bins) {
        const double lhs = slice_energy(kf, mu), rhs = c * c * slice_energy(f, mu);
        CHECK_MESSAGE(lhs >= rhs * (1.0 - 1e-6), name << " trial " << trial << " bin " << mu);
      }
    }
  }
}
