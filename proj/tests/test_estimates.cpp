#include <doctest.h>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/estimates.hpp"
#include "support.hpp"

using namespace hflag;

namespace {

// Hides the jets of a spectrum so the report falls back to differences.
class WithoutJets : public Spectrum {
 public:
  explicit WithoutJets(SpectrumPtr k) : k_(std::move(k)) {}
  std::string name() const override { return k_->name() + "-fd"; }
  Complex value(double w1, double w2, double lambda) const override { return k_->value(w1, w2, lambda); }

 private:
  SpectrumPtr k_;
};

EstimateGrid small_grid() {
  EstimateGrid g;
  g.radii = {0.0, 0.25, 1.0, 4.0};
  g.angles = 4;
  g.lambdas = {-1.0, 0.25, 1.0, 4.0};
  return g;
}

}  // namespace

TEST_CASE("Fornberg weights") {
  const auto d2 = fd_weights({-1, 0, 1}, 2);
  CHECK(d2[0] == doctest::Approx(1.0));
  CHECK(d2[1] == doctest::Approx(-2.0));
  CHECK(d2[2] == doctest::Approx(1.0));
  const auto d1 = fd_weights(central_offsets(1), 1);
  const std::vector<double> expect = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(d1[i] - expect[i]) < 1e-14);
  // Exact on polynomials up to degree size - 1.
  for (int m = 1; m <= 4; ++m) {
    const auto o = central_offsets(m);
    const auto w = fd_weights(o, m);
    for (int p = 0; p < static_cast<int>(o.size()); ++p) {
      double acc = 0.0;
      for (std::size_t i = 0; i < o.size(); ++i) acc += w[i] * std::pow(o[i] + 0.3, p);
      double exact = 0.0;
      if (p >= m) {
        exact = std::pow(0.3, p - m);
        for (int k = 0; k < m; ++k) exact *= p - k;
      }
      CHECK(std::abs(acc - exact) < 1e-10 * std::max(1.0, std::abs(exact)));
    }
  }
  CHECK_THROWS_AS(fd_weights({0.0, 1.0}, 2), DomainError);
}

TEST_CASE("flag estimates of the identity multiplier") {
  const auto rep = flag_estimate_report(*make_kernel("delta"), 3, 2);
  CHECK(rep.method == "jet");
  CHECK(rep.verdict() == Verdict::Pass);
  for (const auto& row : rep.rows) {
    if (row.alpha[0] + row.alpha[1] + row.beta == 0)
      CHECK(row.sup == doctest::Approx(1.0));
    else
      CHECK(row.sup == 0.0);
  }
  CHECK(rep.rows.size() == 10 * 3);
}

TEST_CASE("flag estimates of catalog kernels") {
  for (const char* name : {"riesz", "riesz-x", "perturbed-identity", "log-chirp"}) {
    const auto rep = flag_estimate_report(*make_kernel(name), 3, 2);
    CHECK_MESSAGE(rep.verdict() == Verdict::Pass, name);
    for (const auto& row : rep.rows) CHECK(std::isfinite(row.sup));
  }
  // Riesz: the ratio of d_w1^2 at w = 0 is 2 |lambda| / |lambda| = 2, a
  // dilation-invariant value the supremum must reach.
  const auto rep = flag_estimate_report(*make_kernel("riesz"), 3, 2);
  CHECK(rep.find({2, 0}, 0)->sup >= 2.0 - 1e-12);
  CHECK(rep.find({0, 0}, 0)->sup < 1.0);
}

TEST_CASE("difference route agrees with jets") {
  const auto riesz = make_kernel("log-chirp");
  const auto jets = flag_estimate_report(*riesz, 3, 2, small_grid());
  const auto fd = flag_estimate_report(WithoutJets(riesz), 3, 2, small_grid(), 1, 0.05);
  CHECK(fd.method == "finite-difference");
  CHECK(fd.skipped_points == 0);
  REQUIRE(fd.rows.size() == jets.rows.size());
  for (std::size_t i = 0; i < fd.rows.size(); ++i) {
    CHECK(std::abs(fd.rows[i].sup - jets.rows[i].sup) <= 5e-3 * jets.rows[i].sup + 1e-6);
    CHECK(fd.rows[i].verdict == jets.rows[i].verdict);
  }
}

TEST_CASE("the Euclidean norm is not a flag multiplier") {
  const auto abs_w = make_kernel("abs-w");
  const auto rep = flag_estimate_report(*abs_w, 3, 2);
  CHECK(rep.verdict() == Verdict::Fail);
  const auto* row = rep.find({2, 0}, 0);
  CHECK(row->verdict == Verdict::Fail);
  CHECK(std::hypot(row->argmax_w[0], row->argmax_w[1]) == 0.0);

  // Without the origin on the grid the blowup is found by probing inward.
  auto grid = EstimateGrid::defaults();
  grid.radii.erase(grid.radii.begin());
  const auto probed = flag_estimate_report(*abs_w, 2, 0, grid);
  const auto* r2 = probed.find({2, 0}, 0);
  CHECK(r2->verdict == Verdict::Fail);
  CHECK(r2->note == "grows toward w = 0");
  CHECK(std::hypot(r2->argmax_w[0], r2->argmax_w[1]) == doctest::Approx(0.0625));
  // |w| is also unbounded outward, which the grid alone cannot certify.
  CHECK(probed.find({0, 0}, 0)->verdict == Verdict::Inconclusive);
  CHECK(probed.find({1, 0}, 0)->verdict == Verdict::Inconclusive);
}

TEST_CASE("growth toward the outer boundary is inconclusive") {
  const auto k = make_kernel("w1^2 + w2^2");
  const auto rep = flag_estimate_report(*k, 1, 0);
  CHECK(rep.find({0, 0}, 0)->verdict == Verdict::Inconclusive);
  CHECK(rep.verdict() == Verdict::Inconclusive);
}

TEST_CASE("estimate report validation and output") {
  auto grid = EstimateGrid::defaults();
  grid.lambdas.push_back(0.0);
  CHECK_THROWS_AS(flag_estimate_report(*make_kernel("delta"), 1, 1, grid), DomainError);
  const auto rep = flag_estimate_report(*make_kernel("riesz"), 1, 1, small_grid());
  const auto csv = rep.to_csv();
  CHECK(csv.rfind("alpha,beta,lambda,sup_ratio,argmax_w1,argmax_w2,argmax_lambda,verdict\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rep.rows.size()) + 1);
  const auto j = rep.to_json();
  CHECK(j["rows"].size() == rep.rows.size());
  CHECK(j["verdict"] == "pass");
  CHECK(j.dump() == flag_estimate_report(*make_kernel("riesz"), 1, 1, small_grid(), 2).to_json().dump());
}

TEST_CASE("Sym0 seminorms") {
  const LineGrid g(64, 4.0);
  const auto one = constant_symbol(1.0, g, 1.0);
  const auto r1 = sym0_seminorms({one}, 3);
  CHECK(r1.find({0, 0}, 0)->sup == doctest::Approx(1.0));
  CHECK(r1.find({2, 1}, 0)->sup < 1e-10);

  // (1 + |w|^2)^{-1/2}: compare with jets on the same nodes.
  const auto expr = Expression::parse("(1 + w1^2 + w2^2)^(-1/2)");
  const auto a = SymbolGrid::sample(1.0, g, [&](double x, double y) {
    const Complex args[3] = {x, y, 1.0};
    return expr.evaluate(std::span<const Complex>(args, 3));
  });
  const auto rep = sym0_seminorms({a}, 4);
  const Axis xi = g.dual();
  for (int a1 = 0; a1 <= 4; ++a1)
    for (int a2 = 0; a1 + a2 <= 4; ++a2) {
      double sup = 0.0;
      for (std::size_t p = 3; p < 61; ++p)
        for (std::size_t q = 3; q < 61; ++q) {
          const Jet args[3] = {Jet::variable(3, 4, 0, xi.node(p)), Jet::variable(3, 4, 1, g.node(q)),
                               Jet::variable(3, 4, 2, 1.0)};
          const int e[3] = {a1, a2, 0};
          const double d = std::abs(expr.evaluate(std::span<const Jet>(args, 3)).derivative(e));
          sup = std::max(sup, d * std::pow(1.0 + std::hypot(xi.node(p), g.node(q)), a1 + a2));
        }
      const auto* row = rep.find({a1, a2}, 0);
      CHECK_MESSAGE(std::abs(row->sup - sup) < 1e-2 * sup + 1e-12, a1 << "," << a2);
    }

  // Catalog fiber symbols are uniformly bounded over lambda.
  const auto k = make_kernel("log-chirp");
  std::vector<SymbolGrid> family;
  for (int j = -2; j <= 2; ++j)
    for (double s : {-1.0, 1.0}) family.push_back(fiber_symbol(*k, s * std::ldexp(1.0, j), g));
  const auto fam = sym0_seminorms(family, 3, "log-chirp");
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int a2 = 0; a1 + a2 <= 3; ++a2) {
      const double uniform = fam.find({a1, a2}, 0)->sup;
      const double at_one = fam.find({a1, a2}, 0, 1.0)->sup;
      CHECK(uniform <= 2.0 * at_one);
    }
}
