#include "hflag/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hflag/catalog.hpp"
#include "hflag/error.hpp"
#include "hflag/group.hpp"
#include "hflag/schrodinger.hpp"
#include "hflag/symbolcalc.hpp"
#include "hflag/transform.hpp"

namespace hflag {

namespace {

constexpr double kPi = std::numbers::pi;

Complex cis(double cycles) { return std::polar(1.0, 2.0 * kPi * cycles); }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

GroupPoint random_point(std::mt19937_64& rng, double scale) {
  return GroupPoint(uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

// lambda uniform in [-4, 4] with |lambda| >= 0.05
double random_lambda(std::mt19937_64& rng) {
  const double l = uniform(rng, -4.0, 4.0);
  return std::abs(l) < 0.05 ? std::copysign(0.05, l) : l;
}

// exp(-pi (x^2/a + y^2/b + t^2/c)) e^{2 pi i (kx x + ky y + kt t)} centred at (x0, y0, 0)
struct Gaussian {
  double a = 1.0, b = 1.0, c = 1.0, x0 = 0.0, y0 = 0.0, kx = 0.0, ky = 0.0, kt = 0.0;
  Complex operator()(double x, double y, double t) const {
    const double dx = x - x0, dy = y - y0;
    return std::exp(-kPi * (dx * dx / a + dy * dy / b + t * t / c)) * cis(kx * x + ky * y + kt * t);
  }
};

SampledField sample(const Axis& v, const Axis& t, const Gaussian& g) {
  auto f = SampledField::group(v, t);
  f.fill([&](const std::vector<double>& z) { return g(z[0], z[1], z[2]); });
  return f;
}

// Field whose central frequencies are exactly the listed bins.
SampledField banded(const Axis& v, const Axis& t, const Gaussian& g, const std::vector<double>& bins) {
  const Axis tl = t.dual();
  SampledField s({v, v, tl}, {Domain::Spatial, Domain::Spatial, Domain::Spectral});
  for (double mu : bins) {
    const auto l = tl.index_of(mu);
    if (!l) throw ConfigError("lambda " + std::to_string(mu) + " is not a central-frequency bin");
    const Complex amp = std::exp(-kPi * g.c * mu * mu / 4.0) * cis(0.1 * mu);
    for (std::size_t i = 0; i < v.count(); ++i)
      for (std::size_t j = 0; j < v.count(); ++j) s.at(i, j, *l) = amp * g(v.node(i), v.node(j), 0.0);
  }
  return inverse_partial_fourier(s, {2});
}

StateVector gaussian_state(const LineGrid& g, double a, double center = 0.0, double k = 0.0) {
  return StateVector::sample(g, [&](double s) { return std::exp(-kPi * a * (s - center) * (s - center)) * cis(k * s); });
}

double hs_relative(const FiberOperator& a, const FiberOperator& b) {
  return (a.matrix - b.matrix).norm() / b.matrix.norm();
}

double max_abs(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// ---- group

double group_associativity(const IdentityConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const auto a = random_point(rng, 2.0), b = random_point(rng, 2.0), c = random_point(rng, 2.0);
    worst = std::max(worst, max_abs_difference(compose(compose(a, b), c), compose(a, compose(b, c))));
  }
  return worst;
}

double group_inverse(const IdentityConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 1);
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const auto a = random_point(rng, 2.0);
    worst = std::max({worst, max_abs_difference(compose(a, inverse(a)), identity(1)),
                      max_abs_difference(compose(inverse(a), a), identity(1))});
  }
  return worst;
}

double group_dilation(const IdentityConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 2);
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const auto a = random_point(rng, 2.0), b = random_point(rng, 2.0);
    const double j = uniform(rng, 0.25, 4.0);
    worst = std::max({worst, max_abs_difference(dilate(compose(a, b), j), compose(dilate(a, j), dilate(b, j))),
                      std::abs(norm(dilate(a, j)) - j * norm(a)) / std::max(1.0, j * norm(a))});
  }
  return worst;
}

// ---- transform

double transform_plancherel(const IdentityConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 3);
  std::normal_distribution<double> n;
  const Axis v(16, 4.0), t(32, 8.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    auto f = SampledField::group(v, t);
    for (auto& z : f.values()) z = Complex(n(rng), n(rng));
    const auto F = fourier(f);
    const double nf = l2_norm(f);
    worst = std::max({worst, std::abs(l2_norm(F) - nf) / nf, max_abs_difference(inverse_fourier(F), f) / nf});
  }
  return worst;
}

double transform_gaussian(const IdentityConfig&) {
  const Axis v(32, 4.0), t(64, 8.0);
  const auto F = fourier(sample(v, t, Gaussian{}));
  double worst = 0.0;
  for (std::size_t q = 0; q < F.size(); ++q) {
    const auto z = F.coordinates(q);
    bool inside = true;
    for (std::size_t a = 0; a < 3; ++a) inside = inside && std::abs(z[a]) <= F.axis(a).half_width() / 2;
    if (!inside) continue;  // relative error is meaningless where the Gaussian underflows
    const double exact = std::exp(-kPi * (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]));
    worst = std::max(worst, std::abs(F[q] - exact) / exact);
  }
  return worst;
}

// sum over central bins of the slice energies times the bin width is ||f||^2
double transform_slice_sum(const IdentityConfig&) {
  const Axis v(32, 4.0), t(64, 8.0);
  const auto f = sample(v, t, Gaussian{2.0, 2.0, 2.0, 0.1, -0.2, 0.2, 0.1, 0.3});
  const Axis tl = t.dual();
  double sum = 0.0;
  for (std::size_t l = 0; l < tl.count(); ++l) sum += slice_energy(f, tl.node(l)) * tl.spacing();
  const double n = l2_norm(f);
  return std::abs(sum - n * n) / (n * n);
}

// ---- schrodinger

double pi_unitarity(const IdentityConfig& cfg) {
  const LineGrid g(256, 8.0);
  const auto u = gaussian_state(g, 1.0, 0.3, 0.4);
  std::mt19937_64 rng(cfg.seed + 4);
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const auto h = random_point(rng, 1.0);
    worst = std::max(worst, std::abs(pi_point(h, random_lambda(rng), u).norm() - u.norm()));
  }
  return worst;
}

double pi_homomorphism(const IdentityConfig& cfg) {
  const LineGrid g(256, 8.0);
  const auto u = gaussian_state(g, 1.0, 0.3, 0.4);
  std::mt19937_64 rng(cfg.seed + 5);
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    const auto h = random_point(rng, 1.0), h2 = random_point(rng, 1.0);
    const double lambda = random_lambda(rng);
    worst = std::max(worst, max_abs(pi_point(h, lambda, pi_point(h2, lambda, u)).values,
                                    pi_point(compose(h, h2), lambda, u).values));
  }
  return worst;
}

// transform of c_{f,g} is f^(xi) g(eta) e^{2 pi i xi eta}; f = e^{-pi s^2}, g = e^{-2 pi s^2}
double c_fun_transform(const IdentityConfig&) {
  const LineGrid g(128, 8.0);
  const auto C = fourier(c_fun(gaussian_state(g, 1.0), gaussian_state(g, 2.0)));
  double worst = 0.0;
  for (std::size_t m = 0; m < g.count(); ++m)
    for (std::size_t j = 0; j < g.count(); ++j) {
      const double xi = C.axis(0).node(m), eta = C.axis(1).node(j);
      const Complex closed = std::exp(-kPi * (xi * xi + 2.0 * eta * eta)) * cis(xi * eta);
      worst = std::max(worst, std::abs(C[C.flat({m, j})] - closed));
    }
  return worst;
}

// transform of c_{f,g} o delta_r is |lambda|^{-1} f^(xi/r) g(eta/r) e^{2 pi i xi eta / r^2}, r = |lambda|^{1/2}
double c_fun_dilation(const IdentityConfig&) {
  const LineGrid line(128, 8.0);
  const auto c = c_fun(gaussian_state(line, 1.0), gaussian_state(line, 2.0));
  double worst = 0.0;
  for (double lambda : {1.0, -1.0, 4.0, -4.0}) {
    const double r = std::sqrt(std::abs(lambda));
    const Axis x(line.count(), c.axis(0).half_width() / r), y(line.count(), c.axis(1).half_width() / r);
    SampledField scaled({x, y}, {Domain::Spatial, Domain::Spatial});
    for (std::size_t q = 0; q < c.size(); ++q) scaled[q] = c[q];
    const auto hat = fourier(scaled);
    for (std::size_t m = 0; m < x.count(); ++m)
      for (std::size_t j = 0; j < y.count(); ++j) {
        const double xi = hat.axis(0).node(m), eta = hat.axis(1).node(j);
        const Complex expect =
            std::exp(-kPi * (xi * xi + 2.0 * eta * eta) / (r * r)) * cis(xi * eta / (r * r)) / std::abs(lambda);
        worst = std::max(worst, std::abs(hat[hat.flat({m, j})] - expect));
      }
  }
  return worst;
}

double pi_field_routes(const IdentityConfig&) {
  const Axis v(64, 4.0), t(64, 8.0);
  const auto f = sample(v, t, Gaussian{2.0, 2.0, 2.0, 0.2, -0.1, 0.3});
  const LineGrid line(64, 4.0);
  double worst = 0.0;
  for (double lambda : {1.0, -1.0})
    worst = std::max(worst, hs_relative(pi_field(f, lambda, line, PiFieldRoute::Quadrature),
                                        pi_field(f, lambda, line, PiFieldRoute::Kernel)));
  return worst;
}

double gramian_slice(const IdentityConfig&) {
  const Axis v(32, 4.0), t(64, 8.0);
  const auto f = sample(v, t, Gaussian{2.0, 2.0, 2.0, 0.1, -0.2, 0.2, 0.1});
  double worst = 0.0;
  for (double lambda : {0.25, 1.0, -1.0, 1.5})
    worst = std::max(worst, std::abs(gramian(f, lambda, fitted_line_grid(lambda, 2.5, 3.5)) - slice_energy(f, -lambda)));
  return worst;
}

// ---- symbolcalc

double hs_symbol_norm(const IdentityConfig&) {
  const Axis v(64, 4.0), t(64, 8.0);
  const auto f = sample(v, t, Gaussian{2.0, 2.0, 2.0, 0.2, -0.1, 0.3});
  const LineGrid line(64, 4.0);
  double worst = 0.0;
  for (double lambda : {1.0, -1.0}) {
    const auto a = pi_field(f, lambda, line);
    const double h = hs_norm(a);
    worst = std::max(worst, std::abs(h - kn_symbol_of(a).l2_norm()) / h);
  }
  return worst;
}

double kn_round_trip(const IdentityConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 6);
  std::normal_distribution<double> n;
  const LineGrid g(32, 3.0);
  FiberOperator a{1.0, g, Eigen::MatrixXcd(32, 32)};
  for (Eigen::Index i = 0; i < a.matrix.size(); ++i) a.matrix.data()[i] = Complex(n(rng), n(rng));
  return (kn_quantize(kn_symbol_of(a)).matrix - a.matrix).cwiseAbs().maxCoeff() / a.matrix.cwiseAbs().maxCoeff();
}

double twisted_associativity(const IdentityConfig&) {
  const LineGrid g(32, 3.0);
  const auto a = fiber_symbol(*make_kernel("riesz"), 1.0, g);
  const auto b = fiber_symbol(*make_kernel("log-chirp"), 1.0, g);
  const auto c = fiber_symbol(*make_kernel("riesz-x"), 1.0, g);
  const auto l = twisted_product(twisted_product(a, b), c), r = twisted_product(a, twisted_product(b, c));
  return (l.values - r.values).cwiseAbs().maxCoeff();
}

// pi_{K * phi} = pi_K pi_phi for the Riesz kernel at every band fiber
double intertwining(const IdentityConfig& cfg) {
  const Axis v(64, 5.0), t(64, 2.0);
  const auto phi = banded(v, t, Gaussian{0.7, 0.7, 0.25, 0.1, -0.2, 0.2}, cfg.lambda_band);
  const auto riesz = make_kernel("riesz");
  const auto kphi = convolve_spectrum(*riesz, phi, cfg.jobs);
  double worst = 0.0;
  for (double lambda : cfg.lambda_band) {
    const LineGrid line = fitted_line_grid(lambda, 3.0, 3.5);
    worst = std::max(worst, hs_relative(pi_field(kphi, lambda, line),
                                        compose(kn_quantize(fiber_symbol(*riesz, lambda, line)),
                                                pi_field(phi, lambda, line))));
  }
  return worst;
}

}  // namespace

SampledField random_banded_field(const Axis& v, const Axis& t, const std::vector<double>& bins, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Gaussian g;
  g.a = uniform(rng, 0.6, 1.6);
  g.b = uniform(rng, 0.6, 1.6);
  g.c = 0.25;
  g.x0 = uniform(rng, -0.5, 0.5);
  g.y0 = uniform(rng, -0.5, 0.5);
  g.kx = uniform(rng, -0.5, 0.5);
  g.ky = uniform(rng, -0.5, 0.5);
  return banded(v, t, g, bins);
}

void IdentityConfig::validate() const {
  if (draws < 1) throw ConfigError("identity draws must be positive");
  if (lambda_band.empty()) throw ConfigError("lambda band is empty");
  for (double l : lambda_band) {
    if (!std::isfinite(l) || l == 0.0) throw ConfigError("lambda band must exclude lambda = 0");
    if (std::abs(l) > 4.0 || std::abs(l * 4.0 - std::round(l * 4.0)) > 1e-12)
      throw ConfigError("lambda band values must be multiples of 1/4 in [-4, 4]");
  }
  for (const auto& [name, tol] : tolerances) {
    find_identity(name);
    if (!(tol > 0.0)) throw ConfigError("tolerance for '" + name + "' must be positive");
  }
}

const std::vector<IdentitySpec>& identity_registry() {
  static const std::vector<IdentitySpec> r = {
      {"group.associativity", "group", "(ab)c = a(bc) on random points", 1e-12, group_associativity},
      {"group.inverse", "group", "a a^{-1} = a^{-1} a = e", 1e-14, group_inverse},
      {"group.dilation", "group", "dilations are automorphisms and scale the norm", 1e-12, group_dilation},
      {"transform.plancherel", "transform", "||f^|| = ||f|| and inverse recovers f", 1e-10, transform_plancherel},
      {"transform.gaussian", "transform", "Gaussian transform against the closed form (relative)", 1e-8,
       transform_gaussian},
      {"transform.slice_sum", "transform", "sum of central slice energies is ||f||^2", 1e-4, transform_slice_sum},
      {"schrodinger.unitarity", "schrodinger", "||pi_h u|| = ||u||", 1e-12, pi_unitarity},
      {"schrodinger.homomorphism", "schrodinger", "pi_{hh'} = pi_h pi_h'", 1e-8, pi_homomorphism},
      {"schrodinger.c_fun_transform", "schrodinger", "transform of c_{f,g} in closed form", 1e-8, c_fun_transform},
      {"schrodinger.c_fun_dilation", "schrodinger", "dilation scaling of c_{f,g}", 1e-8, c_fun_dilation},
      {"schrodinger.pi_field_routes", "schrodinger", "kernel and quadrature routes to pi_f agree (HS)", 1e-6,
       pi_field_routes},
      {"schrodinger.gramian_slice", "schrodinger", "|lambda| ||pi_f||_HS^2 is the central slice energy", 1e-6,
       gramian_slice},
      {"symbolcalc.hs_symbol_norm", "symbolcalc", "||A||_HS = ||symbol of A||_2", 1e-10, hs_symbol_norm},
      {"symbolcalc.kn_round_trip", "symbolcalc", "quantise(symbol(A)) = A", 1e-12, kn_round_trip},
      {"symbolcalc.twisted_associativity", "symbolcalc", "(a # b) # c = a # (b # c)", 1e-9, twisted_associativity},
      {"symbolcalc.intertwining", "symbolcalc", "pi_{K * phi} = pi_K pi_phi for the Riesz kernel (HS)", 1e-5,
       intertwining},
  };
  return r;
}

const IdentitySpec& find_identity(const std::string& name) {
  for (const auto& s : identity_registry())
    if (s.name == name) return s;
  throw ConfigError("unknown identity '" + name + "'");
}

IdentityResult run_identity(const IdentitySpec& spec, const IdentityConfig& cfg) {
  IdentityResult r{spec.name, spec.module, 0.0, spec.tolerance};
  if (const auto it = cfg.tolerances.find(spec.name); it != cfg.tolerances.end()) r.tolerance = it->second;
  r.max_error = spec.run(cfg);
  return r;
}

std::vector<IdentityResult> run_identities(const IdentityConfig& cfg, const std::string& prefix) {
  cfg.validate();
  std::vector<IdentityResult> out;
  for (const auto& s : identity_registry())
    if (s.name.rfind(prefix, 0) == 0) out.push_back(run_identity(s, cfg));
  return out;
}

nlohmann::json identities_json(const IdentityConfig& cfg, const std::vector<IdentityResult>& results) {
  nlohmann::json rows = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed();
    rows.push_back({{"name", r.name},
                    {"module", r.module},
                    {"max_error", std::isfinite(r.max_error) ? nlohmann::json(r.max_error) : nlohmann::json("nan")},
                    {"tolerance", r.tolerance},
                    {"passed", r.passed()}});
  }
  return {{"seed", cfg.seed}, {"draws", cfg.draws}, {"lambda_band", cfg.lambda_band}, {"identities", rows},
          {"passed", all}};
}

}  // namespace hflag
