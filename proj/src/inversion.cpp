#include "hflag/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "hflag/error.hpp"
#include "hflag/parallel.hpp"

namespace hflag {

namespace {

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

double max_abs_minus_one(const SymbolGrid& a) {
  return (a.values.array() - Complex(1.0)).abs().maxCoeff();
}

}  // namespace

FiberOperator invert_fiber(const FiberOperator& a, double cond_limit, FiberStats* stats) {
  if (a.matrix.rows() != a.matrix.cols() || a.matrix.rows() == 0)
    throw DimensionError("invert_fiber needs a square non-empty matrix");
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.matrix);
  const auto& s = svd.singularValues();
  FiberStats st;
  st.sigma_max = s(0);
  st.sigma_min = s(s.size() - 1);
  st.condition = st.sigma_min > 0.0 ? st.sigma_max / st.sigma_min : std::numeric_limits<double>::infinity();
  if (stats) *stats = st;
  if (!(st.condition <= cond_limit))
    throw NonInvertibleError("fiber numerically non-invertible at this discretization (lambda = " +
                                 fmt(a.lambda) + ", condition " + fmt(st.condition) + ")",
                             {a.lambda});
  return {a.lambda, a.grid, a.matrix.partialPivLu().inverse()};
}

NeumannResult neumann_inverse(const SymbolGrid& s, double eps, int k_max) {
  if (k_max < 0) throw ConfigError("Neumann series needs k_max >= 0");
  NeumannResult r;
  r.op_norm = operator_norm(kn_quantize(s));
  const double q = std::abs(eps) * r.op_norm;
  if (q >= 1.0) throw DivergenceError("Neumann series diverges: eps ||Op(s)|| = " + fmt(q));
  r.truncation_bound = std::pow(q, k_max + 1) / (1.0 - q);
  SymbolGrid term = constant_symbol(s.lambda, s.grid, 1.0);
  r.b = term;
  for (int k = 1; k <= k_max; ++k) {
    term = Complex(-eps) * twisted_product(term, s);
    r.b = r.b + term;
  }
  return r;
}

std::vector<double> InversionOptions::lambda_grid() const {
  if (!lambdas.empty()) return lambdas;
  std::vector<double> g;
  for (int j = 2; j >= -2; --j) g.push_back(-std::ldexp(1.0, j));
  for (int j = -2; j <= 2; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

FiberResult solve_fiber(const Spectrum& k, double lambda, const InversionOptions& opt) {
  FiberResult f;
  f.lambda = lambda;
  f.a = fiber_symbol(k, lambda, opt.fiber_grid);
  f.A = kn_quantize(f.a);
  const double norm = f.A.matrix.norm();
  f.hermitian_defect = norm > 0.0 ? (f.A.matrix - f.A.matrix.adjoint()).norm() / norm : 0.0;
  if (f.hermitian_defect > opt.hermitian_tolerance) {
    if (opt.strict_symmetric)
      throw ConfigError("kernel '" + k.name() + "' is not symmetric (fiber Hermitian defect " +
                        fmt(f.hermitian_defect) + " at lambda = " + fmt(lambda) + ")");
    // Reduction to the symmetric case: invert A*A, then A^{-1} = (A*A)^{-1} A*.
    const FiberOperator gram{lambda, f.A.grid, f.A.matrix.adjoint() * f.A.matrix};
    FiberStats gs;
    const FiberOperator gi = invert_fiber(gram, opt.cond_limit * opt.cond_limit, &gs);
    f.stats.sigma_max = std::sqrt(gs.sigma_max);
    f.stats.sigma_min = std::sqrt(gs.sigma_min);
    f.stats.condition = std::sqrt(gs.condition);
    if (!(f.stats.condition <= opt.cond_limit))
      throw NonInvertibleError("fiber numerically non-invertible at this discretization (lambda = " +
                                   fmt(lambda) + ")",
                               {lambda});
    f.B = {lambda, f.A.grid, gi.matrix * f.A.matrix.adjoint()};
    f.symmetrized = true;
  } else {
    f.B = invert_fiber(f.A, opt.cond_limit, &f.stats);
  }
  f.b = kn_symbol_of(f.B);
  f.residual = max_abs_minus_one(twisted_product(f.a, f.b));
  f.right_residual = max_abs_minus_one(twisted_product(f.b, f.a));
  return f;
}

InverseSpectrum::InverseSpectrum(SpectrumPtr k, InversionOptions opt) : k_(std::move(k)), opt_(std::move(opt)) {
  if (!k_) throw ConfigError("inverse spectrum needs a kernel");
}

std::shared_ptr<const FiberResult> InverseSpectrum::fiber(double lambda) const {
  {
    std::lock_guard lock(mutex_);
    const auto it = cache_.find(lambda);
    if (it != cache_.end()) return it->second;
  }
  auto f = std::make_shared<const FiberResult>(solve_fiber(*k_, lambda, opt_));
  std::lock_guard lock(mutex_);
  return cache_.emplace(lambda, std::move(f)).first->second;
}

void InverseSpectrum::insert(std::shared_ptr<const FiberResult> f) const {
  std::lock_guard lock(mutex_);
  cache_.emplace(f->lambda, std::move(f));
}

std::size_t InverseSpectrum::extrapolated() const {
  std::lock_guard lock(mutex_);
  return extrapolated_;
}

namespace {

constexpr int kStencil = 6;  // degree-5 Lagrange

// First stencil node and weights for x on an axis; clamps x into the node range.
int lagrange(const Axis& ax, double x, double w[kStencil], bool& clamped) {
  const int n = static_cast<int>(ax.count());
  const double lo = ax.node(0), hi = ax.node(n - 1);
  clamped = x < lo || x > hi;
  x = std::clamp(x, lo, hi);
  const double p = (x - lo) / ax.spacing();
  const int i0 = std::clamp(static_cast<int>(std::floor(p)) - kStencil / 2 + 1, 0, n - kStencil);
  for (int a = 0; a < kStencil; ++a) {
    double v = 1.0;
    for (int b = 0; b < kStencil; ++b)
      if (b != a) v *= (p - (i0 + b)) / static_cast<double>(a - b);
    w[a] = v;
  }
  return i0;
}

}  // namespace

bool InverseSpectrum::in_domain(double w1, double w2, double mu) const {
  if (mu == 0.0 || !std::isfinite(mu) || !std::isfinite(w1) || !std::isfinite(w2)) return false;
  const double r = std::sqrt(std::abs(mu));
  const double xi = sgn(mu) * w1 / r, eta = -w2 / r;
  const Axis d = opt_.fiber_grid.dual();
  const Axis& g = opt_.fiber_grid;
  const int e = kStencil / 2;
  return xi >= d.node(e) && xi <= d.node(d.count() - 1 - e) && eta >= g.node(e) &&
         eta <= g.node(g.count() - 1 - e);
}

Complex InverseSpectrum::value(double w1, double w2, double mu) const {
  if (mu == 0.0 || !std::isfinite(mu)) throw DomainError("inverse spectrum evaluated at lambda = 0");
  const auto f = fiber(-mu);
  const double r = std::sqrt(std::abs(mu));
  const double xi = sgn(mu) * w1 / r, eta = -w2 / r;
  double wx[kStencil], wy[kStencil];
  bool cx = false, cy = false;
  const int i0 = lagrange(opt_.fiber_grid.dual(), xi, wx, cx);
  const int j0 = lagrange(opt_.fiber_grid, eta, wy, cy);
  if (cx || cy) {
    std::lock_guard lock(mutex_);
    ++extrapolated_;
  }
  Complex v = 0.0;
  for (int a = 0; a < kStencil; ++a)
    for (int b = 0; b < kStencil; ++b) v += wx[a] * wy[b] * f->b.values(i0 + a, j0 + b);
  return v;
}

}  // namespace hflag

namespace hflag {

double InversionResult::max_residual() const {
  double r = 0.0;
  for (const auto& f : fibers) r = std::max({r, f->residual, f->right_residual});
  return r;
}

double InversionResult::uniform_inverse_bound() const {
  double r = 0.0;
  for (const auto& f : fibers) r = std::max(r, f->inverse_norm());
  return r;
}

double InversionResult::min_sigma() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& f : fibers) r = std::min(r, f->stats.sigma_min);
  return r;
}

nlohmann::json InversionResult::to_json() const {
  nlohmann::json j;
  j["kernel"] = kernel;
  j["fiber_grid"] = {{"count", options.fiber_grid.count()}, {"half_width", options.fiber_grid.half_width()}};
  j["cond_limit"] = options.cond_limit;
  j["strict_symmetric"] = options.strict_symmetric;
  j["max_residual"] = max_residual();
  j["uniform_inverse_bound"] = uniform_inverse_bound();
  j["min_sigma"] = min_sigma();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& f : fibers)
    rows.push_back({{"lambda", f->lambda},
                    {"sigma_min", f->stats.sigma_min},
                    {"sigma_max", f->stats.sigma_max},
                    {"condition", f->stats.condition},
                    {"inverse_norm", f->inverse_norm()},
                    {"hermitian_defect", f->hermitian_defect},
                    {"symmetrized", f->symmetrized},
                    {"residual", f->residual},
                    {"right_residual", f->right_residual}});
  j["fibers"] = std::move(rows);
  return j;
}

std::string InversionResult::residual_csv() const {
  std::ostringstream o;
  o << "lambda,sigma_min,sigma_max,condition,inverse_norm,hermitian_defect,symmetrized,residual,right_residual\n";
  for (const auto& f : fibers)
    o << fmt(f->lambda) << ',' << fmt(f->stats.sigma_min) << ',' << fmt(f->stats.sigma_max) << ','
      << fmt(f->stats.condition) << ',' << fmt(f->inverse_norm()) << ',' << fmt(f->hermitian_defect) << ','
      << (f->symmetrized ? 1 : 0) << ',' << fmt(f->residual) << ',' << fmt(f->right_residual) << '\n';
  return o.str();
}

InversionResult invert_flag(SpectrumPtr k, const InversionOptions& opt) {
  if (!k) throw ConfigError("invert_flag needs a kernel");
  const auto lambdas = opt.lambda_grid();
  for (double l : lambdas)
    if (l == 0.0 || !std::isfinite(l)) throw DomainError("lambda grid touches lambda = 0");
  std::vector<std::shared_ptr<const FiberResult>> fibers(lambdas.size());
  std::vector<char> failed(lambdas.size(), 0);
  parallel_for(lambdas.size(), opt.jobs, [&](std::size_t i) {
    try {
      fibers[i] = std::make_shared<const FiberResult>(solve_fiber(*k, lambdas[i], opt));
    } catch (const NonInvertibleError&) {
      failed[i] = 1;
    }
  });
  std::vector<double> bad;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    if (failed[i]) bad.push_back(lambdas[i]);
  if (!bad.empty()) {
    std::string list;
    for (double l : bad) list += (list.empty() ? "" : ", ") + fmt(l);
    throw NonInvertibleError("Op(" + k->name() + ") is not invertible at this scale: fibers at lambda = " + list +
                                 " exceed the condition limit",
                             bad);
  }
  InversionResult r;
  r.kernel = k->name();
  r.options = opt;
  auto inv = std::make_shared<InverseSpectrum>(k, opt);
  for (const auto& f : fibers) inv->insert(f);
  r.fibers = std::move(fibers);
  std::sort(r.fibers.begin(), r.fibers.end(), [](const auto& a, const auto& b) { return a->lambda < b->lambda; });
  r.inverse = std::move(inv);
  return r;
}

SymbolGrid lambda_derivative_symbol(const Spectrum& k, double lambda, const LineGrid& grid) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("lambda derivative at lambda = 0");
  SymbolGrid d(lambda, grid);
  if (k.has_jet()) {
    // a = K^(w1(lambda), w2(lambda), -lambda), w1 = -sgn sqrt|lambda| xi, w2 = -sqrt|lambda| eta
    const double r = std::sqrt(std::abs(lambda));
    const Axis x = grid.dual();
    const int e1[3] = {1, 0, 0}, e2[3] = {0, 1, 0}, e3[3] = {0, 0, 1};
    for (std::size_t m = 0; m < grid.count(); ++m)
      for (std::size_t j = 0; j < grid.count(); ++j) {
        const double xi = x.node(m), eta = grid.node(j);
        const Jet jet = k.jet(-sgn(lambda) * r * xi, -r * eta, -lambda, 1);
        d.values(m, j) = jet.derivative(e1) * (-xi / (2.0 * r)) +
                         jet.derivative(e2) * (-sgn(lambda) * eta / (2.0 * r)) - jet.derivative(e3);
      }
    return d;
  }
  const auto o = central_offsets(1);
  const auto w = fd_weights(o, 1);
  const double h = 1e-3 * std::abs(lambda);
  for (std::size_t i = 0; i < o.size(); ++i)
    if (w[i] != 0.0) d.values += (w[i] / h) * fiber_symbol(k, lambda + o[i] * h, grid).values;
  return d;
}

double DerivativeCheck::max_relative_error() const {
  double r = 0.0;
  for (double e : relative_errors) r = std::max(r, e);
  return r;
}

double DerivativeCheck::spread(const std::vector<int>& alpha, int m) const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& row : seminorms.rows)
    if (row.alpha == alpha && row.beta == m && !std::isnan(row.lambda)) {
      lo = std::min(lo, row.sup);
      hi = std::max(hi, row.sup);
    }
  if (hi == 0.0) return 1.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

nlohmann::json DerivativeCheck::to_json() const {
  nlohmann::json j;
  j["lambdas"] = lambdas;
  j["relative_errors"] = relative_errors;
  j["max_relative_error"] = max_relative_error();
  j["seminorms"] = seminorms.to_json();
  return j;
}

DerivativeCheck lambda_derivative_check(const InversionResult& result, int m_max, int alpha_max, double rel_step) {
  if (!result.inverse) throw ConfigError("inversion result carries no inverse spectrum");
  if (m_max < 1) throw ConfigError("lambda derivative check needs M >= 1");
  if (!(rel_step > 0.0 && rel_step < 0.1)) throw ConfigError("relative lambda step must lie in (0, 0.1)");
  const InverseSpectrum& inv = *result.inverse;
  const Spectrum& k = *inv.kernel();
  const LineGrid& grid = result.options.fiber_grid;
  DerivativeCheck out;
  std::vector<std::vector<SymbolGrid>> families(m_max);
  for (const auto& f : result.fibers) {
    const double lambda = f->lambda;
    const double h = rel_step * std::abs(lambda);
    for (int m = 1; m <= m_max; ++m) {
      const auto o = central_offsets(m);
      const auto w = fd_weights(o, m);
      SymbolGrid d(lambda, grid);
      for (std::size_t i = 0; i < o.size(); ++i)
        if (w[i] != 0.0) d.values += w[i] * inv.fiber(lambda + o[i] * h)->b.values;
      d.values *= std::pow(std::abs(lambda), m) / std::pow(h, m);
      if (m == 1) {
        const SymbolGrid da = lambda_derivative_symbol(k, lambda, grid);
        const SymbolGrid rhs = Complex(-1.0) * twisted_product(twisted_product(f->b, da), f->b);
        const Eigen::MatrixXcd db = d.values / std::abs(lambda);
        const double scale = std::max(rhs.values.norm(), 1e-8 * f->b.values.norm());
        out.lambdas.push_back(lambda);
        out.relative_errors.push_back((db - rhs.values).norm() / scale);
      }
      families[m - 1].push_back(std::move(d));
    }
  }
  out.seminorms.kind = "lambda-derivative";
  out.seminorms.subject = result.kernel;
  out.seminorms.method = "node-difference";
  out.seminorms.fd_order = 4;
  out.seminorms.fd_step = rel_step;
  for (int m = 1; m <= m_max; ++m) {
    auto rep = sym0_seminorms(families[m - 1], alpha_max, result.kernel);
    for (auto& row : rep.rows) {
      row.beta = m;
      out.seminorms.rows.push_back(row);
    }
    if (m == 1) out.seminorms.lambdas = rep.lambdas;
  }
  return out;
}

double VerifyReport::max_left() const {
  return left.empty() ? 0.0 : *std::max_element(left.begin(), left.end());
}

double VerifyReport::max_right() const {
  return right.empty() ? 0.0 : *std::max_element(right.begin(), right.end());
}

nlohmann::json VerifyReport::to_json() const {
  return {{"lambdas", lambdas},         {"left", left},           {"right", right},
          {"max_left", max_left()},     {"max_right", max_right()}, {"field_residuals", field_residuals}};
}

VerifyReport verify_inverse(const Spectrum& k, const Spectrum& l, const std::vector<SampledField>& test_fields,
                            const InversionOptions& opt) {
  VerifyReport rep;
  rep.lambdas = opt.lambda_grid();
  rep.left.resize(rep.lambdas.size());
  rep.right.resize(rep.lambdas.size());
  parallel_for(rep.lambdas.size(), opt.jobs, [&](std::size_t i) {
    const double lambda = rep.lambdas[i];
    const auto a = kn_quantize(fiber_symbol(k, lambda, opt.fiber_grid));
    const auto b = kn_quantize(fiber_symbol(l, lambda, opt.fiber_grid));
    const auto id = Eigen::MatrixXcd::Identity(a.matrix.rows(), a.matrix.cols());
    rep.left[i] = operator_norm({lambda, a.grid, a.matrix * b.matrix - id});
    rep.right[i] = operator_norm({lambda, a.grid, b.matrix * a.matrix - id});
  });
  for (const auto& f : test_fields) {
    const auto g = convolve_spectrum(l, convolve_spectrum(k, f, opt.jobs), opt.jobs);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) {
      num += std::norm(g[q] - f[q]);
      den += std::norm(f[q]);
    }
    rep.field_residuals.push_back(den > 0.0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return rep;
}

double UniformReport::min_sigma() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) r = std::min(r, row.sigma_min);
  return r;
}

double UniformReport::max_inverse_norm() const {
  double r = 0.0;
  for (const auto& row : rows) r = std::max(r, row.inverse_norm);
  return r;
}

std::vector<double> UniformReport::below_threshold() const {
  std::vector<double> out;
  for (const auto& row : rows)
    if (row.sigma_min < threshold) out.push_back(row.lambda);
  return out;
}

bool UniformReport::numerically_invertible() const {
  for (const auto& row : rows)
    if (!(row.sigma_max <= cond_limit * row.sigma_min)) return false;
  return true;
}

nlohmann::json UniformReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows)
    rs.push_back({{"lambda", r.lambda},
                  {"sigma_min", r.sigma_min},
                  {"sigma_max", r.sigma_max},
                  {"inverse_norm", r.inverse_norm},
                  {"hermitian_defect", r.hermitian_defect},
                  {"min_vector_radius", r.min_vector_radius}});
  return {{"rows", rs},
          {"threshold", threshold},
          {"cond_limit", cond_limit},
          {"min_sigma", min_sigma()},
          {"max_inverse_norm", max_inverse_norm()},
          {"below_threshold", below_threshold()},
          {"numerically_invertible", numerically_invertible()}};
}

std::string UniformReport::to_csv() const {
  std::ostringstream o;
  o << "lambda,sigma_min,sigma_max,inverse_norm,hermitian_defect,min_vector_radius\n";
  for (const auto& r : rows)
    o << fmt(r.lambda) << ',' << fmt(r.sigma_min) << ',' << fmt(r.sigma_max) << ',' << fmt(r.inverse_norm) << ','
      << fmt(r.hermitian_defect) << ',' << fmt(r.min_vector_radius) << '\n';
  return o.str();
}

namespace {

double phase_space_radius(const LineGrid& g, const Eigen::VectorXcd& u) {
  const Axis d = g.dual();
  const std::size_t n = g.count();
  double e_eta = 0.0, mass = 0.0, e_xi = 0.0, mass_hat = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    e_eta += std::norm(u(j)) * g.node(j) * g.node(j);
    mass += std::norm(u(j));
  }
  for (std::size_t m = 0; m < n; ++m) {
    Complex h = 0.0;
    for (std::size_t j = 0; j < n; ++j) h += u(j) * std::polar(1.0, -2.0 * std::numbers::pi * d.node(m) * g.node(j));
    e_xi += std::norm(h) * d.node(m) * d.node(m);
    mass_hat += std::norm(h);
  }
  return std::sqrt(e_eta / mass + e_xi / mass_hat);
}

}  // namespace

UniformReport uniform_invertibility_report(const Spectrum& k, const InversionOptions& opt, double threshold) {
  UniformReport rep;
  rep.threshold = threshold;
  rep.cond_limit = opt.cond_limit;
  const auto lambdas = opt.lambda_grid();
  rep.rows.resize(lambdas.size());
  parallel_for(lambdas.size(), opt.jobs, [&](std::size_t i) {
    const auto a = kn_quantize(fiber_symbol(k, lambdas[i], opt.fiber_grid));
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a.matrix, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    UniformRow& row = rep.rows[i];
    row.min_vector_radius = phase_space_radius(opt.fiber_grid, svd.matrixV().col(s.size() - 1));
    row.lambda = lambdas[i];
    row.sigma_max = s(0);
    row.sigma_min = s(s.size() - 1);
    row.inverse_norm = row.sigma_min > 0.0 ? 1.0 / row.sigma_min : std::numeric_limits<double>::infinity();
    const double norm = a.matrix.norm();
    row.hermitian_defect = norm > 0.0 ? (a.matrix - a.matrix.adjoint()).norm() / norm : 0.0;
  });
  return rep;
}

}  // namespace hflag
