#include "hflag/schrodinger.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hflag/error.hpp"
#include "hflag/fft.hpp"
#include "hflag/transform.hpp"

namespace hflag {

namespace {

Complex cis(double cycles) {
  const double a = 2.0 * std::numbers::pi * cycles;
  return {std::cos(a), std::sin(a)};
}

void require_nonzero(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw DomainError("Schroedinger representation needs a finite lambda != 0");
}

void require_same_grid(const LineGrid& a, const LineGrid& b) {
  if (!(a == b)) throw DimensionError("states or operators live on different line grids");
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

LineGrid fitted_line_grid(double lambda, double w_extent, double x_extent, double margin,
                          std::size_t min_count) {
  require_nonzero(lambda);
  const double r = std::sqrt(std::abs(lambda));
  const double reach = std::max(w_extent / r, x_extent * r) + margin;
  const auto n = std::max(min_count, next_power_of_two(static_cast<std::size_t>(std::ceil(4.0 * reach * reach))));
  return LineGrid(n, std::sqrt(static_cast<double>(n)) / 2.0);
}

StateVector::StateVector(const LineGrid& g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != grid.count())
    throw DimensionError("state vector length does not match its grid");
}

StateVector StateVector::sample(const LineGrid& g, const std::function<Complex(double)>& fn) {
  Eigen::VectorXcd v(g.count());
  for (std::size_t j = 0; j < g.count(); ++j) v(j) = fn(g.node(j));
  return StateVector(g, std::move(v));
}

double StateVector::norm() const { return values.norm() * std::sqrt(grid.spacing()); }

Complex pairing(const StateVector& u, const StateVector& g) {
  require_same_grid(u.grid, g.grid);
  return u.grid.spacing() * (u.values.array() * g.values.array()).sum();
}

StateVector FiberOperator::apply(const StateVector& u) const {
  require_same_grid(grid, u.grid);
  return StateVector(grid, matrix * u.values);
}

FiberOperator identity_operator(double lambda, const LineGrid& grid) {
  return {lambda, grid, Eigen::MatrixXcd::Identity(grid.count(), grid.count())};
}

FiberOperator compose(const FiberOperator& a, const FiberOperator& b) {
  require_same_grid(a.grid, b.grid);
  if (!std::isnan(a.lambda) && !std::isnan(b.lambda) && a.lambda != b.lambda)
    throw DimensionError("operators belong to different fibers");
  return {std::isnan(a.lambda) ? b.lambda : a.lambda, a.grid, a.matrix * b.matrix};
}

FiberOperator adjoint(const FiberOperator& a) { return {a.lambda, a.grid, a.matrix.adjoint()}; }

StateVector translate(const StateVector& u, double a) {
  const LineGrid& g = u.grid;
  const Axis d = g.dual();
  std::vector<Complex> v(u.values.data(), u.values.data() + u.values.size());
  v = centered_dft(v, g, d, -1, g.spacing());
  for (std::size_t m = 0; m < v.size(); ++m) v[m] *= cis(d.node(m) * a);
  v = centered_dft(v, d, g, 1, d.spacing());
  return StateVector(g, Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

StateVector pi_point(const GroupPoint& h, double lambda, const StateVector& u) {
  require_nonzero(lambda);
  if (h.n() != 1) throw DimensionError("pi_point is implemented for H^1");
  const double r = std::sqrt(std::abs(lambda));
  StateVector s = translate(u, sgn(lambda) * r * h.x[0]);
  const Complex central = cis(lambda * h.t);
  for (std::size_t j = 0; j < u.grid.count(); ++j) s.values(j) *= central * cis(r * h.y[0] * u.grid.node(j));
  return s;
}

SampledField c_fun(const StateVector& f, const StateVector& g) {
  require_same_grid(f.grid, g.grid);
  const LineGrid& s = f.grid;
  const Axis d = s.dual();
  const std::size_t n = s.count();
  SampledField c({s, d}, {Domain::Spatial, Domain::Spatial});
  std::vector<Complex> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) p[j] = f.values(s.sum_index(j, k)) * g.values(j);
    const auto row = centered_dft(p, s, d, 1, s.spacing());
    for (std::size_t m = 0; m < n; ++m) c[c.flat({k, m})] = row[m];
  }
  return c;
}

Complex c_fun_at(const StateVector& f, const StateVector& g, double x, double y) {
  require_same_grid(f.grid, g.grid);
  const StateVector fx = translate(f, x);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < f.grid.count(); ++j)
    sum += cis(y * f.grid.node(j)) * fx.values(j) * g.values(j);
  return f.grid.spacing() * sum;
}

Complex C_fun(const StateVector& f, const StateVector& g, double lambda, const GroupPoint& h) {
  require_same_grid(f.grid, g.grid);
  return pairing(pi_point(h, lambda, f), g);
}

namespace {

// Kernel route. Omega(s, s') = |lambda|^{-1/2} G(sgn(lambda)(s' - s)/sqrt|lambda|, -sqrt|lambda| s)
// where G(x, eta) is the y-transform of the slice F_t f(x, y, -lambda).
FiberOperator pi_field_kernel(const SampledField& slice, double lambda, const LineGrid& grid) {
  const Axis& ax = slice.axis(0);
  const Axis& ay = slice.axis(1);
  const Axis dx = ax.dual();
  const double by = ay.dual().half_width();
  const double r = std::sqrt(std::abs(lambda));
  const std::size_t n = grid.count(), mx = ax.count(), my = ay.count();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Complex> column(mx);
  for (std::size_t j = 0; j < n; ++j) {
    const double eta = -r * grid.node(j);
    if (!(eta >= -by && eta < by)) continue;
    for (std::size_t i = 0; i < mx; ++i) {
      Complex s = 0.0;
      for (std::size_t q = 0; q < my; ++q) s += slice[slice.flat({i, q})] * cis(-eta * ay.node(q));
      column[i] = ay.spacing() * s;
    }
    const auto coeff = centered_dft(column, ax, dx, -1, ax.spacing());
    for (std::size_t k = 0; k < n; ++k) {
      const double x = sgn(lambda) * (grid.node(k) - grid.node(j)) / r;
      if (!(x >= -ax.half_width() && x < ax.half_width())) continue;
      Complex g = 0.0;
      for (std::size_t m = 0; m < mx; ++m) g += coeff[m] * cis(dx.node(m) * x);
      a(j, k) = grid.spacing() * g * dx.spacing() / r;
    }
  }
  return {lambda, grid, a};
}

// Quadrature route: sum_{x_i, y_q} dx dy F_t f(x_i, y_q, -lambda) pi^lambda_{(x_i, y_q, 0)}.
FiberOperator pi_field_quadrature(const SampledField& slice, double lambda, const LineGrid& grid) {
  const Axis& ax = slice.axis(0);
  const Axis& ay = slice.axis(1);
  const Axis d = grid.dual();
  const double r = std::sqrt(std::abs(lambda));
  const std::size_t n = grid.count();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Complex> shift(2 * n - 1), diag(n);
  for (std::size_t i = 0; i < ax.count(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t q = 0; q < ay.count(); ++q)
        s += slice[slice.flat({i, q})] * cis(r * ay.node(q) * grid.node(j));
      diag[j] = ax.spacing() * ay.spacing() * s;
      any = any || diag[j] != Complex{};
    }
    if (!any) continue;
    const double shift_by = sgn(lambda) * r * ax.node(i);
    // shift[delta + n - 1] = (1/N) sum_m exp(2 pi i xi_m (delta * ds + shift_by))
    for (std::size_t q = 0; q < 2 * n - 1; ++q) {
      const double delta = (static_cast<double>(q) - static_cast<double>(n - 1)) * grid.spacing();
      Complex s = 0.0;
      for (std::size_t m = 0; m < n; ++m) s += cis(d.node(m) * (delta + shift_by));
      shift[q] = s / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) a(j, k) += diag[j] * shift[j + n - 1 - k];
  }
  return {lambda, grid, a};
}

}  // namespace

FiberOperator pi_field(const SampledField& f, double lambda, const LineGrid& grid,
                       PiFieldRoute route) {
  require_nonzero(lambda);
  require_group_field(f, "pi_field");
  const SampledField slice = central_slice(f, -lambda);
  return route == PiFieldRoute::Kernel ? pi_field_kernel(slice, lambda, grid)
                                       : pi_field_quadrature(slice, lambda, grid);
}

double hs_norm(const FiberOperator& a) {
  return a.kernel().norm() * a.weight();
}

FiberOperator rank_one(const StateVector& g, const StateVector& h) {
  require_same_grid(g.grid, h.grid);
  return {std::numeric_limits<double>::quiet_NaN(), g.grid,
          g.grid.spacing() * h.values * g.values.transpose()};
}

double gramian(const SampledField& f, double lambda, const LineGrid& grid) {
  const double hs = hs_norm(pi_field(f, lambda, grid));
  return std::abs(lambda) * hs * hs;
}

}  // namespace hflag
