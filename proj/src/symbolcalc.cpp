#include "hflag/symbolcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hflag/error.hpp"
#include "hflag/fft.hpp"
#include "hflag/parallel.hpp"
#include "hflag/transform.hpp"

namespace hflag {

namespace {

Complex cis(double cycles) {
  const double a = 2.0 * std::numbers::pi * cycles;
  return {std::cos(a), std::sin(a)};
}

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Transform every column of a square matrix (the row index runs over the
// source axis). Column-major storage of M(r, c) is the row-major array T(c, r).
void dft_rows_index(Eigen::MatrixXcd& m, const Axis& src, const Axis& dst, int sign, double w) {
  const auto n = static_cast<std::size_t>(m.rows());
  centered_dft_axis(std::span<Complex>(m.data(), n * n), {n, n}, 1, src, dst, sign, w);
}

}  // namespace

SymbolGrid::SymbolGrid(double lam, const LineGrid& g)
    : lambda(lam), grid(g), values(Eigen::MatrixXcd::Zero(g.count(), g.count())) {}

SymbolGrid SymbolGrid::sample(double lam, const LineGrid& g,
                              const std::function<Complex(double, double)>& fn) {
  SymbolGrid a(lam, g);
  const Axis d = g.dual();
  for (std::size_t m = 0; m < g.count(); ++m)
    for (std::size_t j = 0; j < g.count(); ++j) a.values(m, j) = fn(d.node(m), g.node(j));
  return a;
}

double SymbolGrid::l2_norm() const {
  return values.norm() / std::sqrt(static_cast<double>(count()));
}

double SymbolGrid::max_abs() const { return values.cwiseAbs().maxCoeff(); }

void require_same_fiber(const SymbolGrid& a, const SymbolGrid& b) {
  if (!(a.grid == b.grid)) throw DimensionError("symbols live on different grids");
  if (a.lambda != b.lambda && !(std::isnan(a.lambda) && std::isnan(b.lambda)))
    throw DimensionError("symbols belong to different fibers");
}

SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b) {
  require_same_fiber(a, b);
  SymbolGrid r = a;
  r.values += b.values;
  return r;
}

SymbolGrid operator-(const SymbolGrid& a, const SymbolGrid& b) {
  require_same_fiber(a, b);
  SymbolGrid r = a;
  r.values -= b.values;
  return r;
}

SymbolGrid operator*(Complex c, const SymbolGrid& a) {
  SymbolGrid r = a;
  r.values *= c;
  return r;
}

SymbolGrid constant_symbol(double lambda, const LineGrid& grid, Complex c) {
  SymbolGrid a(lambda, grid);
  a.values.setConstant(c);
  return a;
}

SymbolGrid fiber_symbol(const Spectrum& k, double lambda, const LineGrid& grid) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw DomainError("fiber symbol needs a finite lambda != 0");
  const double r = std::sqrt(std::abs(lambda));
  const Axis d = grid.dual();
  std::vector<double> w1(grid.count()), w2(grid.count());
  for (std::size_t m = 0; m < grid.count(); ++m) w1[m] = -sgn(lambda) * r * d.node(m);
  for (std::size_t j = 0; j < grid.count(); ++j) w2[j] = -r * grid.node(j);
  SymbolGrid a(lambda, grid);
  a.values = k.sample(w1, w2, -lambda);
  return a;
}

// A_jk = (1/N) sum_m e^{2 pi i xi_m (s_j - s_k)} a(xi_m, s_j)
FiberOperator kn_quantize(const SymbolGrid& a) {
  const LineGrid& g = a.grid;
  const Axis d = g.dual();
  const std::size_t n = g.count();
  // h(m, j) = a(xi_m, s_j) e^{2 pi i xi_m s_j}, then sum over m against e^{-2 pi i xi_m s_k}.
  Eigen::MatrixXcd h(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) h(m, j) = a.values(m, j) * cis(d.node(m) * g.node(j));
  dft_rows_index(h, d, g, -1, 1.0 / static_cast<double>(n));  // h(k, j) = A_jk
  return {a.lambda, g, h.transpose()};
}

SymbolGrid kn_symbol_of(const FiberOperator& op) {
  const LineGrid& g = op.grid;
  const Axis d = g.dual();
  const std::size_t n = g.count();
  Eigen::MatrixXcd t = op.matrix.transpose();  // t(k, j) -> t(m, j)
  dft_rows_index(t, g, d, +1, 1.0);
  SymbolGrid a(op.lambda, g);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) a.values(m, j) = t(m, j) * cis(-d.node(m) * g.node(j));
  return a;
}

SymbolGrid twisted_product(const SymbolGrid& a, const SymbolGrid& b) {
  require_same_fiber(a, b);
  return kn_symbol_of(compose(kn_quantize(a), kn_quantize(b)));
}

Eigen::VectorXd singular_values(const FiberOperator& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.matrix);
  return svd.singularValues();
}

double operator_norm(const FiberOperator& a) { return singular_values(a)(0); }

// out(xi, eta, lambda) = int K^(xi + lambda u, eta, lambda) e^{-2 pi i u eta} F_x f(xi, u, lambda) du
SampledField convolve_spectrum(const Spectrum& k, const SampledField& f, int jobs) {
  require_group_field(f, "convolve_spectrum");
  const SampledField g = partial_fourier(f, {0, kCentralAxis});
  const Axis& ax = g.axis(0);
  const Axis& ay = f.axis(1);
  const Axis ey = ay.dual();
  const Axis& al = g.axis(2);
  const std::size_t nx = ax.count(), ny = ay.count(), nl = al.count();

  std::vector<double> peak(nl, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t l = 0; l < nl; ++l) peak[l] = std::max(peak[l], std::abs(g.at(i, j, l)));
  const double top = *std::max_element(peak.begin(), peak.end());
  const auto zero = al.index_of(0.0);
  if (zero && peak[*zero] > 1e-12 * top)
    throw DomainError("convolve_spectrum: field has content at lambda = 0");

  SampledField out({ax, ey, al}, {Domain::Spectral, Domain::Spectral, Domain::Spectral});
  const std::vector<double> xi = ax.nodes(), eta = ey.nodes();
  // Bins at the rounding level of the transform (~1e-15 relative) are left at zero.
  parallel_for(nl, jobs, [&](std::size_t l) {
    if (peak[l] <= 1e-13 * top || (zero && l == *zero)) return;
    const double lambda = al.node(l);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nx, ny);
    std::vector<double> shifted(nx);
    Eigen::VectorXcd column(nx);
    for (std::size_t j = 0; j < ny; ++j) {
      const double u = ay.node(j);
      for (std::size_t m = 0; m < nx; ++m) {
        shifted[m] = xi[m] + lambda * u;
        column(m) = g.at(m, j, l);
      }
      const Eigen::MatrixXcd kv = k.sample(shifted, eta, lambda);
      for (std::size_t kk = 0; kk < ny; ++kk)
        acc.col(kk) += (ay.spacing() * cis(-u * eta[kk])) * kv.col(kk).cwiseProduct(column);
    }
    for (std::size_t m = 0; m < nx; ++m)
      for (std::size_t kk = 0; kk < ny; ++kk) out.at(m, kk, l) = acc(m, kk);
  });
  return inverse_fourier(out);
}

}  // namespace hflag
