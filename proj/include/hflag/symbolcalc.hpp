#pragma once

#include <Eigen/Dense>
#include <functional>

#include "hflag/schrodinger.hpp"
#include "hflag/spectrum.hpp"

namespace hflag {

// Kohn-Nirenberg symbol a(xi, eta) of a fiber operator. Rows run over the
// frequency slot xi (grid.dual()), columns over the position slot eta (grid).
struct SymbolGrid {
  double lambda = 0.0;
  LineGrid grid;
  Eigen::MatrixXcd values;

  SymbolGrid() = default;
  SymbolGrid(double lambda, const LineGrid& grid);
  static SymbolGrid sample(double lambda, const LineGrid& grid,
                           const std::function<Complex(double, double)>& fn);

  std::size_t count() const { return grid.count(); }
  double xi(std::size_t m) const { return grid.dual().node(m); }
  double eta(std::size_t j) const { return grid.node(j); }
  // L^2 norm over (xi, eta) with the cell weight 1/N.
  double l2_norm() const;
  double max_abs() const;
};

// a_lambda(xi, eta) = K^(-sgn(lambda) sqrt|lambda| xi, -sqrt|lambda| eta, -lambda)
SymbolGrid fiber_symbol(const Spectrum& k, double lambda, const LineGrid& grid);

// Af(eta) = int e^{2 pi i xi eta} a(xi, eta) f^(xi) d xi on the grid.
FiberOperator kn_quantize(const SymbolGrid& a);
// Left (and right) inverse of kn_quantize.
SymbolGrid kn_symbol_of(const FiberOperator& a);

// Symbol of Op(a) Op(b).
SymbolGrid twisted_product(const SymbolGrid& a, const SymbolGrid& b);

// Pointwise helpers on symbols sharing lambda and grid.
SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b);
SymbolGrid operator-(const SymbolGrid& a, const SymbolGrid& b);
SymbolGrid operator*(Complex c, const SymbolGrid& a);
SymbolGrid constant_symbol(double lambda, const LineGrid& grid, Complex c);
void require_same_fiber(const SymbolGrid& a, const SymbolGrid& b);

// Singular values of the operator matrix, descending.
Eigen::VectorXd singular_values(const FiberOperator& a);
double operator_norm(const FiberOperator& a);

// Realisation of K * f for a group-side field whose central content avoids
// lambda = 0: per central bin the flag multiplier acts on the (x-frequency, y)
// partial transform, giving the (x-frequency, y-frequency, lambda) transform of
// the product, returned on the group side.
SampledField convolve_spectrum(const Spectrum& k, const SampledField& f, int jobs = 1);

}  // namespace hflag
