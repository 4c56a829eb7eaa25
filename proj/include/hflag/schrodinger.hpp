#pragma once

#include <Eigen/Dense>
#include <functional>

#include "hflag/grid.hpp"
#include "hflag/group.hpp"

namespace hflag {

// Discretisation of L^2(R) used by the fiber operators.
using LineGrid = Axis;

// Smallest square line grid (L_s = B_s) resolving a fiber at lambda for content
// with |w| <= w_extent and |x| <= x_extent on the group side, plus `margin`
// in fiber units on both the position and the frequency side.
LineGrid fitted_line_grid(double lambda, double w_extent, double x_extent, double margin = 0.0,
                          std::size_t min_count = 16);

struct StateVector {
  LineGrid grid;
  Eigen::VectorXcd values;

  StateVector() = default;
  StateVector(const LineGrid& g, Eigen::VectorXcd v);
  static StateVector sample(const LineGrid& g, const std::function<Complex(double)>& fn);
  double norm() const;
};

// Bilinear pairing <u, g> = int u(s) g(s) ds (no conjugate).
Complex pairing(const StateVector& u, const StateVector& g);

// Operator on a line grid at a fixed lambda. matrix = kernel * weight, so
// matrix-vector products apply the operator directly. lambda is NaN for
// operators not attached to a fiber (rank-one projections).
struct FiberOperator {
  double lambda = 0.0;
  LineGrid grid;
  Eigen::MatrixXcd matrix;

  double weight() const { return grid.spacing(); }
  Eigen::MatrixXcd kernel() const { return matrix / weight(); }
  StateVector apply(const StateVector& u) const;
};

FiberOperator identity_operator(double lambda, const LineGrid& grid);
// A * B with matching grids and lambdas.
FiberOperator compose(const FiberOperator& a, const FiberOperator& b);
FiberOperator adjoint(const FiberOperator& a);

// Translation u(s) -> u(s + a) by an FFT phase ramp; periodic and unitary.
StateVector translate(const StateVector& u, double a);

// pi_h^lambda u(s) = e^{2 pi i lambda t} e^{2 pi i sqrt|lambda| y s} u(s + sgn(lambda) sqrt|lambda| x)
StateVector pi_point(const GroupPoint& h, double lambda, const StateVector& u);

// c_{f,g}(x, y) = int e^{2 pi i y s} f(s + x) g(s) ds on axes (x: line grid, y: its dual).
SampledField c_fun(const StateVector& f, const StateVector& g);
// Same quantity at an arbitrary point (band-limited translation by x).
Complex c_fun_at(const StateVector& f, const StateVector& g, double x, double y);

// C^lambda_{f,g}(h) = <pi_h^lambda f, g>
Complex C_fun(const StateVector& f, const StateVector& g, double lambda, const GroupPoint& h);

enum class PiFieldRoute { Kernel, Quadrature };

// pi_f^lambda = int f(h) pi_h^lambda dh for a group-side field on H^1. -lambda must
// be a central-frequency bin of f. Kernel route: closed-form kernel through
// partial transforms of f. Quadrature route: sum of f(h) pi_h^lambda over the grid.
FiberOperator pi_field(const SampledField& f, double lambda, const LineGrid& grid,
                       PiFieldRoute route = PiFieldRoute::Kernel);

// Quadrature-weighted Frobenius norm of the kernel (equals the matrix Frobenius norm).
double hs_norm(const FiberOperator& a);

// P_{g,h} u = <u, g> h with the bilinear pairing.
FiberOperator rank_one(const StateVector& g, const StateVector& h);

// |lambda| * ||pi_f^lambda||_HS^2
double gramian(const SampledField& f, double lambda, const LineGrid& grid);

}  // namespace hflag
