#pragma once

#include <cstddef>
#include <vector>

namespace hflag {

// Point (x, y, t) of the Heisenberg group H^n with x, y in R^n.
struct GroupPoint {
  std::vector<double> x;
  std::vector<double> y;
  double t = 0.0;

  GroupPoint() = default;
  GroupPoint(std::vector<double> x_, std::vector<double> y_, double t_);
  // Convenience constructor for H^1.
  GroupPoint(double x_, double y_, double t_);

  std::size_t n() const { return x.size(); }
};

GroupPoint identity(std::size_t n);

// (x,y,t)(x',y',t') = (x+x', y+y', t+t'+x.y')
GroupPoint compose(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& a);

// delta_j(x,y,t) = (jx, jy, j^2 t), j > 0
GroupPoint dilate(const GroupPoint& a, double j);

// |(x,y,t)| = sum |x_i| + sum |y_i| + |t|^{1/2}
double norm(const GroupPoint& a);

// Q = 2n + 2
int homogeneous_dimension(std::size_t n);

double max_abs_difference(const GroupPoint& a, const GroupPoint& b);

}  // namespace hflag
