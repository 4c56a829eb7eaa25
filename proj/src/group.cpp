#include "hflag/group.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hflag/error.hpp"

namespace hflag {

namespace {

void check_point(const GroupPoint& a) {
  if (a.x.size() != a.y.size())
    throw DimensionError("group point has x of size " + std::to_string(a.x.size()) +
                         " but y of size " + std::to_string(a.y.size()));
}

void check_pair(const GroupPoint& a, const GroupPoint& b) {
  check_point(a);
  check_point(b);
  if (a.n() != b.n())
    throw DimensionError("group points live in H^" + std::to_string(a.n()) + " and H^" +
                         std::to_string(b.n()));
}

}  // namespace

GroupPoint::GroupPoint(std::vector<double> x_, std::vector<double> y_, double t_)
    : x(std::move(x_)), y(std::move(y_)), t(t_) {
  check_point(*this);
}

GroupPoint::GroupPoint(double x_, double y_, double t_) : x{x_}, y{y_}, t(t_) {}

GroupPoint identity(std::size_t n) {
  return GroupPoint(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0);
}

GroupPoint compose(const GroupPoint& a, const GroupPoint& b) {
  check_pair(a, b);
  GroupPoint r = a;
  double twist = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    r.x[i] += b.x[i];
    r.y[i] += b.y[i];
    twist += a.x[i] * b.y[i];
  }
  r.t = a.t + b.t + twist;
  return r;
}

GroupPoint inverse(const GroupPoint& a) {
  check_point(a);
  GroupPoint r = a;
  double xy = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    r.x[i] = -a.x[i];
    r.y[i] = -a.y[i];
    xy += a.x[i] * a.y[i];
  }
  r.t = -a.t + xy;
  return r;
}

GroupPoint dilate(const GroupPoint& a, double j) {
  check_point(a);
  if (!(j > 0.0)) throw DomainError("dilation parameter must be positive");
  GroupPoint r = a;
  for (auto& v : r.x) v *= j;
  for (auto& v : r.y) v *= j;
  r.t *= j * j;
  return r;
}

double norm(const GroupPoint& a) {
  check_point(a);
  double s = 0.0;
  for (double v : a.x) s += std::abs(v);
  for (double v : a.y) s += std::abs(v);
  return s + std::sqrt(std::abs(a.t));
}

int homogeneous_dimension(std::size_t n) { return static_cast<int>(2 * n + 2); }

double max_abs_difference(const GroupPoint& a, const GroupPoint& b) {
  check_pair(a, b);
  double m = std::abs(a.t - b.t);
  for (std::size_t i = 0; i < a.n(); ++i) {
    m = std::max(m, std::abs(a.x[i] - b.x[i]));
    m = std::max(m, std::abs(a.y[i] - b.y[i]));
  }
  return m;
}

}  // namespace hflag
