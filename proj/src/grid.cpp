#include "hflag/grid.hpp"

#include <cmath>
#include <string>

#include "hflag/error.hpp"

namespace hflag {

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Axis::Axis(std::size_t count, double half_width) : count_(count), half_width_(half_width) {
  if (count < 2 || !is_power_of_two(count))
    throw DimensionError("axis count must be a power of two >= 2, got " + std::to_string(count));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw DomainError("axis half-width must be positive and finite");
}

std::vector<double> Axis::nodes() const {
  std::vector<double> r(count_);
  for (std::size_t k = 0; k < count_; ++k) r[k] = node(k);
  return r;
}

Axis Axis::dual() const {
  return Axis(count_, static_cast<double>(count_) / (4.0 * half_width_));
}

std::optional<std::size_t> Axis::index_of(double x, double tol) const {
  const double k = (x + half_width_) / spacing();
  const double r = std::round(k);
  if (std::abs(k - r) > tol || r < 0.0 || r >= static_cast<double>(count_)) return std::nullopt;
  return static_cast<std::size_t>(r);
}

SampledField::SampledField(std::vector<Axis> axes, std::vector<Domain> domains)
    : axes_(std::move(axes)), domains_(std::move(domains)) {
  if (axes_.size() != domains_.size())
    throw DimensionError("field needs one domain tag per axis");
  if (axes_.empty()) throw DimensionError("field needs at least one axis");
  strides_.assign(axes_.size(), 1);
  std::size_t total = 1;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    strides_[i] = total;
    total *= axes_[i].count();
  }
  values_.assign(total, Complex{});
}

SampledField SampledField::group(const Axis& x, const Axis& y, const Axis& t) {
  return SampledField({x, y, t}, {Domain::Spatial, Domain::Spatial, Domain::Spatial});
}

std::size_t SampledField::flat(std::initializer_list<std::size_t> idx) const {
  std::size_t f = 0, a = 0;
  for (std::size_t i : idx) f += i * strides_[a++];
  return f;
}

std::vector<double> SampledField::coordinates(std::size_t flat_index) const {
  std::vector<double> c(axes_.size());
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    c[a] = axes_[a].node((flat_index / strides_[a]) % axes_[a].count());
  }
  return c;
}

double SampledField::weight() const {
  double w = 1.0;
  for (const auto& a : axes_) w *= a.spacing();
  return w;
}

bool SampledField::all(Domain d) const {
  for (auto x : domains_)
    if (x != d) return false;
  return true;
}

void SampledField::fill(const std::function<Complex(const std::vector<double>&)>& fn) {
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = fn(coordinates(i));
}

}  // namespace hflag
