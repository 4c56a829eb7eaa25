#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hflag {

using Complex = std::complex<double>;

// Periodic centred grid on [-L, L): nodes -L + k*d, d = 2L/N, N a power of two.
// Its dual carries the same count on [-N/(4L), N/(4L)) with spacing 1/(2L).
class Axis {
 public:
  Axis() = default;
  Axis(std::size_t count, double half_width);

  std::size_t count() const { return count_; }
  double half_width() const { return half_width_; }
  double spacing() const { return 2.0 * half_width_ / static_cast<double>(count_); }
  double node(std::size_t k) const { return -half_width_ + static_cast<double>(k) * spacing(); }
  std::vector<double> nodes() const;
  Axis dual() const;

  // Index of the node equal to x (within tol * spacing), if any.
  std::optional<std::size_t> index_of(double x, double tol = 1e-9) const;
  // Index holding x_i - x_j after periodic wrapping.
  std::size_t difference_index(std::size_t i, std::size_t j) const {
    return (i + count_ + count_ / 2 - j) % count_;
  }
  // Index holding -x_i after periodic wrapping.
  std::size_t reflect_index(std::size_t i) const { return (count_ - i) % count_; }
  // Index holding x_i + x_j after periodic wrapping.
  std::size_t sum_index(std::size_t i, std::size_t j) const {
    return (i + j + count_ / 2) % count_;
  }

  bool operator==(const Axis& o) const {
    return count_ == o.count_ && half_width_ == o.half_width_;
  }

 private:
  std::size_t count_ = 0;
  double half_width_ = 0.0;
};

enum class Domain { Spatial, Spectral };

// Samples of a function on a product of axes. Spectral axes hold the dual
// variable; axes() always lists the axis the values are sampled on.
class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<Axis> axes, std::vector<Domain> domains);

  // Group-side field on H^1 with axes (x, y, t).
  static SampledField group(const Axis& x, const Axis& y, const Axis& t);
  static SampledField group(const Axis& v, const Axis& t) { return group(v, v, t); }

  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<Domain>& domains() const { return domains_; }
  Domain domain(std::size_t i) const { return domains_.at(i); }
  std::size_t rank() const { return axes_.size(); }
  std::size_t size() const { return values_.size(); }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  std::size_t flat(std::initializer_list<std::size_t> idx) const;
  Complex& at(std::size_t i, std::size_t j, std::size_t k) { return values_[flat({i, j, k})]; }
  const Complex& at(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[flat({i, j, k})];
  }

  // Coordinates of the node with the given flat index.
  std::vector<double> coordinates(std::size_t flat_index) const;
  // Quadrature weight: product of spacings.
  double weight() const;

  bool all(Domain d) const;
  bool same_layout(const SampledField& o) const {
    return axes_ == o.axes_ && domains_ == o.domains_;
  }

  // values[i] = fn(coordinates(i))
  void fill(const std::function<Complex(const std::vector<double>&)>& fn);

 private:
  std::vector<Axis> axes_;
  std::vector<Domain> domains_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> values_;
};

// Random-access helpers shared by several modules.
bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace hflag
