#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hflag/grid.hpp"
#include "hflag/group.hpp"
#include "hflag/transform.hpp"

namespace testsupport {

using hflag::Complex;
inline constexpr double kPi = std::numbers::pi;

inline Complex cis(double cycles) { return std::polar(1.0, 2.0 * kPi * cycles); }

inline hflag::GroupPoint random_point(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  hflag::GroupPoint p = hflag::identity(n);
  for (auto& v : p.x) v = u(rng);
  for (auto& v : p.y) v = u(rng);
  p.t = u(rng);
  return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Anisotropic Gaussian exp(-pi (x^2/a + y^2/b + t^2/c)) with a linear phase.
struct GaussianSpec {
  double a = 1.0, b = 1.0, c = 1.0;
  double x0 = 0.0, y0 = 0.0, t0 = 0.0;
  double kx = 0.0, ky = 0.0, kt = 0.0;
  Complex operator()(double x, double y, double t) const {
    const double dx = x - x0, dy = y - y0, dt = t - t0;
    return std::exp(-kPi * (dx * dx / a + dy * dy / b + dt * dt / c)) *
           cis(kx * x + ky * y + kt * t);
  }
};

inline hflag::SampledField sample(const hflag::Axis& v, const hflag::Axis& t,
                                  const GaussianSpec& g) {
  auto f = hflag::SampledField::group(v, t);
  f.fill([&](const std::vector<double>& c) { return g(c[0], c[1], c[2]); });
  return f;
}

inline double relative_l2(const hflag::SampledField& a, const hflag::SampledField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace testsupport

namespace testsupport {

// Group field whose central frequencies sit only at the listed bins; each slice
// is the (x, y) part of the Gaussian spec times a bin-dependent amplitude.
inline hflag::SampledField banded(const hflag::Axis& v, const hflag::Axis& t, const GaussianSpec& g,
                                  const std::vector<double>& bins) {
  const hflag::Axis tl = t.dual();
  hflag::SampledField s({v, v, tl}, {hflag::Domain::Spatial, hflag::Domain::Spatial,
                                     hflag::Domain::Spectral});
  for (double mu : bins) {
    const std::size_t l = *tl.index_of(mu);
    const Complex amp = std::exp(-kPi * g.c * mu * mu / 4.0) * cis(0.1 * mu);
    for (std::size_t i = 0; i < v.count(); ++i)
      for (std::size_t j = 0; j < v.count(); ++j) s.at(i, j, l) = amp * g(v.node(i), v.node(j), g.t0);
  }
  return hflag::inverse_partial_fourier(s, {2});
}

}  // namespace testsupport

#include "hflag/schrodinger.hpp"

namespace testsupport {

inline hflag::StateVector gaussian_state(const hflag::LineGrid& g, double a, double center = 0.0,
                                         double k = 0.0) {
  return hflag::StateVector::sample(
      g, [&](double s) { return std::exp(-kPi * a * (s - center) * (s - center)) * cis(k * s); });
}

inline double hs_relative(const hflag::FiberOperator& a, const hflag::FiberOperator& b) {
  return (a.matrix - b.matrix).norm() / b.matrix.norm();
}

}  // namespace testsupport
