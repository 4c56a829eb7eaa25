#include "hflag/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "hflag/error.hpp"
#include "hflag/transform.hpp"

namespace hflag {

namespace {

Complex cis(double cycles) {
  const double a = 2.0 * std::numbers::pi * cycles;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

Eigen::MatrixXcd Spectrum::sample(std::span<const double> w1, std::span<const double> w2,
                                  double lambda) const {
  Eigen::MatrixXcd out(w1.size(), w2.size());
  for (std::size_t m = 0; m < w1.size(); ++m)
    for (std::size_t j = 0; j < w2.size(); ++j) out(m, j) = value(w1[m], w2[j], lambda);
  return out;
}

Jet Spectrum::jet(double, double, double, int) const {
  throw DomainError("spectrum '" + name() + "' has no analytic derivatives");
}

bool Spectrum::in_domain(double w1, double w2, double lambda) const {
  return lambda != 0.0 && std::isfinite(w1) && std::isfinite(w2) && std::isfinite(lambda);
}

ExpressionSpectrum::ExpressionSpectrum(std::string name, Expression expr, bool symmetric)
    : name_(std::move(name)), expr_(std::move(expr)), symmetric_(symmetric) {
  if (expr_.variable_count() != 3) throw DimensionError("spectrum expressions must use n = 1");
}

Complex ExpressionSpectrum::value(double w1, double w2, double lambda) const {
  if (lambda == 0.0) throw DomainError("spectrum evaluated at lambda = 0");
  const Complex args[3] = {w1, w2, lambda};
  return expr_.evaluate(std::span<const Complex>(args, 3));
}

Jet ExpressionSpectrum::jet(double w1, double w2, double lambda, int order) const {
  if (lambda == 0.0) throw DomainError("spectrum evaluated at lambda = 0");
  const Jet args[3] = {Jet::variable(3, order, 0, w1), Jet::variable(3, order, 1, w2),
                       Jet::variable(3, order, 2, lambda)};
  return expr_.evaluate(std::span<const Jet>(args, 3));
}

FieldSpectrum::FieldSpectrum(const SampledField& group_field, std::string name)
    : name_(std::move(name)) {
  require_group_field(group_field, "FieldSpectrum");
  slices_ = partial_fourier(group_field, {kCentralAxis});
}

std::size_t FieldSpectrum::bin(double lambda) const {
  const auto l = slices_.axis(kCentralAxis).index_of(lambda);
  if (!l) throw DomainError("sampled spectrum: lambda is not a central-frequency bin");
  return *l;
}

bool FieldSpectrum::in_domain(double w1, double w2, double lambda) const {
  if (lambda == 0.0 || !slices_.axis(kCentralAxis).index_of(lambda)) return false;
  const double b1 = slices_.axis(0).dual().half_width();
  const double b2 = slices_.axis(1).dual().half_width();
  return w1 >= -b1 && w1 < b1 && w2 >= -b2 && w2 < b2;
}

std::array<double, 3> FieldSpectrum::snap(double w1, double w2, double lambda) const {
  const Axis& al = slices_.axis(kCentralAxis);
  const double k = std::round((lambda + al.half_width()) / al.spacing());
  const double clamped = std::min(std::max(k, 0.0), static_cast<double>(al.count() - 1));
  return {w1, w2, al.node(static_cast<std::size_t>(clamped))};
}

Complex FieldSpectrum::value(double w1, double w2, double lambda) const {
  const double a[1] = {w1}, b[1] = {w2};
  return sample(a, b, lambda)(0, 0);
}

Eigen::MatrixXcd FieldSpectrum::sample(std::span<const double> w1, std::span<const double> w2,
                                       double lambda) const {
  const std::size_t l = bin(lambda);
  const Axis& ax = slices_.axis(0);
  const Axis& ay = slices_.axis(1);
  const double b1 = ax.dual().half_width(), b2 = ay.dual().half_width();
  Eigen::MatrixXcd s(ax.count(), ay.count());
  for (std::size_t i = 0; i < ax.count(); ++i)
    for (std::size_t j = 0; j < ay.count(); ++j) s(i, j) = slices_.at(i, j, l);
  Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(w1.size(), ax.count());
  Eigen::MatrixXcd e2 = Eigen::MatrixXcd::Zero(ay.count(), w2.size());
  for (std::size_t m = 0; m < w1.size(); ++m) {
    if (!(w1[m] >= -b1 && w1[m] < b1)) continue;
    for (std::size_t i = 0; i < ax.count(); ++i) e1(m, i) = ax.spacing() * cis(-ax.node(i) * w1[m]);
  }
  for (std::size_t k = 0; k < w2.size(); ++k) {
    if (!(w2[k] >= -b2 && w2[k] < b2)) continue;
    for (std::size_t j = 0; j < ay.count(); ++j) e2(j, k) = ay.spacing() * cis(-ay.node(j) * w2[k]);
  }
  return e1 * (s * e2);
}

}  // namespace hflag
