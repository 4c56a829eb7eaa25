#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <span>
#include <string>

#include "hflag/expression.hpp"
#include "hflag/grid.hpp"
#include "hflag/jet.hpp"

namespace hflag {

// Fourier transform K^(w, lambda) of a kernel on H^1, w = (w1, w2).
class Spectrum {
 public:
  virtual ~Spectrum() = default;

  virtual std::string name() const = 0;
  // Metadata: the kernel satisfies K = K*.
  virtual bool symmetric() const { return false; }

  virtual Complex value(double w1, double w2, double lambda) const = 0;
  // out(m, j) = value(w1[m], w2[j], lambda)
  virtual Eigen::MatrixXcd sample(std::span<const double> w1, std::span<const double> w2,
                                  double lambda) const;

  // Jets in the variables (w1, w2, lambda) when analytic derivatives exist.
  virtual bool has_jet() const { return false; }
  virtual Jet jet(double w1, double w2, double lambda, int order) const;

  // Nearest point at which the spectrum is natively defined, and whether a
  // point lies inside the region where values and derivatives are trusted.
  virtual std::array<double, 3> snap(double w1, double w2, double lambda) const {
    return {w1, w2, lambda};
  }
  virtual bool in_domain(double w1, double w2, double lambda) const;
};

using SpectrumPtr = std::shared_ptr<const Spectrum>;

// Spectrum given by an Expression in (w1, w2, lambda); derivatives via jets.
class ExpressionSpectrum : public Spectrum {
 public:
  ExpressionSpectrum(std::string name, Expression expr, bool symmetric = false);
  std::string name() const override { return name_; }
  bool symmetric() const override { return symmetric_; }
  Complex value(double w1, double w2, double lambda) const override;
  bool has_jet() const override { return true; }
  Jet jet(double w1, double w2, double lambda, int order) const override;
  const Expression& expression() const { return expr_; }

 private:
  std::string name_;
  Expression expr_;
  bool symmetric_;
};

// Spectrum of a sampled group field: K^(w, lambda) = int K(h) e^{-2 pi i h.(w, lambda)} dh,
// evaluated exactly (trigonometric sums) for grid bins lambda and zero outside the
// field's (x, y) frequency box.
class FieldSpectrum : public Spectrum {
 public:
  explicit FieldSpectrum(const SampledField& group_field, std::string name = "sampled");
  std::string name() const override { return name_; }
  Complex value(double w1, double w2, double lambda) const override;
  Eigen::MatrixXcd sample(std::span<const double> w1, std::span<const double> w2,
                          double lambda) const override;
  bool in_domain(double w1, double w2, double lambda) const override;
  std::array<double, 3> snap(double w1, double w2, double lambda) const override;

 private:
  std::size_t bin(double lambda) const;
  std::string name_;
  SampledField slices_;  // central axis transformed
};

}  // namespace hflag
