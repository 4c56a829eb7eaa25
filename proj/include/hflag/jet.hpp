#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace hflag {

using Complex = std::complex<double>;

// Monomials x^e in `vars` variables with total degree <= order, graded order.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  std::size_t size() const { return degrees_.size(); }
  std::span<const int> exponents(std::size_t i) const {
    return {exponents_.data() + i * static_cast<std::size_t>(vars_), static_cast<std::size_t>(vars_)};
  }
  int degree(std::size_t i) const { return degrees_[i]; }
  // Index of the monomial, or npos if its degree exceeds the order.
  std::size_t index(std::span<const int> exps) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Product {
    std::size_t a, b, out;
  };
  const std::vector<Product>& products() const { return products_; }

  MonomialBasis(int vars, int order);

 private:
  int vars_, order_;
  std::vector<int> exponents_;
  std::vector<int> degrees_;
  std::vector<std::size_t> lookup_;
  std::vector<Product> products_;
};

// Truncated multivariate Taylor polynomial: sum_e c_e (x - x0)^e.
class Jet {
 public:
  Jet() : Jet(0, 0) {}
  Jet(int vars, int order, Complex constant = 0.0);
  static Jet variable(int vars, int order, int index, Complex value);

  int vars() const { return basis_->vars(); }
  int order() const { return basis_->order(); }
  const MonomialBasis& basis() const { return *basis_; }
  Complex value() const { return coeffs_[0]; }
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<Complex> coefficients() { return coeffs_; }
  Complex coefficient(std::span<const int> exps) const;
  // Partial derivative d^e at the expansion point: e! * coefficient.
  Complex derivative(std::span<const int> exps) const;
  Jet constant_like(Complex c) const { return Jet(vars(), order(), c); }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(Complex c) { coeffs_[0] += c; return *this; }
  Jet& operator-=(Complex c) { coeffs_[0] -= c; return *this; }
  Jet& operator*=(Complex c);
  Jet& operator/=(Complex c) { return *this *= 1.0 / c; }
  Jet operator-() const;

  // f(this) for f with Taylor coefficients taylor[k] = f^(k)(value()) / k!.
  Jet compose(std::span<const Complex> taylor) const;

 private:
  void check_compatible(const Jet& o) const;
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<Complex> coeffs_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, Complex c) { return a += c; }
inline Jet operator-(Jet a, Complex c) { return a -= c; }
inline Jet operator*(Jet a, Complex c) { return a *= c; }
inline Jet operator/(Jet a, Complex c) { return a /= c; }
inline Jet operator+(Complex c, Jet a) { return a += c; }
inline Jet operator-(Complex c, const Jet& a) { return -a + c; }
inline Jet operator*(Complex c, Jet a) { return a *= c; }
Jet operator/(Complex c, const Jet& a);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& b);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
// |a| for real-valued a; derivatives at a = 0 are NaN.
Jet abs(const Jet& a);

// Evaluates sum_e coeffs[e] * prod_i args[i]^{e_i} with jets as arguments.
Jet evaluate_polynomial(const MonomialBasis& basis, std::span<const Complex> coeffs,
                        const std::vector<Jet>& args);

}  // namespace hflag
