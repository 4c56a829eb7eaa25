#include "hflag/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "hflag/error.hpp"

namespace hflag {

namespace {

void enumerate(int vars, std::vector<int>& current, int var, int remaining,
               std::vector<std::vector<int>>& out) {
  if (var == vars) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[var] = e;
    enumerate(vars, current, var + 1, remaining - e, out);
  }
  current[var] = 0;
}

int total(std::span<const int> e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

MonomialBasis::MonomialBasis(int vars, int order) : vars_(vars), order_(order) {
  if (vars < 0 || order < 0) throw DomainError("jet needs nonnegative variable count and order");
  std::vector<std::vector<int>> all;
  std::vector<int> current(vars, 0);
  enumerate(vars, current, 0, order, all);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    const int da = total(a), db = total(b);
    if (da != db) return da < db;
    return a > b;
  });
  std::size_t table = 1;
  for (int v = 0; v < vars; ++v) table *= static_cast<std::size_t>(order + 1);
  lookup_.assign(table, npos);
  for (std::size_t i = 0; i < all.size(); ++i) {
    exponents_.insert(exponents_.end(), all[i].begin(), all[i].end());
    degrees_.push_back(total(all[i]));
    std::size_t key = 0;
    for (int v = 0; v < vars; ++v) key = key * static_cast<std::size_t>(order + 1) + all[i][v];
    lookup_[key] = i;
  }
  std::vector<int> sum(vars);
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      for (int v = 0; v < vars; ++v) sum[v] = exponents(a)[v] + exponents(b)[v];
      products_.push_back({a, b, index(sum)});
    }
}

std::size_t MonomialBasis::index(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != vars_) throw DimensionError("multi-index has wrong length");
  if (total(exps) > order_) return npos;
  std::size_t key = 0;
  for (int e : exps) {
    if (e < 0) throw DomainError("negative multi-index entry");
    key = key * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(e);
  }
  return lookup_[key];
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int vars, int order) {
  static std::mutex m;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(vars, order);
  return slot;
}

Jet::Jet(int vars, int order, Complex constant)
    : basis_(MonomialBasis::get(vars, order)), coeffs_(basis_->size(), Complex{}) {
  coeffs_[0] = constant;
}

Jet Jet::variable(int vars, int order, int index, Complex value) {
  if (index < 0 || index >= vars) throw DimensionError("jet variable index out of range");
  Jet j(vars, order, value);
  if (order >= 1) {
    std::vector<int> e(vars, 0);
    e[index] = 1;
    j.coeffs_[j.basis_->index(e)] = 1.0;
  }
  return j;
}

Complex Jet::coefficient(std::span<const int> exps) const {
  const std::size_t i = basis_->index(exps);
  if (i == MonomialBasis::npos) throw DomainError("derivative order exceeds jet order");
  return coeffs_[i];
}

Complex Jet::derivative(std::span<const int> exps) const {
  double f = 1.0;
  for (int e : exps) f *= factorial(e);
  return f * coefficient(exps);
}

void Jet::check_compatible(const Jet& o) const {
  if (basis_ != o.basis_) throw DimensionError("jets with different variables or order");
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  check_compatible(o);
  std::vector<Complex> r(coeffs_.size(), Complex{});
  for (const auto& p : basis_->products()) r[p.out] += coeffs_[p.a] * o.coeffs_[p.b];
  coeffs_ = std::move(r);
  return *this;
}

Jet& Jet::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) { return *this *= pow(o, -1.0); }

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& x : r.coeffs_) x = -x;
  return r;
}

Jet Jet::compose(std::span<const Complex> taylor) const {
  Jet delta = *this;
  delta.coeffs_[0] = 0.0;
  const int top = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
  Jet r = constant_like(taylor[top]);
  for (int k = top - 1; k >= 0; --k) {
    r *= delta;
    r += taylor[k];
  }
  return r;
}

Jet operator/(Complex c, const Jet& a) { return pow(a, -1.0) * c; }

Jet exp(const Jet& a) {
  std::vector<Complex> t(a.order() + 1);
  const Complex e = std::exp(a.value());
  for (int k = 0; k <= a.order(); ++k) t[k] = e / factorial(k);
  return a.compose(t);
}

Jet log(const Jet& a) {
  std::vector<Complex> t(a.order() + 1);
  const Complex x = a.value();
  t[0] = std::log(x);
  for (int k = 1; k <= a.order(); ++k)
    t[k] = (k % 2 == 1 ? 1.0 : -1.0) / (static_cast<double>(k) * std::pow(x, k));
  return a.compose(t);
}

Jet pow(const Jet& a, double p) {
  if (p >= 0.0 && p == std::floor(p) && p <= 64.0) {
    // Exact for integer powers, including at a zero base.
    Jet r = a.constant_like(1.0), base = a;
    for (auto e = static_cast<unsigned>(p); e > 0; e >>= 1) {
      if (e & 1u) r *= base;
      if (e > 1) base *= base;
    }
    return r;
  }
  std::vector<Complex> t(a.order() + 1);
  const Complex x = a.value();
  double binom = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = binom * std::pow(x, p - k);
    binom *= (p - k) / (k + 1.0);
  }
  return a.compose(t);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet pow(const Jet& a, const Jet& b) { return exp(b * log(a)); }

Jet sin(const Jet& a) {
  std::vector<Complex> t(a.order() + 1);
  const Complex s = std::sin(a.value()), c = std::cos(a.value());
  const Complex cycle[4] = {s, c, -s, -c};
  for (int k = 0; k <= a.order(); ++k) t[k] = cycle[k % 4] / factorial(k);
  return a.compose(t);
}

Jet cos(const Jet& a) {
  std::vector<Complex> t(a.order() + 1);
  const Complex s = std::sin(a.value()), c = std::cos(a.value());
  const Complex cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= a.order(); ++k) t[k] = cycle[k % 4] / factorial(k);
  return a.compose(t);
}

Jet abs(const Jet& a) {
  const Complex x = a.value();
  if (x.imag() != 0.0) throw DomainError("abs of a complex-valued jet");
  if (x.real() > 0.0) return a;
  if (x.real() < 0.0) return -a;
  Jet r = a.constant_like(0.0);
  auto c = r.coefficients();
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = std::numeric_limits<double>::quiet_NaN();
  return r;
}

Jet evaluate_polynomial(const MonomialBasis& basis, std::span<const Complex> coeffs,
                        const std::vector<Jet>& args) {
  if (static_cast<int>(args.size()) != basis.vars() || coeffs.size() != basis.size())
    throw DimensionError("polynomial and argument shapes differ");
  if (args.empty()) return Jet(0, 0, coeffs[0]);
  // powers[v][e] = args[v]^e
  std::vector<std::vector<Jet>> powers(args.size());
  for (std::size_t v = 0; v < args.size(); ++v) {
    powers[v].push_back(args[v].constant_like(1.0));
    for (int e = 1; e <= basis.order(); ++e) powers[v].push_back(powers[v].back() * args[v]);
  }
  Jet r = args[0].constant_like(0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] == Complex{}) continue;
    Jet term = args[0].constant_like(coeffs[i]);
    const auto e = basis.exponents(i);
    for (std::size_t v = 0; v < args.size(); ++v)
      if (e[v] > 0) term *= powers[v][e[v]];
    r += term;
  }
  return r;
}

}  // namespace hflag
