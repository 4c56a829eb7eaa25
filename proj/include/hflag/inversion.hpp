#pragma once

#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hflag/estimates.hpp"
#include "hflag/symbolcalc.hpp"

namespace hflag {

struct FiberStats {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
};

// Dense inverse by LU after an SVD condition check. Throws NonInvertibleError
// (with the fiber's lambda) when the condition number exceeds cond_limit.
FiberOperator invert_fiber(const FiberOperator& a, double cond_limit = 1e8, FiberStats* stats = nullptr);

struct NeumannResult {
  SymbolGrid b;
  double op_norm = 0.0;           // ||Op(s)||
  double truncation_bound = 0.0;  // (eps ||Op(s)||)^{k+1} / (1 - eps ||Op(s)||)
};

// b = sum_{k <= k_max} (-eps)^k s^{#k}, the inverse symbol of 1 + eps s.
// Throws DivergenceError when eps ||Op(s)|| >= 1.
NeumannResult neumann_inverse(const SymbolGrid& s, double eps, int k_max);

struct InversionOptions {
  LineGrid fiber_grid{64, 4.0};
  std::vector<double> lambdas;  // empty: +-2^j, j = -2..2
  double cond_limit = 1e8;
  // Reject fibers that are not Hermitian instead of inverting A via (A*A)^{-1} A*.
  bool strict_symmetric = false;
  double hermitian_tolerance = 1e-10;
  int jobs = 1;

  std::vector<double> lambda_grid() const;
};

struct FiberResult {
  double lambda = 0.0;
  SymbolGrid a, b;
  FiberOperator A, B;
  FiberStats stats;
  double hermitian_defect = 0.0;  // ||A - A*||_F / ||A||_F
  bool symmetrized = false;
  double residual = 0.0;        // ||a # b - 1||_inf
  double right_residual = 0.0;  // ||b # a - 1||_inf
  double inverse_norm() const { return 1.0 / stats.sigma_min; }
};

// The whole per-fiber pipeline at one lambda.
FiberResult solve_fiber(const Spectrum& k, double lambda, const InversionOptions& opt);

// L^(w, mu) = b_{-mu}(sgn(mu) w1 / sqrt|mu|, -w2 / sqrt|mu|), the multiplier whose
// fiber symbols are the b_lambda. Fibers are inverted on demand and cached;
// off-node symbol values use degree-5 Lagrange interpolation, and points past
// the fiber grid take the boundary value and are counted.
class InverseSpectrum : public Spectrum {
 public:
  InverseSpectrum(SpectrumPtr k, InversionOptions opt);
  std::string name() const override { return "inverse(" + k_->name() + ")"; }
  bool symmetric() const override { return k_->symmetric(); }
  Complex value(double w1, double w2, double mu) const override;
  bool in_domain(double w1, double w2, double mu) const override;

  std::shared_ptr<const FiberResult> fiber(double lambda) const;
  void insert(std::shared_ptr<const FiberResult> f) const;
  std::size_t extrapolated() const;
  const InversionOptions& options() const { return opt_; }
  const SpectrumPtr& kernel() const { return k_; }

 private:
  SpectrumPtr k_;
  InversionOptions opt_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const FiberResult>> cache_;
  mutable std::size_t extrapolated_ = 0;
};

struct InversionResult {
  std::string kernel;
  InversionOptions options;
  std::vector<std::shared_ptr<const FiberResult>> fibers;  // ordered by lambda
  std::shared_ptr<const InverseSpectrum> inverse;

  double max_residual() const;
  double uniform_inverse_bound() const;  // max_lambda ||B_lambda||
  double min_sigma() const;
  nlohmann::json to_json() const;
  std::string residual_csv() const;
};

// Inverts every fiber of Op(K) on the lambda grid. Throws NonInvertibleError
// listing all offending lambdas if any fiber fails the condition limit.
InversionResult invert_flag(SpectrumPtr k, const InversionOptions& opt = {});

// d_lambda a_lambda from jets of K^ when available, else central differences.
SymbolGrid lambda_derivative_symbol(const Spectrum& k, double lambda, const LineGrid& grid);

struct DerivativeCheck {
  // M = 1: finite-difference d_lambda b against -b # d_lambda a # b.
  std::vector<double> lambdas;
  std::vector<double> relative_errors;
  // sup_w |lambda|^M |d_lambda^M b_lambda| (1 + |w|)^{|alpha|}, beta = M.
  SeminormReport seminorms;

  double max_relative_error() const;
  // max over lambda / min over lambda of the (alpha, M) supremum.
  double spread(const std::vector<int>& alpha, int m) const;
  nlohmann::json to_json() const;
};

DerivativeCheck lambda_derivative_check(const InversionResult& result, int m_max, int alpha_max = 2,
                                        double rel_step = 1e-2);

struct VerifyReport {
  std::vector<double> lambdas;
  std::vector<double> left, right;  // ||pi_K pi_L - I||, ||pi_L pi_K - I|| (operator norm)
  std::vector<double> field_residuals;
  double max_left() const;
  double max_right() const;
  nlohmann::json to_json() const;
};

VerifyReport verify_inverse(const Spectrum& k, const Spectrum& l, const std::vector<SampledField>& test_fields,
                            const InversionOptions& opt = {});

struct UniformRow {
  double lambda = 0.0;
  double sigma_min = 0.0, sigma_max = 0.0;
  double inverse_norm = 0.0;
  double hermitian_defect = 0.0;
  // RMS phase-space radius sqrt(<xi^2> + <eta^2>) of the least singular
  // vector, in fiber units (w = |lambda|^{1/2} (xi, eta)).
  double min_vector_radius = 0.0;
};

struct UniformReport {
  std::vector<UniformRow> rows;
  double threshold = 0.5;
  double cond_limit = 1e8;
  double min_sigma() const;
  double max_inverse_norm() const;
  std::vector<double> below_threshold() const;
  bool numerically_invertible() const;  // every fiber within cond_limit
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

UniformReport uniform_invertibility_report(const Spectrum& k, const InversionOptions& opt = {},
                                           double threshold = 0.5);

}  // namespace hflag
