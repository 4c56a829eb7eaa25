#pragma once

#include <array>
#include <limits>
#include <json.hpp>
#include <string>
#include <vector>

#include "hflag/catalog.hpp"
#include "hflag/spectrum.hpp"
#include "hflag/symbolcalc.hpp"

namespace hflag {

// Finite-difference weights for the m-th derivative at 0 from samples at the
// given offsets (unit step), by Fornberg's recursion.
std::vector<double> fd_weights(const std::vector<double>& offsets, int m);
// Central stencil of 4th-order accuracy for the m-th derivative: offsets -r..r.
std::vector<double> central_offsets(int m);

// Sample points of an estimate: w on circles of the given radii (radius 0 is
// the single point w = 0) crossed with a list of lambdas.
struct EstimateGrid {
  std::vector<double> radii;
  int angles = 8;
  std::vector<double> lambdas;

  // radii {0} + 2^k (k = -4..4), lambdas +-2^j (j = -2..2)
  static EstimateGrid defaults();
  std::vector<std::array<double, 2>> w_points() const;
  void validate() const;
};

struct SeminormRow {
  std::vector<int> alpha;
  int beta = 0;
  // Fiber of a per-lambda row; NaN when the row is a supremum over all lambdas.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double sup = 0.0;
  std::array<double, 2> argmax_w{0.0, 0.0};
  double argmax_lambda = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::Pass;
  std::string note;
};

struct SeminormReport {
  std::string kind;     // "flag", "sym0" or "lambda-derivative"
  std::string subject;  // spectrum or symbol family name
  std::string method;   // "jet", "finite-difference" or "node-difference"
  int fd_order = 4;
  double fd_step = 0.0;  // relative step (flag) or node spacing (sym0)
  std::vector<double> radii;
  std::vector<double> lambdas;
  int angles = 0;
  std::size_t skipped_points = 0;
  std::vector<SeminormRow> rows;

  Verdict verdict() const;
  const SeminormRow* find(const std::vector<int>& alpha, int beta,
                          double lambda = std::numeric_limits<double>::quiet_NaN()) const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Estimates sup |d_w^alpha d_lambda^beta K^| (|w| + |lambda|^{1/2})^{|alpha|} |lambda|^beta
// over the grid for |alpha| <= alpha_max, beta <= beta_max. Derivatives come from
// jets when available, else from central differences with steps proportional
// to the natural scales (|w| + |lambda|^{1/2} in w, |lambda| in lambda). Each
// supremum is probed off the grid from its argmax: sustained growth toward
// w = 0 or lambda = 0, or a non-finite derivative, fails; growth toward the outer
// boundary from a boundary argmax is inconclusive.
SeminormReport flag_estimate_report(const Spectrum& k, int alpha_max, int beta_max,
                                    const EstimateGrid& grid = EstimateGrid::defaults(),
                                    int jobs = 1, double fd_step = 0.1);

// Per fiber: sup |d^alpha a_lambda(w)| (1 + |w|)^{|alpha|} over the symbol grid
// (node differences, away from the edges), plus rows with the max over lambda.
SeminormReport sym0_seminorms(const std::vector<SymbolGrid>& family, int alpha_max,
                              const std::string& subject = "symbols");

}  // namespace hflag
