#include "hflag/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "hflag/error.hpp"
#include "hflag/parallel.hpp"

namespace hflag {

std::vector<double> fd_weights(const std::vector<double>& x, int m) {
  // Fornberg (1988), evaluation point 0.
  const int n = static_cast<int>(x.size()) - 1;
  if (m < 0 || m > n) throw DomainError("finite-difference stencil too short for the derivative");
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0, c4 = x[0];
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> central_offsets(int m) {
  if (m == 0) return {0.0};
  const int r = (m + 1) / 2 + 1;  // 4th order: 2 for m = 1, 2; 3 for m = 3, 4
  std::vector<double> o;
  for (int k = -r; k <= r; ++k) o.push_back(k);
  return o;
}

EstimateGrid EstimateGrid::defaults() {
  EstimateGrid g;
  g.radii.push_back(0.0);
  for (int k = -4; k <= 4; ++k) g.radii.push_back(std::ldexp(1.0, k));
  for (int j = -2; j <= 2; ++j) g.lambdas.push_back(-std::ldexp(1.0, j));
  for (int j = -2; j <= 2; ++j) g.lambdas.push_back(std::ldexp(1.0, j));
  std::sort(g.lambdas.begin(), g.lambdas.end());
  return g;
}

std::vector<std::array<double, 2>> EstimateGrid::w_points() const {
  std::vector<std::array<double, 2>> pts;
  for (double r : radii) {
    if (r == 0.0) {
      pts.push_back({0.0, 0.0});
      continue;
    }
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * std::numbers::pi * (a + 0.5) / angles;
      pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return pts;
}

void EstimateGrid::validate() const {
  if (radii.empty() || lambdas.empty() || angles < 1)
    throw ConfigError("estimate grid needs radii, angles and lambdas");
  for (double r : radii)
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("estimate grid radii must be finite and >= 0");
  for (double l : lambdas)
    if (l == 0.0 || !std::isfinite(l)) throw DomainError("estimate lambda grid touches lambda = 0");
}

Verdict SeminormReport::verdict() const {
  Verdict v = Verdict::Pass;
  for (const auto& r : rows) v = std::max(v, r.verdict);
  return v;
}

const SeminormRow* SeminormReport::find(const std::vector<int>& alpha, int beta, double lambda) const {
  for (const auto& r : rows) {
    const bool same_lambda = std::isnan(lambda) ? std::isnan(r.lambda) : r.lambda == lambda;
    if (r.alpha == alpha && r.beta == beta && same_lambda) return &r;
  }
  return nullptr;
}

namespace {

std::string alpha_text(const std::vector<int>& alpha) {
  std::string s = "(";
  for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
  return s + ")";
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

nlohmann::json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);  // JSON has no inf / nan literals
}

}  // namespace

std::string SeminormReport::to_csv() const {
  std::ostringstream o;
  o << "alpha,beta,lambda,sup_ratio,argmax_w1,argmax_w2,argmax_lambda,verdict\n";
  for (const auto& r : rows)
    o << '"' << alpha_text(r.alpha) << "\"," << r.beta << ',' << (std::isnan(r.lambda) ? "all" : num(r.lambda))
      << ',' << num(r.sup) << ',' << num(r.argmax_w[0]) << ',' << num(r.argmax_w[1]) << ','
      << num(r.argmax_lambda) << ',' << to_string(r.verdict) << '\n';
  return o.str();
}

nlohmann::json SeminormReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["subject"] = subject;
  j["method"] = method;
  j["fd_order"] = fd_order;
  j["fd_step"] = fd_step;
  j["radii"] = radii;
  j["lambdas"] = lambdas;
  j["angles"] = angles;
  j["skipped_points"] = skipped_points;
  j["verdict"] = to_string(verdict());
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json x;
    x["alpha"] = r.alpha;
    x["beta"] = r.beta;
    x["lambda"] = std::isnan(r.lambda) ? nlohmann::json("all") : nlohmann::json(r.lambda);
    x["sup"] = jnum(r.sup);
    x["argmax_w"] = {jnum(r.argmax_w[0]), jnum(r.argmax_w[1])};
    x["argmax_lambda"] = jnum(r.argmax_lambda);
    x["verdict"] = to_string(r.verdict);
    if (!r.note.empty()) x["note"] = r.note;
    rs.push_back(std::move(x));
  }
  j["rows"] = std::move(rs);
  return j;
}

namespace {

struct MultiIndex {
  int a1, a2, b;
  int order() const { return a1 + a2; }
};

std::vector<MultiIndex> multi_indices(int alpha_max, int beta_max) {
  std::vector<MultiIndex> out;
  for (int total = 0; total <= alpha_max; ++total)
    for (int a1 = total; a1 >= 0; --a1)
      for (int b = 0; b <= beta_max; ++b) out.push_back({a1, total - a1, b});
  return out;
}

// All derivatives of K^ at one point, in multi_indices order; empty when the
// point (or its stencil) leaves the spectrum's domain.
class Differentiator {
 public:
  Differentiator(const Spectrum& k, int alpha_max, int beta_max, double step)
      : k_(k), idx_(multi_indices(alpha_max, beta_max)), amax_(alpha_max), bmax_(beta_max),
        step_(step), jet_(k.has_jet()) {
    for (int m = 0; m <= std::max(alpha_max, beta_max); ++m) {
      offsets_.push_back(central_offsets(m));
      weights_.push_back(fd_weights(offsets_.back(), m));
    }
  }

  const std::vector<MultiIndex>& indices() const { return idx_; }
  bool uses_jet() const { return jet_; }

  std::vector<Complex> operator()(double w1, double w2, double lambda) const {
    return jet_ ? by_jet(w1, w2, lambda) : by_difference(w1, w2, lambda);
  }

 private:
  std::vector<Complex> by_jet(double w1, double w2, double lambda) const {
    if (!k_.in_domain(w1, w2, lambda)) return {};
    const Jet j = k_.jet(w1, w2, lambda, amax_ + bmax_);
    std::vector<Complex> out;
    for (const auto& m : idx_) {
      const int e[3] = {m.a1, m.a2, m.b};
      out.push_back(j.derivative(e));
    }
    return out;
  }

  std::vector<Complex> by_difference(double w1, double w2, double lambda) const {
    const double hw = step_ * (std::hypot(w1, w2) + std::sqrt(std::abs(lambda)));
    const double hl = step_ * std::abs(lambda);
    const int rw = static_cast<int>(offsets_[amax_].size() / 2);
    const int rl = static_cast<int>(offsets_[bmax_].size() / 2);
    const int nw = 2 * rw + 1, nl = 2 * rl + 1;
    // Lattice of samples around the point.
    std::vector<Complex> f(static_cast<std::size_t>(nw * nw * nl));
    for (int p = -rw; p <= rw; ++p)
      for (int q = -rw; q <= rw; ++q)
        for (int r = -rl; r <= rl; ++r) {
          const double x1 = w1 + p * hw, x2 = w2 + q * hw, l = lambda + r * hl;
          if (!k_.in_domain(x1, x2, l)) return {};
          f[static_cast<std::size_t>(((p + rw) * nw + (q + rw)) * nl + (r + rl))] = k_.value(x1, x2, l);
        }
    std::vector<Complex> out;
    for (const auto& m : idx_) {
      const auto& o1 = offsets_[m.a1];
      const auto& o2 = offsets_[m.a2];
      const auto& o3 = offsets_[m.b];
      Complex acc = 0.0;
      for (std::size_t i = 0; i < o1.size(); ++i)
        for (std::size_t j = 0; j < o2.size(); ++j)
          for (std::size_t l = 0; l < o3.size(); ++l) {
            const int p = static_cast<int>(o1[i]) + rw, q = static_cast<int>(o2[j]) + rw,
                      r = static_cast<int>(o3[l]) + rl;
            acc += weights_[m.a1][i] * weights_[m.a2][j] * weights_[m.b][l] *
                   f[static_cast<std::size_t>((p * nw + q) * nl + r)];
          }
      out.push_back(acc / (std::pow(hw, m.order()) * std::pow(hl, m.b)));
    }
    return out;
  }

  const Spectrum& k_;
  std::vector<MultiIndex> idx_;
  int amax_, bmax_;
  double step_;
  bool jet_;
  std::vector<std::vector<double>> offsets_, weights_;
};

double scale_ratio(Complex d, const MultiIndex& m, double w1, double w2, double lambda) {
  const double rho = std::hypot(w1, w2) + std::sqrt(std::abs(lambda));
  const double r = std::abs(d) * std::pow(rho, m.order()) * std::pow(std::abs(lambda), m.b);
  return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
}

// True when the probe values keep growing (each step at least level) and end
// more than twice the start.
bool sustained_growth(const std::vector<double>& v) {
  if (v.size() < 3) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] * (1.0 - 1e-6)) return false;
  return v.back() > 2.0 * v.front();
}

constexpr int kProbeSteps = 6;

}  // namespace

SeminormReport flag_estimate_report(const Spectrum& k, int alpha_max, int beta_max,
                                    const EstimateGrid& grid, int jobs, double fd_step) {
  grid.validate();
  if (alpha_max < 0 || beta_max < 0) throw ConfigError("multi-index ranges must be >= 0");
  if (!(fd_step > 0.0 && fd_step <= 0.1)) throw ConfigError("finite-difference step must lie in (0, 0.1]");
  const Differentiator diff(k, alpha_max, beta_max, fd_step);
  const auto& idx = diff.indices();
  const auto wpts = grid.w_points();
  const std::size_t nw = wpts.size(), nl = grid.lambdas.size();

  std::vector<std::vector<Complex>> table(nw * nl);
  parallel_for(nw * nl, jobs, [&](std::size_t q) {
    const auto& w = wpts[q / nl];
    table[q] = diff(w[0], w[1], grid.lambdas[q % nl]);
  });

  SeminormReport rep;
  rep.kind = "flag";
  rep.subject = k.name();
  rep.method = diff.uses_jet() ? "jet" : "finite-difference";
  rep.fd_order = diff.uses_jet() ? 0 : 4;
  rep.fd_step = diff.uses_jet() ? 0.0 : fd_step;
  rep.radii = grid.radii;
  rep.lambdas = grid.lambdas;
  rep.angles = grid.angles;
  for (const auto& t : table) rep.skipped_points += t.empty();

  const double r_max = *std::max_element(grid.radii.begin(), grid.radii.end());
  double l_max = 0.0;
  for (double l : grid.lambdas) l_max = std::max(l_max, std::abs(l));

  for (std::size_t mi = 0; mi < idx.size(); ++mi) {
    const MultiIndex& m = idx[mi];
    SeminormRow row;
    row.alpha = {m.a1, m.a2};
    row.beta = m.b;
    bool found = false;
    for (std::size_t q = 0; q < table.size(); ++q) {
      if (table[q].empty()) continue;
      const auto& w = wpts[q / nl];
      const double lambda = grid.lambdas[q % nl];
      const double r = scale_ratio(table[q][mi], m, w[0], w[1], lambda);
      if (!found || r > row.sup) {
        row.sup = r;
        row.argmax_w = w;
        row.argmax_lambda = lambda;
        found = true;
      }
    }
    if (!found) {
      row.sup = std::numeric_limits<double>::quiet_NaN();
      row.verdict = Verdict::Inconclusive;
      row.note = "no grid point inside the spectrum's domain";
      rep.rows.push_back(row);
      continue;
    }
    if (std::isinf(row.sup)) {
      row.verdict = Verdict::Fail;
      row.note = "non-finite derivative";
      rep.rows.push_back(row);
      continue;
    }

    // Probe along rays from the argmax.
    auto probe = [&](double wscale, double lscale) {
      std::vector<double> v = {row.sup};
      double w1 = row.argmax_w[0], w2 = row.argmax_w[1], l = row.argmax_lambda;
      for (int s = 0; s < kProbeSteps; ++s) {
        w1 *= wscale;
        w2 *= wscale;
        l *= lscale;
        const auto d = diff(w1, w2, l);
        if (d.empty()) break;
        v.push_back(scale_ratio(d[mi], m, w1, w2, l));
        if (std::isinf(v.back())) break;
      }
      return v;
    };
    const bool at_origin = row.argmax_w[0] == 0.0 && row.argmax_w[1] == 0.0;
    const auto in_w = at_origin ? std::vector<double>{} : probe(0.5, 1.0);
    const auto in_l = probe(1.0, 0.25);
    const auto out_w = at_origin ? std::vector<double>{} : probe(2.0, 1.0);
    const auto out_l = probe(1.0, 4.0);
    auto blows = [](const std::vector<double>& v) {
      return sustained_growth(v) || (!v.empty() && std::isinf(v.back()));
    };
    const double r_arg = std::hypot(row.argmax_w[0], row.argmax_w[1]);
    const bool on_outer = r_arg >= r_max * (1.0 - 1e-12) || std::abs(row.argmax_lambda) >= l_max;
    if (blows(in_w)) {
      row.verdict = Verdict::Fail;
      row.note = "grows toward w = 0";
    } else if (blows(in_l)) {
      row.verdict = Verdict::Fail;
      row.note = "grows toward lambda = 0";
    } else if (on_outer && (blows(out_w) || blows(out_l))) {
      row.verdict = Verdict::Inconclusive;
      row.note = "supremum on the outer boundary and still growing";
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SeminormReport sym0_seminorms(const std::vector<SymbolGrid>& family, int alpha_max,
                              const std::string& subject) {
  if (family.empty()) throw ConfigError("sym0_seminorms needs at least one symbol");
  if (alpha_max < 0) throw ConfigError("multi-index range must be >= 0");
  SeminormReport rep;
  rep.kind = "sym0";
  rep.subject = subject;
  rep.method = "node-difference";
  rep.fd_order = 4;
  rep.fd_step = family.front().grid.spacing();
  for (const auto& a : family) rep.lambdas.push_back(a.lambda);

  std::vector<std::vector<double>> offsets, weights;
  for (int m = 0; m <= alpha_max; ++m) {
    offsets.push_back(central_offsets(m));
    weights.push_back(fd_weights(offsets.back(), m));
  }
  const int margin = static_cast<int>(offsets.back().size() / 2);
  const auto idx = multi_indices(alpha_max, 0);

  std::vector<SeminormRow> uniform(idx.size());
  for (const auto& a : family) {
    const int n = static_cast<int>(a.count());
    if (n <= 2 * margin) throw DimensionError("symbol grid too small for the difference stencil");
    const Axis xi_axis = a.grid.dual();
    const double h1 = xi_axis.spacing(), h2 = a.grid.spacing();
    for (std::size_t mi = 0; mi < idx.size(); ++mi) {
      const auto& m = idx[mi];
      const auto& o1 = offsets[m.a1];
      const auto& o2 = offsets[m.a2];
      SeminormRow row;
      row.alpha = {m.a1, m.a2};
      row.lambda = a.lambda;
      row.argmax_lambda = a.lambda;
      bool found = false;
      for (int p = margin; p < n - margin; ++p)
        for (int q = margin; q < n - margin; ++q) {
          Complex d = 0.0;
          for (std::size_t i = 0; i < o1.size(); ++i)
            for (std::size_t j = 0; j < o2.size(); ++j)
              d += weights[m.a1][i] * weights[m.a2][j] *
                   a.values(p + static_cast<int>(o1[i]), q + static_cast<int>(o2[j]));
          d /= std::pow(h1, m.a1) * std::pow(h2, m.a2);
          const double x = xi_axis.node(p), y = a.grid.node(q);
          double r = std::abs(d) * std::pow(1.0 + std::hypot(x, y), m.order());
          if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
          if (!found || r > row.sup) {
            row.sup = r;
            row.argmax_w = {x, y};
            found = true;
          }
        }
      if (std::isinf(row.sup)) row.verdict = Verdict::Fail;
      SeminormRow& u = uniform[mi];
      if (u.alpha.empty() || row.sup > u.sup) {
        u = row;
        u.lambda = std::numeric_limits<double>::quiet_NaN();
      }
      rep.rows.push_back(row);
    }
  }
  for (auto& u : uniform) rep.rows.push_back(u);
  return rep;
}

}  // namespace hflag
