#include "hflag/catalog.hpp"

#include <sstream>

namespace hflag {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

const std::vector<CatalogEntry>& kernel_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"delta", "1", "point mass at the identity", true, Verdict::Pass, true},
      {"riesz", "(w1^2 + w2^2) / (w1^2 + w2^2 + abs(lambda))",
       "Riesz-type multiplier vanishing at w = 0", false, Verdict::Pass, true},
      {"riesz-x", "w1^2 / (w1^2 + abs(lambda))", "one-directional Riesz-type multiplier", true,
       Verdict::Pass, true},
      {"perturbed-identity", "1 + {eps} * (w1^2 + w2^2) / (w1^2 + w2^2 + abs(lambda))",
       "identity plus a small Riesz-type multiplier", false, Verdict::Pass, true},
      {"log-chirp",
       "1 + {eps} * (w1^2 + w2^2) / (w1^2 + w2^2 + abs(lambda)) * exp(i * log(abs(lambda)))",
       "perturbed identity whose perturbation rotates in phase along lambda", false,
       Verdict::Pass, true},
      {"abs-w", "sqrt(w1^2 + w2^2)", "non-example: unbounded and singular at w = 0", false,
       Verdict::Fail, false},
  };
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : kernel_catalog())
    if (e.name == name) return &e;
  return nullptr;
}

SpectrumPtr make_kernel(const std::string& name_or_expression, double eps) {
  if (const auto* e = find_catalog_entry(name_or_expression)) {
    std::string f = e->formula;
    std::ostringstream os;
    os.precision(17);
    os << "(" << eps << ")";
    for (auto p = f.find("{eps}"); p != std::string::npos; p = f.find("{eps}"))
      f.replace(p, 5, os.str());
    return std::make_shared<ExpressionSpectrum>(e->name, Expression::parse(f), e->symmetric);
  }
  return std::make_shared<ExpressionSpectrum>(name_or_expression,
                                              Expression::parse(name_or_expression));
}

}  // namespace hflag
