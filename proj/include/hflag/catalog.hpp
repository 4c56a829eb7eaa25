#pragma once

#include <string>
#include <vector>

#include "hflag/spectrum.hpp"

namespace hflag {

enum class Verdict { Pass, Inconclusive, Fail };
const char* to_string(Verdict v);

struct CatalogEntry {
  std::string name;
  // Expression in w1, w2, lambda; "{eps}" is replaced by the perturbation size.
  std::string formula;
  std::string description;
  bool symmetric = false;
  Verdict expected_verdict = Verdict::Pass;
  bool expected_invertible = true;
};

const std::vector<CatalogEntry>& kernel_catalog();

// Catalog lookup by name; anything else is parsed as an inline expression.
SpectrumPtr make_kernel(const std::string& name_or_expression, double eps = 0.1);
const CatalogEntry* find_catalog_entry(const std::string& name);

}  // namespace hflag
