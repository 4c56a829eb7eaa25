#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace hflag::cli {

// Each command writes its artifacts under cfg.out, prints a short summary to
// `log` and returns an Exit code. Library exceptions propagate to main.
int cmd_identities(const ExperimentConfig& cfg, const std::string& only, std::ostream& log);
int cmd_estimates(const ExperimentConfig& cfg, std::ostream& log);
int cmd_invert(const ExperimentConfig& cfg, std::ostream& log);
// Summarises artifact directories and container files.
int cmd_report(const std::vector<std::string>& paths, std::ostream& log);

}  // namespace hflag::cli
