#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "lab/config.hpp"

namespace lab {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,          // computational failure
  kHypothesesFail = 2,   // diagnostic outcome, not an error
  kConfigError = 3,
};

/// One of hypotheses, radial, pde, symmetry, maxprinciple, all. Writes the
/// artifacts and manifest.json into `out`; never throws.
int run(const std::string& command, const ExperimentConfig& cfg, const std::filesystem::path& out,
        std::ostream& log);

}  // namespace lab
