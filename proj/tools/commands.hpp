#pragma once

#include "run_config.hpp"

namespace psph::cli {

// Dispatch on cfg.command. Throws psph error types; main maps them to exit
// codes (2 config, 3 insufficient data, 4 resource/convergence).
void run_command(const RunConfig& cfg);

}  // namespace psph::cli
