#pragma once

#include "specsing/cli/config.hpp"
#include "specsing/cli/report.hpp"

namespace specsing::cli {

// Executes the configured command. Per-item failures are recorded in the
// report; configuration problems throw ConfigError.
Report run(const RunConfig& cfg);

// 0 on success, 2 when any recorded failure is numerical.
int exit_code(const Report& report);

// The four modes and five decay constants of the published table.
const std::vector<long>& table1_modes();
const std::vector<double>& table1_nus();

}  // namespace specsing::cli
