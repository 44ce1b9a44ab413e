#pragma once

#include "hnflow/report.hpp"

namespace hnflow {

Report cmdTau(const RunConfig& cfg);
Report cmdHn(const RunConfig& cfg);
Report cmdSimulate(const RunConfig& cfg);
Report cmdScan(const RunConfig& cfg);
Report cmdExponents(const RunConfig& cfg);
Report cmdVerify(const RunConfig& cfg);

/// Dispatch by name; throws ConfigError for unknown commands.
Report runCommand(const std::string& name, const RunConfig& cfg);

}  // namespace hnflow
