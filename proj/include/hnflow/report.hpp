#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hnflow/config.hpp"

namespace hnflow {

inline constexpr const char* kToolVersion = "0.1.0";

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Machine-readable command output. Deterministic for a fixed (config,
/// seed): wall time is deliberately not part of the report (it goes to
/// stderr), so the serialized report is byte-identical across runs.
struct Report {
  std::string command;
  std::string inputsDigest;
  nlohmann::json results;
  std::vector<Verdict> verdicts;

  bool allPass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }

  nlohmann::json toJson() const;
  /// Flat table: one row per verdict plus command-specific series rows when
  /// results carry a "csv" array (written by the command).
  std::string toCsv() const;

  static Report make(const std::string& command, const RunConfig& cfg);
};

void writeReport(const Report& rep, const std::string& format, const std::string& outPath);

}  // namespace hnflow
