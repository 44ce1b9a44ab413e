#include "hnflow/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace hnflow {

Report Report::make(const std::string& command, const RunConfig& cfg) {
  Report rep;
  rep.command = command;
  nlohmann::json digestInput;
  digestInput["config"] = cfg.raw;
  digestInput["seed"] = cfg.seed;
  rep.inputsDigest = digestHex(canonicalJson(digestInput));
  return rep;
}

nlohmann::json Report::toJson() const {
  nlohmann::json j;
  j["command"] = command;
  j["inputs_digest"] = inputsDigest;
  j["tool_version"] = kToolVersion;
  j["results"] = results;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : verdicts) vs.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["verdicts"] = vs;
  return j;
}

std::string Report::toCsv() const {
  std::ostringstream os;
  if (results.contains("csv_header") && results.contains("csv")) {
    os << results["csv_header"].get<std::string>() << "\n";
    for (const auto& row : results["csv"]) os << row.get<std::string>() << "\n";
  }
  os << "verdict,pass,detail\n";
  for (const auto& v : verdicts) {
    std::string detail = v.detail;
    for (auto& c : detail)
      if (c == ',') c = ';';
    os << v.name << "," << (v.pass ? "1" : "0") << "," << detail << "\n";
  }
  return os.str();
}

void writeReport(const Report& rep, const std::string& format, const std::string& outPath) {
  std::string payload;
  if (format == "csv")
    payload = rep.toCsv();
  else
    payload = rep.toJson().dump(2) + "\n";
  if (outPath.empty() || outPath == "-") {
    std::cout << payload;
  } else {
    std::ofstream out(outPath);
    if (!out) throw ConfigError("cannot open output file: " + outPath);
    out << payload;
  }
}

}  // namespace hnflow
