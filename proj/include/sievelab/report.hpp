#pragma once

// Report emission. Every output starts with the tool version, the resolved
// configuration hash and the full configuration, so a run can be repeated
// from its output alone.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sievelab/config.hpp"

namespace sievelab {

enum class OutputFormat { csv, json, jsonl };

struct Report {
  OutputFormat format = OutputFormat::json;
  std::string csv;                  // csv body including its column header
  nlohmann::json json;              // json result object
  std::vector<nlohmann::json> lines;  // jsonl records
};

nlohmann::json config_json(const RunConfig& config);

// Writes the header and body to config.output (or the stream when empty).
// Throws IoError when the path cannot be written.
void emit_report(const Report& report, const RunConfig& config, std::ostream& fallback);

// Same bytes emit_report would write.
std::string render_report(const Report& report, const RunConfig& config);

}  // namespace sievelab
