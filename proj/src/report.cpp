#include "sievelab/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "sievelab/error.hpp"

namespace sievelab {

nlohmann::json config_json(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream in(config.canonical());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

namespace {

nlohmann::json header_json(const RunConfig& config) {
  nlohmann::json h;
  h["tool"] = "sievelab";
  h["version"] = std::string(kToolVersion);
  h["config_hash"] = config.hash();
  h["config"] = config_json(config);
  return h;
}

}  // namespace

std::string render_report(const Report& report, const RunConfig& config) {
  std::ostringstream out;
  switch (report.format) {
    case OutputFormat::csv: {
      out << "# sievelab " << kToolVersion << " config_hash=" << config.hash() << '\n';
      std::istringstream in(config.canonical());
      std::string line;
      while (std::getline(in, line)) out << "# " << line << '\n';
      out << report.csv;
      break;
    }
    case OutputFormat::json: {
      nlohmann::json j;
      j["header"] = header_json(config);
      j["result"] = report.json;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::jsonl: {
      nlohmann::json h;
      h["header"] = header_json(config);
      out << h.dump() << '\n';
      for (const auto& rec : report.lines) out << rec.dump() << '\n';
      break;
    }
  }
  return out.str();
}

void emit_report(const Report& report, const RunConfig& config, std::ostream& fallback) {
  const auto text = render_report(report, config);
  if (config.output.empty()) {
    fallback << text;
    fallback.flush();
    return;
  }
  std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + config.output + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("failed writing '" + config.output + "'");
}

}  // namespace sievelab
