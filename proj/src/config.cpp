#include "sievelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "sievelab/error.hpp"

namespace sievelab {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

double to_double(std::string_view text, const std::string& field) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("field '" + field + "' expects a real number, got '" + std::string(text) + "'",
                      {field});
  }
  return v;
}

std::uint64_t to_uint(std::string_view text, const std::string& field) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && end == text.data() + text.size()) return v;
  // Accept integral reals such as 1e6.
  const double d = to_double(text, field);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
    throw ConfigError("field '" + field + "' expects a non-negative integer, got '" +
                          std::string(text) + "'",
                      {field});
  }
  return static_cast<std::uint64_t>(d);
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field real_field(T RunConfig::*member, const std::string& name) {
  return {[member, name](RunConfig& c, std::string_view v) { c.*member = to_double(v, name); },
          [member](const RunConfig& c) { return format_double(c.*member); }};
}

Field uint_field(std::uint64_t RunConfig::*member, const std::string& name) {
  return {[member, name](RunConfig& c, std::string_view v) { c.*member = to_uint(v, name); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field string_field(std::string RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = std::string(v); },
          [member](const RunConfig& c) { return c.*member; }};
}

Field param_real(double SieveParams::*member, const std::string& name) {
  return {[member, name](RunConfig& c, std::string_view v) { c.params.*member = to_double(v, name); },
          [member](const RunConfig& c) { return format_double(c.params.*member); }};
}

Field param_uint(u64 SieveParams::*member, const std::string& name) {
  return {[member, name](RunConfig& c, std::string_view v) { c.params.*member = to_uint(v, name); },
          [member](const RunConfig& c) { return std::to_string(c.params.*member); }};
}

const std::map<std::string, Field>& registry() {
  static const std::map<std::string, Field> fields = [] {
    std::map<std::string, Field> f;
    f["command"] = {[](RunConfig& c, std::string_view v) {
                      const auto cmd = parse_command(v);
                      if (!cmd) throw ConfigError("unknown command '" + std::string(v) + "'", {"command"});
                      c.command = cmd;
                    },
                    [](const RunConfig& c) {
                      return c.command ? std::string(to_string(*c.command)) : std::string();
                    }};
    f["X"] = param_real(&SieveParams::X, "X");
    f["L"] = param_uint(&SieveParams::L, "L");
    f["q"] = param_uint(&SieveParams::q, "q");
    f["a"] = param_uint(&SieveParams::a, "a");
    f["eps"] = param_real(&SieveParams::eps, "eps");
    f["kappa"] = param_real(&SieveParams::kappa, "kappa");
    f["D"] = param_real(&SieveParams::D, "D");
    f["z"] = param_real(&SieveParams::z, "z");
    f["y"] = param_real(&SieveParams::y, "y");
    f["w_level"] = param_real(&SieveParams::w_level, "w_level");
    f["E"] = param_real(&SieveParams::E, "E");
    f["beta"] = {[](RunConfig& c, std::string_view v) {
                   const auto b = to_uint(v, "beta");
                   if (b > 1000) throw ConfigError("beta too large", {"beta"});
                   c.params.beta = static_cast<int>(b);
                 },
                 [](const RunConfig& c) { return std::to_string(c.params.beta); }};
    f["eta"] = param_real(&SieveParams::eta, "eta");
    f["output"] = string_field(&RunConfig::output);
    f["format"] = string_field(&RunConfig::format);
    f["seed"] = uint_field(&RunConfig::seed, "seed");
    f["workers"] = uint_field(&RunConfig::workers, "workers");
    f["support_cap"] = uint_field(&RunConfig::support_cap, "support_cap");
    f["table_limit"] = uint_field(&RunConfig::table_limit, "table_limit");
    f["budget_constant"] = real_field(&RunConfig::budget_constant, "budget_constant");
    f["Y_big"] = real_field(&RunConfig::Y_big, "Y_big");
    f["quad_tolerance"] = real_field(&RunConfig::quad_tolerance, "quad_tolerance");
    f["window_cells"] = uint_field(&RunConfig::window_cells, "window_cells");
    f["limit_mode"] = string_field(&RunConfig::limit_mode);
    f["kind"] = string_field(&RunConfig::kind);
    f["scale"] = real_field(&RunConfig::scale, "scale");
    f["n_max"] = uint_field(&RunConfig::n_max, "n_max");
    f["p_max"] = uint_field(&RunConfig::p_max, "p_max");
    f["d"] = uint_field(&RunConfig::d, "d");
    f["Lambda"] = real_field(&RunConfig::Lambda, "Lambda");
    f["M"] = uint_field(&RunConfig::M, "M");
    f["configs"] = uint_field(&RunConfig::configs, "configs");
    f["q_list"] = string_field(&RunConfig::q_list);
    f["X_min"] = real_field(&RunConfig::X_min, "X_min");
    f["X_max"] = real_field(&RunConfig::X_max, "X_max");
    f["L_min"] = uint_field(&RunConfig::L_min, "L_min");
    f["L_max"] = uint_field(&RunConfig::L_max, "L_max");
    f["d_max"] = uint_field(&RunConfig::d_max, "d_max");
    f["tuples"] = uint_field(&RunConfig::tuples, "tuples");
    f["entry_max"] = uint_field(&RunConfig::entry_max, "entry_max");
    f["probe_M"] = uint_field(&RunConfig::probe_M, "probe_M");
    f["census_z"] = real_field(&RunConfig::census_z, "census_z");
    f["c"] = real_field(&RunConfig::c, "c");
    f["A_grid"] = string_field(&RunConfig::A_grid);
    f["psi"] = real_field(&RunConfig::psi, "psi");
    return f;
  }();
  return fields;
}

std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

void assign(RunConfig& c, const std::string& raw_key, std::string_view value, Provenance source) {
  const auto key = normalize_key(raw_key);
  const auto& reg = registry();
  const auto it = reg.find(key);
  if (it == reg.end()) throw ConfigError("unknown key '" + raw_key + "'", {key});
  it->second.set(c, value);
  c.provenance[key] = source;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validate(const RunConfig& c) {
  c.params.validate();
  const std::vector<std::string> formats{"auto", "csv", "json", "jsonl"};
  if (std::find(formats.begin(), formats.end(), c.format) == formats.end()) {
    throw ConfigError("format must be one of auto, csv, json, jsonl", {"format"});
  }
  if (c.limit_mode != "derivation" && c.limit_mode != "literal") {
    throw ConfigError("limit_mode must be derivation or literal", {"limit_mode"});
  }
  try {
    (void)parse_weight_kind(c.kind);
  } catch (const DomainError&) {
    throw ConfigError("unknown weight kind '" + c.kind + "'", {"kind"});
  }
  if (c.workers == 0) throw ConfigError("workers must be >= 1", {"workers"});
  if (c.window_cells < 16) throw ConfigError("window_cells must be >= 16", {"window_cells"});
  if (!(c.Y_big >= 1.0)) throw ConfigError("Y_big must be >= 1", {"Y_big"});
  if (!(c.quad_tolerance > 0.0)) throw ConfigError("quad_tolerance must be positive", {"quad_tolerance"});
  if (c.X_min > c.X_max) throw ConfigError("need X_min <= X_max", {"X_min", "X_max"});
  if (c.L_min == 0 || c.L_min > c.L_max) throw ConfigError("need 1 <= L_min <= L_max", {"L_min", "L_max"});
  if (c.d == 0) throw ConfigError("d must be >= 1", {"d"});
  (void)parse_number_list(c.q_list, "q_list");
  (void)parse_number_list(c.A_grid, "A_grid");
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::constant: return "constant";
    case Command::weights: return "weights";
    case Command::sandwich: return "sandwich";
    case Command::kloosterman: return "kloosterman";
    case Command::gamma: return "gamma";
    case Command::variance: return "variance";
    case Command::dispersion: return "dispersion";
    case Command::census: return "census";
    case Command::corollary: return "corollary";
    case Command::trend: return "trend";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (auto c : {Command::constant, Command::weights, Command::sandwich, Command::kloosterman,
                 Command::gamma, Command::variance, Command::dispersion, Command::census,
                 Command::corollary, Command::trend}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : registry()) keys.push_back(k);
  return keys;
}

std::vector<double> parse_number_list(std::string_view text, const std::string& field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(start, end - start));
    if (item.empty()) throw ConfigError("empty entry in list field '" + field + "'", {field});
    out.push_back(to_double(item, field));
    start = end + 1;
  }
  return out;
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& [k, f] : registry()) {
    if (k == "output") continue;  // where results go does not change them
    out += k + "=" + f.get(*this) + "\n";
  }
  return out;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::string_view document, const std::vector<std::string>& flags) {
  RunConfig c;
  for (const auto& k : config_keys()) c.provenance[k] = Provenance::default_value;

  std::istringstream in{std::string(document)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value", {});
    }
    assign(c, std::string(trim(body.substr(0, eq))), trim(body.substr(eq + 1)),
           Provenance::config_file);
  }

  for (std::size_t i = 0; i < flags.size(); ++i) {
    const std::string& arg = flags[i];
    if (arg.rfind("--", 0) != 0) {
      if (c.provenance["command"] == Provenance::flag) {
        throw ConfigError("unexpected argument '" + arg + "'", {});
      }
      assign(c, "command", arg, Provenance::flag);
      continue;
    }
    std::string key = arg.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= flags.size()) throw ConfigError("flag --" + key + " needs a value", {normalize_key(key)});
      value = flags[++i];
    }
    assign(c, key, value, Provenance::flag);
  }

  if (!c.command) throw ConfigError("a command is required", {"command"});
  validate(c);
  return c;
}

}  // namespace sievelab
