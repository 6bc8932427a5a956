#pragma once

// Run configuration: a key=value document overridden by --key value flags,
// with per-field provenance and a stable hash of the resolved values.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sievelab/sieve_weights.hpp"

namespace sievelab {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command {
  constant,
  weights,
  sandwich,
  kloosterman,
  gamma,
  variance,
  dispersion,
  census,
  corollary,
  trend,
};

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

enum class Provenance { default_value, config_file, flag };

struct RunConfig {
  std::optional<Command> command;
  SieveParams params = SieveParams::desk_preset();

  std::string output;          // empty: standard output
  std::string format = "auto"; // csv, json, jsonl or auto (command default)
  std::uint64_t seed = 1;
  std::uint64_t workers = 1;
  std::uint64_t support_cap = 2'000'000;
  std::uint64_t table_limit = 100'000'000;
  double budget_constant = 10.0;
  double Y_big = 1e6;
  double quad_tolerance = 1e-10;
  std::uint64_t window_cells = 65536;

  // constant
  std::string limit_mode = "derivation";
  // weights / sandwich
  std::string kind = "lambda_plus";
  double scale = 0.0;  // 0: no dyadic scale
  std::uint64_t n_max = 100'000;
  // kloosterman
  std::uint64_t p_max = 499;
  // gamma
  std::uint64_t d = 1;
  double Lambda = 0.5;
  std::uint64_t M = 0;
  // variance
  std::uint64_t configs = 100;
  std::string q_list = "1,3,5";
  double X_min = 2000.0;
  double X_max = 10000.0;
  std::uint64_t L_min = 20;
  std::uint64_t L_max = 200;
  std::uint64_t d_max = 10;
  // dispersion
  std::uint64_t tuples = 10'000;
  std::uint64_t entry_max = 100;
  std::uint64_t probe_M = 8;
  // census / trend / corollary
  double census_z = 0.0;  // 0: X^(1/8)
  double c = 0.05;
  std::string A_grid = "2,4,8,16";
  double psi = 10.0;

  std::map<std::string, Provenance> provenance;

  // Sorted key=value lines of every field (command included).
  std::string canonical() const;
  // FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

// Names of every accepted key, sorted.
std::vector<std::string> config_keys();

// Parses a key=value document ('#' comments, blank lines allowed) and then
// the flag list. Flags are "--key value" or "--key=value"; dashes in keys map
// to underscores; the first bare word is the command. Unknown keys, bad
// values and inconsistent sieve parameters raise ConfigError naming the
// fields; a missing command raises ConfigError with field "command".
RunConfig parse_config(std::string_view document, const std::vector<std::string>& flags);

// Splits "1,2,3" into numbers; throws ConfigError naming field on bad input.
std::vector<double> parse_number_list(std::string_view text, const std::string& field);

}  // namespace sievelab
