#include "sievelab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sievelab/error.hpp"
#include "sievelab/exp_sums.hpp"
#include "sievelab/experiment.hpp"
#include "sievelab/numeric.hpp"
#include "sievelab/sieve_theory.hpp"
#include "sievelab/sieve_weights.hpp"
#include "sievelab/variance.hpp"

namespace sievelab {

namespace {

using nlohmann::json;

OutputFormat resolve_format(const RunConfig& c, OutputFormat fallback) {
  if (c.format == "csv") return OutputFormat::csv;
  if (c.format == "json") return OutputFormat::json;
  if (c.format == "jsonl") return OutputFormat::jsonl;
  return fallback;
}

u64 checked_table_limit(const RunConfig& c, double top) {
  if (!(top >= 2.0)) return 2;
  if (top > static_cast<double>(c.table_limit)) {
    throw RangeError("computation needs a factor table up to " + std::to_string(top) +
                     " but table_limit is " + std::to_string(c.table_limit));
  }
  return static_cast<u64>(std::ceil(top));
}

double census_z(const RunConfig& c) {
  return c.census_z > 0.0 ? c.census_z : std::pow(c.params.X, 0.125);
}

CommandOutcome cmd_constant(const RunConfig& c) {
  CommandOutcome o;
  const auto mode = parse_limit_mode(c.limit_mode);
  const auto r = main_term_constant(c.params.kappa, c.quad_tolerance, mode);
  const auto half = main_term_constant(c.params.kappa, c.quad_tolerance / 2.0, mode);
  json j = json::parse(r.to_json());
  j["resolution_check"] = {{"tolerance", c.quad_tolerance},
                           {"value_at_half_tolerance", half.value},
                           {"difference", std::abs(half.value - r.value)}};
  try {
    (void)main_term_constant(c.params.kappa, c.quad_tolerance, LimitMode::literal);
  } catch (const DivergenceError& e) {
    j["literal_reading"] = std::string("diverges: ") + e.what();
  }
  o.report.format = resolve_format(c, OutputFormat::json);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    s << "kappa,limit_mode,value,error_bound,paper_bound\n"
      << r.kappa << ',' << to_string(r.limit_mode) << ',' << r.value << ',' << r.error_bound << ','
      << r.paper_bound << '\n';
    o.report.csv = s.str();
  } else {
    o.report.json = j;
    o.report.lines = {j};
  }
  return o;
}

CommandOutcome cmd_weights(const RunConfig& c) {
  CommandOutcome o;
  const auto kind = parse_weight_kind(c.kind);
  std::optional<double> scale;
  if (c.scale > 0.0) scale = c.scale;
  const auto w = enumerate_support(kind, c.params, scale, c.support_cap);
  o.report.format = resolve_format(c, OutputFormat::csv);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    write_csv(s, w);
    o.report.csv = s.str();
  } else {
    json entries = json::array();
    for (const auto& e : w.entries()) entries.push_back({{"d", e.d}, {"value", e.value}});
    o.report.json = {{"kind", c.kind}, {"size", w.size()}, {"entries", entries}};
    for (const auto& e : w.entries()) o.report.lines.push_back({{"d", e.d}, {"kind", c.kind}, {"value", e.value}});
  }
  return o;
}

CommandOutcome cmd_sandwich(const RunConfig& c) {
  CommandOutcome o;
  const auto weights = build_composed_weights(c.params, c.support_cap);
  const SpfTable table(checked_table_limit(c, static_cast<double>(std::max<u64>(c.n_max, 2))));
  std::size_t checked = 0;
  std::size_t failures = 0;
  json first = nullptr;
  for (u64 n = 1; n <= c.n_max; ++n) {
    const auto fn = n == 1 ? FactoredInteger{} : table.factorize(n);
    for (const auto& ap : weights.alpha_plus) {
      const auto r = sandwich_check(fn, weights.alpha_minus, ap, c.params);
      ++checked;
      if (!r.ok) {
        if (failures == 0) {
          first = {{"n", n}, {"P", *ap.scale()}, {"lower", r.lower}, {"indicator", r.indicator}, {"upper", r.upper}};
        }
        ++failures;
      }
    }
  }
  json scales = json::array();
  for (double P : c.params.dyadic_scales()) scales.push_back(P);
  json j = {{"n_max", c.n_max},
            {"scales", scales},
            {"checked", checked},
            {"failures", failures},
            {"first_failure", first},
            {"alpha_minus_size", weights.alpha_minus.size()},
            {"beta_size", weights.beta.size()}};
  o.report.format = resolve_format(c, OutputFormat::json);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    s << "n_max,checked,failures\n" << c.n_max << ',' << checked << ',' << failures << '\n';
    o.report.csv = s.str();
  }
  o.report.json = j;
  o.report.lines = {j};
  return o;
}

CommandOutcome cmd_kloosterman(const RunConfig& c) {
  CommandOutcome o;
  const auto rows = weil_sweep(c.p_max);
  o.report.format = resolve_format(c, OutputFormat::csv);
  std::size_t failures = 0;
  std::size_t pairs = 0;
  for (const auto& r : rows) {
    failures += r.failures;
    pairs += r.pairs;
  }
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    write_weil_csv(s, rows);
    o.report.csv = s.str();
  } else {
    json per = json::array();
    for (const auto& r : rows) {
      json row = {{"p", r.p}, {"a", r.worst.a}, {"b", r.worst.b}, {"abs_s", r.worst.abs_s},
                  {"bound", r.worst.bound}, {"ratio", r.worst.ratio()}, {"failures", r.failures}};
      per.push_back(row);
      o.report.lines.push_back(row);
    }
    o.report.json = {{"p_max", c.p_max}, {"pairs", pairs}, {"failures", failures}, {"primes", per}};
  }
  return o;
}

CommandOutcome cmd_gamma(const RunConfig& c) {
  CommandOutcome o;
  const auto g = gamma_coefficient(c.d, c.Lambda, c.M);
  const auto exact = gamma_coefficient_exact(c.d, mpq_class(c.Lambda)).get_d();
  json j = {{"d", g.d},           {"Lambda", g.Lambda},  {"M", g.M},
            {"value", g.value},   {"tail_bound", g.tail_bound},
            {"closed_form", exact}, {"difference", std::abs(exact - g.value)}};
  o.report.format = resolve_format(c, OutputFormat::json);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    s << "d,Lambda,M,value,tail_bound,closed_form\n"
      << g.d << ',' << g.Lambda << ',' << g.M << ',' << g.value << ',' << g.tail_bound << ',' << exact << '\n';
    o.report.csv = s.str();
  }
  o.report.json = j;
  o.report.lines = {j};
  return o;
}

CommandOutcome cmd_variance(const RunConfig& c) {
  CommandOutcome o;
  const SmoothWindow g(c.window_cells);
  const auto qs = parse_number_list(c.q_list, "q_list");
  DecompositionOptions opt;
  opt.Y_big = c.Y_big;
  opt.budget_constant = c.budget_constant;
  CounterRng rng(c.seed);
  std::size_t flagged = 0;
  json batch = json::array();
  for (u64 i = 0; i < c.configs; ++i) {
    const auto q = static_cast<u64>(qs[i % qs.size()]);
    const auto X = static_cast<double>(rng.integer(static_cast<i64>(c.X_min), static_cast<i64>(c.X_max)));
    const u64 L_cap = std::min<u64>(c.L_max, static_cast<u64>(X / 3.0));
    const auto L = static_cast<u64>(rng.integer(static_cast<i64>(c.L_min), static_cast<i64>(L_cap)));
    Coefficients a;
    for (u64 d = 1; d <= c.d_max; ++d) {
      const double v = rng.uniform(-1.0, 1.0);
      if (std::gcd(d, q) == 1) a[d] = v;
    }
    auto r = variance_decompose(a, q, L, X, g, opt);
    r.seed = c.seed;
    if (r.flagged) ++flagged;
    const auto rec = json::parse(r.to_json());
    o.report.lines.push_back(rec);
    batch.push_back(rec);
  }
  o.report.format = resolve_format(c, OutputFormat::jsonl);
  o.report.json = {{"configurations", batch}, {"flagged", flagged}};
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    s << "q,L,X,lhs,s1,s2,s3,residual,error_budget,flagged\n";
    for (const auto& r : batch) {
      s << r["q"].get<u64>() << ',' << r["L"].get<u64>() << ',' << r["X"].get<double>() << ','
        << r["lhs"].get<double>() << ',' << r["s1"].get<double>() << ',' << r["s2"].get<double>() << ','
        << r["s3"].get<double>() << ',' << r["residual"].get<double>() << ','
        << r["error_budget"].get<double>() << ',' << (r["flagged"].get<bool>() ? 1 : 0) << '\n';
    }
    o.report.csv = s.str();
  }
  if (flagged > 0) o.exit_code = kExitBudgetFlagged;
  return o;
}

json tuple_json(const DeltaTuple& t) {
  return {{"l1", t.l1}, {"l2", t.l2}, {"m1", t.m1}, {"n1", t.n1}, {"tn1", t.tn1},
          {"n2", t.n2}, {"tn2", t.tn2}, {"m2", t.m2}, {"d", t.d}};
}

CommandOutcome cmd_dispersion(const RunConfig& c) {
  CommandOutcome o;
  const auto s = delta_sweep(c.seed, c.tuples, c.entry_max);
  json fails = json::array();
  for (const auto& t : s.first_failures) fails.push_back(tuple_json(t));
  ProbeConfig pc;
  pc.M1 = pc.N1 = pc.M2 = pc.N2 = c.probe_M;
  pc.q = c.params.q;
  pc.a = static_cast<i64>(c.params.a);
  pc.X = c.params.X;
  const SmoothWindow w(c.window_cells);
  const auto p = prop52_bracket_probe(pc, w);
  json j = {{"delta_identity",
             {{"checked", s.checked},
              {"failures", s.failures},
              {"attempts", s.attempts},
              {"unit_gcd_checked", s.unit_gcd_checked},
              {"unit_gcd_failures", s.unit_gcd_failures},
              {"degenerate_checked", s.degenerate_checked},
              {"degenerate_failures", s.degenerate_failures},
              {"first_failures", fails}}},
            {"bracket_probe",
             {{"M", c.probe_M},
              {"q", pc.q},
              {"a", pc.a},
              {"X", pc.X},
              {"quadruple_sum", p.quadruple_sum},
              {"paper_bound", p.paper_bound},
              {"ratio", p.ratio},
              {"tuples", p.tuples},
              {"incompatible", p.incompatible}}}};
  o.report.format = resolve_format(c, OutputFormat::json);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream out;
    out << "checked,failures,unit_gcd_checked,unit_gcd_failures,probe_sum,probe_bound,probe_ratio\n"
        << s.checked << ',' << s.failures << ',' << s.unit_gcd_checked << ',' << s.unit_gcd_failures
        << ',' << p.quadruple_sum << ',' << p.paper_bound << ',' << p.ratio << '\n';
    o.report.csv = out.str();
  }
  o.report.json = j;
  o.report.lines = {j};
  return o;
}

CommandOutcome cmd_census(const RunConfig& c) {
  CommandOutcome o;
  const SpfTable table(checked_table_limit(c, 2.0 * c.params.X));
  const double z = census_z(c);
  const double phi = static_cast<double>(multiplicative(factorize_trial(c.params.q)).phi);
  const double A = static_cast<double>(c.params.L) / (phi * std::log(c.params.X));
  auto r = exceptional_measure(c.params.q, c.params.X, c.params.L, z, c.c * A, table);
  r.c = c.c;
  const auto sq = squarefull_measure(c.params.q, c.params.X, c.params.L, c.params.z, table);
  o.report.format = resolve_format(c, OutputFormat::csv);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    r.write_csv(s);
    o.report.csv = s.str();
  } else {
    json j = json::parse(r.summary_json());
    json m = json::object();
    for (const auto& [a, v] : r.measure) m[std::to_string(a)] = v;
    j["measure"] = m;
    j["squarefull"] = {{"measure", sq.measure}, {"envelope", sq.envelope}, {"ok", sq.ok}};
    o.report.json = j;
    o.report.lines = {j};
  }
  return o;
}

CommandOutcome cmd_corollary(const RunConfig& c) {
  CommandOutcome o;
  const auto s = corollary_scan(c.params.q, c.psi);
  const json j = json::parse(s.to_json());
  o.report.format = resolve_format(c, OutputFormat::json);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream out;
    out << "a,witness\n";
    for (const auto& [a, n] : s.witnesses) {
      out << a << ',';
      if (n) out << *n;
      out << '\n';
    }
    o.report.csv = out.str();
  }
  o.report.json = j;
  o.report.lines = {j};
  return o;
}

CommandOutcome cmd_trend(const RunConfig& c) {
  CommandOutcome o;
  const SpfTable table(checked_table_limit(c, 2.0 * c.params.X));
  const auto grid = parse_number_list(c.A_grid, "A_grid");
  const auto rows = theorem_trend_scan(c.params.q, c.params.X, census_z(c), c.c, grid, table);
  o.report.format = resolve_format(c, OutputFormat::csv);
  if (o.report.format == OutputFormat::csv) {
    std::ostringstream s;
    write_trend_csv(s, rows);
    o.report.csv = s.str();
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = {{"A", r.A}, {"L", r.L}, {"threshold", r.threshold}, {"total", r.total},
                  {"normalized", r.normalized}, {"degenerate", r.degenerate}};
      arr.push_back(row);
      o.report.lines.push_back(row);
    }
    o.report.json = {{"rows", arr}};
  }
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void print_usage(std::ostream& err) {
  err << "usage: sievelab <command> [--config file] [--key value ...]\n"
         "commands: constant weights sandwich kloosterman gamma variance dispersion census "
         "corollary trend\n"
         "keys:";
  for (const auto& k : config_keys()) err << ' ' << k;
  err << '\n';
}

}  // namespace

CommandOutcome run_command(const RunConfig& config) {
  switch (*config.command) {
    case Command::constant: return cmd_constant(config);
    case Command::weights: return cmd_weights(config);
    case Command::sandwich: return cmd_sandwich(config);
    case Command::kloosterman: return cmd_kloosterman(config);
    case Command::gamma: return cmd_gamma(config);
    case Command::variance: return cmd_variance(config);
    case Command::dispersion: return cmd_dispersion(config);
    case Command::census: return cmd_census(config);
    case Command::corollary: return cmd_corollary(config);
    case Command::trend: return cmd_trend(config);
  }
  throw ConfigError("unknown command", {"command"});
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
      print_usage(err);
      return args.empty() ? kExitValidation : kExitOk;
    }
    std::string document;
    std::vector<std::string> flags;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw ConfigError("--config needs a path", {"config"});
        document = read_file(args[++i]);
      } else if (args[i].rfind("--config=", 0) == 0) {
        document = read_file(args[i].substr(9));
      } else {
        flags.push_back(args[i]);
      }
    }
    const auto config = parse_config(document, flags);
    const auto outcome = run_command(config);
    emit_report(outcome.report, config, out);
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.fields().empty()) {
      err << " [fields:";
      for (const auto& f : e.fields()) err << ' ' << f;
      err << ']';
    }
    err << '\n';
    return kExitValidation;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << " (estimate " << e.estimate() << ")\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace sievelab
