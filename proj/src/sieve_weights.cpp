#include "sievelab/sieve_weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "sievelab/error.hpp"

namespace sievelab {

namespace {

using u128 = unsigned __int128;

constexpr u128 kSaturate = u128{1} << 100;

u128 saturating_mul(u128 a, u128 b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kSaturate || b >= kSaturate || a > kSaturate / b) return kSaturate;
  return a * b;
}

// prefix * p^exponent < threshold, evaluated exactly up to 2^100.
bool below(u128 prefix, u64 p, int exponent, double threshold) {
  u128 value = prefix;
  for (int i = 0; i < exponent && value < kSaturate; ++i) value = saturating_mul(value, p);
  if (value >= kSaturate) return false;
  return static_cast<long double>(value) < static_cast<long double>(threshold);
}

bool checked_at(int m, Sign sign) { return (m % 2 == 1) == (sign == Sign::plus); }

// Prefix conditions for a decreasing prime list.
bool prefix_conditions_hold(std::span<const u64> primes_desc, Sign sign, double threshold,
                            int exponent) {
  u128 prefix = 1;
  for (std::size_t i = 0; i < primes_desc.size(); ++i) {
    const int m = static_cast<int>(i) + 1;
    prefix = saturating_mul(prefix, primes_desc[i]);
    if (checked_at(m, sign) && !below(prefix, primes_desc[i], exponent, threshold)) return false;
  }
  return true;
}

std::vector<u64> primes_in_range(double lo_inclusive, double hi_exclusive) {
  std::vector<u64> out;
  if (hi_exclusive <= 2.0) return out;
  const auto top = static_cast<u64>(std::ceil(hi_exclusive));
  for (u64 p : primes_up_to(top)) {
    const auto pd = static_cast<double>(p);
    if (pd >= lo_inclusive && pd < hi_exclusive) out.push_back(p);
  }
  return out;
}

struct SupportSpec {
  std::vector<u64> primes_asc;
  Sign sign;
  double threshold;
  int exponent;
};

SupportSpec spec_for(WeightKind kind, const SieveParams& params, std::optional<double> scale) {
  switch (kind) {
    case WeightKind::lambda_plus:
    case WeightKind::lambda_minus:
      return {primes_in_range(params.w_level, params.z),
              kind == WeightKind::lambda_plus ? Sign::plus : Sign::minus, params.D, 2};
    case WeightKind::lambda_plus_P:
    case WeightKind::lambda_minus_P:
      return {primes_in_range(params.w_level, params.z),
              kind == WeightKind::lambda_plus_P ? Sign::plus : Sign::minus, params.D / *scale, 2};
    case WeightKind::rho_plus:
    case WeightKind::rho_minus:
      return {primes_in_range(2.0, params.w_level),
              kind == WeightKind::rho_plus ? Sign::plus : Sign::minus, params.E, params.beta};
    default:
      throw DomainError("not a basic sieve kind: " + std::string(to_string(kind)));
  }
}

// Depth-first enumeration over decreasing prime lists. Every valid prefix of
// a valid element is itself valid, so a failed child prunes its subtree; at a
// checked level the condition is monotone in the new prime, which lets the
// ascending candidate loop stop at the first failure.
class SupportEnumerator {
 public:
  SupportEnumerator(const SupportSpec& spec, std::size_t cap) : spec_(spec), cap_(cap) {}

  std::vector<WeightEntry> run() {
    emit(1, 0);
    descend(spec_.primes_asc.size(), 0, 1);
    return std::move(out_);
  }

 private:
  void emit(u64 d, int r) {
    if (out_.size() >= cap_) {
      throw ResourceError("support cap " + std::to_string(cap_) + " exceeded", out_.size() + 1);
    }
    out_.push_back({d, r % 2 == 0 ? 1 : -1});
  }

  // Candidates for the next prime are primes_asc[0 .. bound).
  void descend(std::size_t bound, int depth, u64 prefix) {
    const int m = depth + 1;
    for (std::size_t i = 0; i < bound; ++i) {
      const u64 p = spec_.primes_asc[i];
      if (checked_at(m, spec_.sign) && !below(prefix * u128{p}, p, spec_.exponent, spec_.threshold)) {
        break;
      }
      const u64 d = prefix * p;
      emit(d, m);
      descend(i, m, d);
    }
  }

  const SupportSpec& spec_;
  std::size_t cap_;
  std::vector<WeightEntry> out_;
};

void require_squarefree_in(const FactoredInteger& n, double lo, double hi, const char* what) {
  if (!n.is_squarefree()) {
    throw DomainError(std::string(what) + ": " + std::to_string(n.value()) + " is not squarefree");
  }
  for (const auto& f : n.factors()) {
    const auto p = static_cast<double>(f.prime);
    if (p < lo || p >= hi) {
      throw DomainError(std::string(what) + ": prime " + std::to_string(f.prime) +
                        " outside the allowed range");
    }
  }
}

std::vector<u64> descending(const FactoredInteger& n) {
  auto primes = n.primes();
  std::reverse(primes.begin(), primes.end());
  return primes;
}

void require_params(const WeightSystem& s, WeightKind kind, const SieveParams& params) {
  if (s.kind() != kind) {
    throw ConsistencyError("expected a " + std::string(to_string(kind)) + " system, got " +
                           std::string(to_string(s.kind())));
  }
  if (!(s.params() == params)) {
    throw ConsistencyError(std::string(to_string(kind)) +
                           " system was built from different sieve parameters");
  }
}

std::vector<WeightEntry> to_entries(const std::map<u64, i64>& acc) {
  std::vector<WeightEntry> out;
  out.reserve(acc.size());
  for (const auto& [d, v] : acc) {
    if (v != 0) out.push_back({d, static_cast<int>(v)});
  }
  return out;
}

// Sum of weights over the squarefree divisors of n built from primes below bound.
i64 divisor_weight_sum(const FactoredInteger& n, const WeightSystem& w, double bound) {
  std::vector<u64> divs{1};
  for (const auto& f : n.factors()) {
    if (static_cast<double>(f.prime) >= bound) continue;
    const std::size_t k = divs.size();
    for (std::size_t i = 0; i < k; ++i) divs.push_back(divs[i] * f.prime);
  }
  i64 total = 0;
  for (u64 d : divs) total += w.value(d);
  return total;
}

}  // namespace

std::string_view to_string(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::lambda_plus: return "lambda_plus";
    case WeightKind::lambda_minus: return "lambda_minus";
    case WeightKind::lambda_plus_P: return "lambda_plus_P";
    case WeightKind::lambda_minus_P: return "lambda_minus_P";
    case WeightKind::rho_plus: return "rho_plus";
    case WeightKind::rho_minus: return "rho_minus";
    case WeightKind::alpha_minus: return "alpha_minus";
    case WeightKind::alpha_plus_P: return "alpha_plus_P";
    case WeightKind::beta: return "beta";
  }
  return "unknown";
}

WeightKind parse_weight_kind(std::string_view name) {
  for (auto k : {WeightKind::lambda_plus, WeightKind::lambda_minus, WeightKind::lambda_plus_P,
                 WeightKind::lambda_minus_P, WeightKind::rho_plus, WeightKind::rho_minus,
                 WeightKind::alpha_minus, WeightKind::alpha_plus_P, WeightKind::beta}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown weight kind '" + std::string(name) + "'");
}

bool is_scale_indexed(WeightKind kind) noexcept {
  return kind == WeightKind::lambda_plus_P || kind == WeightKind::lambda_minus_P ||
         kind == WeightKind::alpha_plus_P;
}

SieveParams SieveParams::desk_preset() { return SieveParams{}; }

SieveParams SieveParams::derived(double X, double eps, u64 L, u64 q, u64 a, double kappa) {
  SieveParams p;
  p.X = X;
  p.L = L;
  p.q = q;
  p.a = a;
  p.eps = eps;
  p.kappa = kappa;
  p.D = std::pow(X, kappa - 100.0 * eps);
  p.z = std::pow(p.D, 0.25);
  p.y = std::pow(X, 0.5 - 10.0 * eps);
  p.w_level = std::pow(X, eps * eps);
  p.E = std::pow(X, eps * eps * eps);
  p.beta = 30;
  p.eta = (1.0 - 60.0 * eps) / (1.0 - 20.0 * eps);
  return p;
}

void SieveParams::validate() const {
  if (!(w_level >= 2.0)) throw ConfigError("w_level must be >= 2", {"w_level"});
  if (!(w_level < z)) throw ConfigError("need w_level < z", {"w_level", "z"});
  if (!(z <= D)) throw ConfigError("need z <= D", {"z", "D"});
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)", {"eta"});
  if (beta < 2) throw ConfigError("beta must be an integer >= 2", {"beta"});
  if (!(E >= 1.0)) throw ConfigError("E must be >= 1", {"E"});
  if (!(y > 1.0)) throw ConfigError("y must exceed 1", {"y"});
  if (!(X > 0.0)) throw ConfigError("X must be positive", {"X"});
  if (L < 1) throw ConfigError("L must be a positive integer", {"L"});
  if (q < 1) throw ConfigError("q must be positive", {"q"});
  if (std::gcd(a % q, q) != 1 && q > 1) throw ConfigError("need gcd(a, q) = 1", {"a", "q"});
}

std::vector<double> SieveParams::dyadic_scales() const {
  std::vector<double> out;
  for (double P = 1.0; P < y; P *= 2.0) {
    if (P >= z) out.push_back(P);
  }
  return out;
}

WeightSystem::WeightSystem(WeightKind kind, SieveParams params, std::optional<double> scale,
                           std::vector<WeightEntry> entries)
    : kind_(kind), params_(params), scale_(scale), entries_(std::move(entries)) {
  std::erase_if(entries_, [](const WeightEntry& e) { return e.value == 0; });
  std::sort(entries_.begin(), entries_.end(),
            [](const WeightEntry& a, const WeightEntry& b) { return a.d < b.d; });
}

int WeightSystem::value(u64 d) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), d,
                             [](const WeightEntry& e, u64 key) { return e.d < key; });
  return (it != entries_.end() && it->d == d) ? it->value : 0;
}

bool in_D_pm(const FactoredInteger& d, Sign sign, const SieveParams& params,
             std::optional<double> scale) {
  require_squarefree_in(d, params.w_level, params.z, "in_D_pm");
  const double threshold = scale ? params.D / *scale : params.D;
  const auto primes = descending(d);
  return prefix_conditions_hold(primes, sign, threshold, 2);
}

bool in_E_pm(const FactoredInteger& e, Sign sign, const SieveParams& params) {
  require_squarefree_in(e, 2.0, params.w_level, "in_E_pm");
  const auto primes = descending(e);
  return prefix_conditions_hold(primes, sign, params.E, params.beta);
}

WeightSystem enumerate_support(WeightKind kind, const SieveParams& params,
                               std::optional<double> scale, std::size_t cap) {
  if (is_scale_indexed(kind) && !scale) {
    throw DomainError(std::string(to_string(kind)) + " needs a dyadic scale P");
  }
  switch (kind) {
    case WeightKind::alpha_minus:
      return build_composed_weights(params, cap).alpha_minus;
    case WeightKind::beta:
      return build_composed_weights(params, cap).beta;
    case WeightKind::alpha_plus_P: {
      const auto lp = enumerate_support(WeightKind::lambda_plus_P, params, scale, cap);
      const auto rp = enumerate_support(WeightKind::rho_plus, params, std::nullopt, cap);
      std::vector<WeightEntry> entries;
      for (const auto& l : lp.entries()) {
        for (const auto& r : rp.entries()) entries.push_back({l.d * r.d, l.value * r.value});
      }
      if (entries.size() > cap) throw ResourceError("support cap exceeded", entries.size());
      return WeightSystem(kind, params, scale, std::move(entries));
    }
    default: {
      const auto spec = spec_for(kind, params, scale);
      auto entries = SupportEnumerator(spec, cap).run();
      const auto stored_scale = is_scale_indexed(kind) ? scale : std::nullopt;
      return WeightSystem(kind, params, stored_scale, std::move(entries));
    }
  }
}

ComposedWeights compose_alpha_beta(const WeightSystem& lambda_plus,
                                   const WeightSystem& lambda_minus,
                                   const WeightSystem& rho_plus, const WeightSystem& rho_minus,
                                   std::span<const WeightSystem> lambda_plus_scaled,
                                   const SieveParams& params, std::size_t cap) {
  require_params(lambda_plus, WeightKind::lambda_plus, params);
  require_params(lambda_minus, WeightKind::lambda_minus, params);
  require_params(rho_plus, WeightKind::rho_plus, params);
  require_params(rho_minus, WeightKind::rho_minus, params);
  const auto scales = params.dyadic_scales();
  if (lambda_plus_scaled.size() != scales.size()) {
    throw ConsistencyError("expected one lambda_plus_P system per dyadic scale (" +
                           std::to_string(scales.size()) + "), got " +
                           std::to_string(lambda_plus_scaled.size()));
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    require_params(lambda_plus_scaled[i], WeightKind::lambda_plus_P, params);
    if (lambda_plus_scaled[i].scale() != scales[i]) {
      throw ConsistencyError("lambda_plus_P systems must follow the dyadic scales in order");
    }
  }

  // Union of the lambda supports and of the rho supports; the two prime
  // ranges are disjoint so d_lambda * d_rho determines both factors.
  auto union_of = [](const WeightSystem& a, const WeightSystem& b) {
    std::vector<u64> ds;
    for (const auto& e : a.entries()) ds.push_back(e.d);
    for (const auto& e : b.entries()) ds.push_back(e.d);
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
  };
  const auto lam = union_of(lambda_plus, lambda_minus);
  const auto rho = union_of(rho_plus, rho_minus);
  if (lam.size() * rho.size() > cap) {
    throw ResourceError("alpha(-) support would exceed the cap", lam.size() * rho.size());
  }

  std::vector<WeightEntry> alpha_minus;
  alpha_minus.reserve(lam.size() * rho.size());
  for (u64 dl : lam) {
    const int lp = lambda_plus.value(dl);
    const int lm = lambda_minus.value(dl);
    for (u64 dr : rho) {
      const int rp = rho_plus.value(dr);
      const int rm = rho_minus.value(dr);
      alpha_minus.push_back({dl * dr, lp * rm + lm * rp - lp * rp});
    }
  }

  std::vector<WeightSystem> alpha_plus;
  std::map<u64, i64> beta;
  const auto big_primes = primes_in_range(params.z, params.y);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double P = scales[i];
    std::vector<WeightEntry> entries;
    for (const auto& l : lambda_plus_scaled[i].entries()) {
      for (const auto& r : rho_plus.entries()) entries.push_back({l.d * r.d, l.value * r.value});
    }
    WeightSystem ap(WeightKind::alpha_plus_P, params, P, std::move(entries));
    for (u64 p : big_primes) {
      const auto pd = static_cast<double>(p);
      if (pd < P || pd >= 2.0 * P) continue;
      for (const auto& e : ap.entries()) beta[e.d * p] += e.value;
    }
    if (beta.size() > cap) throw ResourceError("beta support would exceed the cap", beta.size());
    alpha_plus.push_back(std::move(ap));
  }

  return {WeightSystem(WeightKind::alpha_minus, params, std::nullopt, std::move(alpha_minus)),
          std::move(alpha_plus),
          WeightSystem(WeightKind::beta, params, std::nullopt, to_entries(beta))};
}

ComposedWeights build_composed_weights(const SieveParams& params, std::size_t cap) {
  const auto lp = enumerate_support(WeightKind::lambda_plus, params, std::nullopt, cap);
  const auto lm = enumerate_support(WeightKind::lambda_minus, params, std::nullopt, cap);
  const auto rp = enumerate_support(WeightKind::rho_plus, params, std::nullopt, cap);
  const auto rm = enumerate_support(WeightKind::rho_minus, params, std::nullopt, cap);
  std::vector<WeightSystem> scaled;
  for (double P : params.dyadic_scales()) {
    scaled.push_back(enumerate_support(WeightKind::lambda_plus_P, params, P, cap));
  }
  return compose_alpha_beta(lp, lm, rp, rm, scaled, params, cap);
}

double richert_weight(const FactoredInteger& n, const SieveParams& params) {
  const double log_y = std::log(params.y);
  double total = 0.0;
  for (const auto& f : n.factors()) {
    const auto p = static_cast<double>(f.prime);
    if (p >= params.z && p < params.y) total += 1.0 - std::log(p) / log_y;
  }
  return 1.0 - total / params.eta;
}

bool is_sifted(const FactoredInteger& n, double z) {
  return n.is_one() || static_cast<double>(n.smallest_prime()) >= z;
}

SandwichResult sandwich_check(const FactoredInteger& n, const WeightSystem& alpha_minus,
                              const WeightSystem& alpha_plus_scaled, const SieveParams& params) {
  if (alpha_minus.kind() != WeightKind::alpha_minus ||
      alpha_plus_scaled.kind() != WeightKind::alpha_plus_P) {
    throw ConsistencyError("sandwich_check needs alpha_minus and alpha_plus_P systems");
  }
  if (!(alpha_minus.params() == params) || !(alpha_plus_scaled.params() == params)) {
    throw ConsistencyError("sandwich_check systems built from different parameters");
  }
  SandwichResult r;
  r.lower = divisor_weight_sum(n, alpha_minus, params.z);
  r.upper = divisor_weight_sum(n, alpha_plus_scaled, params.z);
  r.indicator = is_sifted(n, params.z) ? 1 : 0;
  r.ok = r.lower <= r.indicator && r.indicator <= r.upper;
  return r;
}

FactorSplit well_factor_split(const FactoredInteger& d, double D1, const SieveParams& params,
                              std::optional<double> scale, Sign sign) {
  if (!in_D_pm(d, sign, params, scale)) {
    throw DomainError(std::to_string(d.value()) + " is not in the requested linear-sieve support");
  }
  const double level = scale ? params.D / *scale : params.D;
  if (!(D1 >= 1.0)) throw DomainError("D1 must be >= 1");
  const double D2 = level / D1;
  if (!(D2 >= params.z)) throw DomainError("need (D/P)/D1 >= z");

  FactorSplit s;
  for (u64 p : descending(d)) {
    if (static_cast<double>(s.d1) * static_cast<double>(p) <= D1) {
      s.d1 *= p;
    } else {
      s.d2 *= p;
    }
  }
  if (static_cast<double>(s.d2) > D2) {
    throw SplitInfeasibleError("greedy split of " + std::to_string(d.value()) + " leaves d2 = " +
                               std::to_string(s.d2) + " above " + std::to_string(D2));
  }
  return s;
}

void write_csv(std::ostream& out, const WeightSystem& system) {
  out << "d,kind,value\n";
  for (const auto& e : system.entries()) {
    out << e.d << ',' << to_string(system.kind()) << ',' << e.value << '\n';
  }
}

}  // namespace sievelab
