#pragma once

// Combinatorial sieve weights: linear-sieve supports D(+/-), beta-sieve
// supports E(+/-), the composed lower weights alpha(-), the scale-indexed
// upper weights alpha(+)_P, the bilinear remainder weights beta_d, and the
// Richert weight w_n.
//
// Conventions:
//   * linear-sieve primes lie in [w_level, z), beta-sieve primes in [2, w_level);
//   * a support element is written p1 > p2 > ... > pr and the sign-(+) set
//     checks the prefix condition at odd m, the sign-(-) set at even m;
//   * dyadic scales P are the powers of two with z <= P < y and p ~ P means
//     P <= p < 2P (further clipped to z <= p < y).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sievelab/arith.hpp"

namespace sievelab {

enum class Sign { plus, minus };

enum class WeightKind {
  lambda_plus,
  lambda_minus,
  lambda_plus_P,
  lambda_minus_P,
  rho_plus,
  rho_minus,
  alpha_minus,
  alpha_plus_P,
  beta,
};

std::string_view to_string(WeightKind kind) noexcept;
// Accepts the names produced by to_string; throws DomainError otherwise.
WeightKind parse_weight_kind(std::string_view name);
bool is_scale_indexed(WeightKind kind) noexcept;

struct SieveParams {
  double X = 1e6;
  u64 L = 100;
  u64 q = 1;
  u64 a = 1;
  double eps = 0.001;
  double kappa = 17.0 / 31.0;
  double D = 1e4;
  double z = 10.0;
  double y = 1e3;
  double w_level = 3.0;
  double E = 1e3;
  int beta = 30;
  double eta = 0.9;

  // D = 1e4, z = 10, w_level = 3, E = 1e3, beta = 30, y = 1e3.
  static SieveParams desk_preset();

  // Every level derived from X and eps by the large-X scaling formulas:
  // D = X^(kappa - 100 eps), z = D^(1/4), y = X^(1/2 - 10 eps),
  // w_level = X^(eps^2), E = X^(eps^3), eta = (1 - 60 eps) / (1 - 20 eps).
  // At desk-size X the resulting w_level is below 2 and validate() rejects it.
  static SieveParams derived(double X, double eps, u64 L = 100, u64 q = 1, u64 a = 1,
                             double kappa = 17.0 / 31.0);

  // Throws ConfigError naming the violated fields.
  void validate() const;

  // Powers of two in [z, y).
  std::vector<double> dyadic_scales() const;

  friend bool operator==(const SieveParams&, const SieveParams&) = default;
};

struct WeightEntry {
  u64 d = 1;
  int value = 0;
  friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

// Immutable sparse map d -> weight. Zero weights are not stored.
class WeightSystem {
 public:
  WeightSystem(WeightKind kind, SieveParams params, std::optional<double> scale,
               std::vector<WeightEntry> entries);

  WeightKind kind() const noexcept { return kind_; }
  const SieveParams& params() const noexcept { return params_; }
  std::optional<double> scale() const noexcept { return scale_; }
  std::span<const WeightEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  int value(u64 d) const noexcept;
  bool contains(u64 d) const noexcept { return value(d) != 0; }
  u64 max_element() const noexcept { return entries_.empty() ? 1 : entries_.back().d; }

 private:
  WeightKind kind_;
  SieveParams params_;
  std::optional<double> scale_;
  std::vector<WeightEntry> entries_;  // sorted by d
};

inline constexpr std::size_t kDefaultSupportCap = 2'000'000;

// d in D(sign), or D(sign)_P when a scale is supplied (threshold D/P).
// d must be squarefree with every prime in [w_level, z).
bool in_D_pm(const FactoredInteger& d, Sign sign, const SieveParams& params,
             std::optional<double> scale = std::nullopt);

// e in E(sign); e must be squarefree with every prime below w_level.
bool in_E_pm(const FactoredInteger& e, Sign sign, const SieveParams& params);

// Complete support of one weight kind. Scale-indexed kinds require a scale.
WeightSystem enumerate_support(WeightKind kind, const SieveParams& params,
                               std::optional<double> scale = std::nullopt,
                               std::size_t cap = kDefaultSupportCap);

struct ComposedWeights {
  WeightSystem alpha_minus;
  std::vector<WeightSystem> alpha_plus;  // one per dyadic scale, ascending
  WeightSystem beta;
};

// alpha(-)_d = l+ r- + l- r+ - l+ r+ over d = d_lambda * d_rho,
// alpha(+)_{d,P} = l+_P r+, beta_{e p} = alpha(+)_{e,P} for p ~ P prime.
// lambda_plus_scaled must hold one lambda_plus_P system per dyadic scale.
ComposedWeights compose_alpha_beta(const WeightSystem& lambda_plus,
                                   const WeightSystem& lambda_minus,
                                   const WeightSystem& rho_plus, const WeightSystem& rho_minus,
                                   std::span<const WeightSystem> lambda_plus_scaled,
                                   const SieveParams& params,
                                   std::size_t cap = kDefaultSupportCap);

// Enumerates every constituent and composes them.
ComposedWeights build_composed_weights(const SieveParams& params,
                                       std::size_t cap = kDefaultSupportCap);

// w_n = 1 - (1/eta) * sum over distinct p | n with z <= p < y of (1 - log p / log y).
double richert_weight(const FactoredInteger& n, const SieveParams& params);

// No prime factor of n lies in the sifting range p < z.
bool is_sifted(const FactoredInteger& n, double z);

struct SandwichResult {
  i64 lower = 0;
  int indicator = 0;
  i64 upper = 0;
  bool ok = false;
};

SandwichResult sandwich_check(const FactoredInteger& n, const WeightSystem& alpha_minus,
                              const WeightSystem& alpha_plus_scaled, const SieveParams& params);

struct FactorSplit {
  u64 d1 = 1;
  u64 d2 = 1;
};

// Greedy split of d in D(sign)_P along its decreasing prime list: each prime
// joins d1 while d1 stays <= D1, otherwise it joins d2. Succeeds when
// d2 <= (D/P)/D1. Requires (D/P)/D1 >= z.
FactorSplit well_factor_split(const FactoredInteger& d, double D1, const SieveParams& params,
                              std::optional<double> scale = std::nullopt,
                              Sign sign = Sign::plus);

// CSV rows "d,kind,value" with a header line.
void write_csv(std::ostream& out, const WeightSystem& system);

}  // namespace sievelab
