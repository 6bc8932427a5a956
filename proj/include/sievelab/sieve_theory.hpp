#pragma once

// Linear sieve functions F and f, Euler products V(w, z), the main term
// M(z, y), the main-term constant, the fundamental-lemma ratio for the
// beta-sieve weights and the theta_b / S1 weight diagnostics.

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "sievelab/arith.hpp"
#include "sievelab/sieve_weights.hpp"

namespace sievelab {

inline constexpr double kEulerGamma = 0.57721566490153286;

struct SieveFunctionValues {
  double F = 0.0;
  double f = 0.0;
};

// F and f on a uniform grid. Closed forms are used for F on (0, 3] and f on
// (0, 4]; beyond that the table is produced by trapezoidal integration of
// (sF)' = f(s - 1) and (sf)' = F(s - 1), started at s = 2 so that the
// integrated values can be compared with the closed forms at the junctions.
class SieveFunctionTable {
 public:
  explicit SieveFunctionTable(double s_max = 30.0, double step = 1e-4);

  // Throws DomainError for s <= 0. Beyond s_max both functions are 1 to
  // double precision and 1 is returned.
  SieveFunctionValues at(double s) const;

  // Values produced by the integration alone (no closed form), 2 <= s <= s_max.
  SieveFunctionValues integrated(double s) const;

  double s_max() const noexcept { return s_max_; }
  double step() const noexcept { return step_; }
  double gamma_euler() const noexcept { return kEulerGamma; }

 private:
  double interpolate(const std::vector<double>& v, double s) const;

  double s_max_;
  double step_;
  std::vector<double> F_;  // index i <-> s = 2 + i * step
  std::vector<double> f_;
};

double F_closed(double s);  // 2 e^gamma / s
double f_closed(double s);  // 2 e^gamma log(s - 1) / s on [2, 4], 0 below 2

// Shared default table.
SieveFunctionValues linear_sieve_F_f(double s);

inline constexpr u64 kPrimeTableLimit = 100'000'000;

// prod over primes lo < p <= hi with p not dividing q of (1 - 1/p), exact.
// Throws RangeError when hi exceeds kPrimeTableLimit, DomainError when lo > hi.
mpq_class v_product_exact(double lo, double hi, u64 q = 1);
double v_product(double lo, double hi, u64 q = 1);

// V(w) = prod over p < w, p not dividing q.
mpq_class v_below(double w, u64 q = 1);

struct MainTermSum {
  mpq_class value;       // sum over (d, q) = 1 of (alpha_d - beta_d) / d
  double value_real = 0.0;
  double V_z = 0.0;      // prod over p < z, p not dividing q
  double ratio = 0.0;    // value / V_z
  std::size_t terms = 0;
};

MainTermSum evaluate_M(const WeightSystem& alpha_minus, const WeightSystem& beta, u64 q);

enum class LimitMode { derivation, literal };

std::string_view to_string(LimitMode mode) noexcept;
LimitMode parse_limit_mode(std::string_view name);

inline constexpr double kPaperConstantBound = 0.0166;

struct MainTermReport {
  double kappa = 0.0;
  LimitMode limit_mode = LimitMode::derivation;
  double lower_limit = 0.25;
  double upper_limit = 0.0;
  double integral = 0.0;
  double value = 0.0;
  double error_bound = 0.0;
  int panels = 0;
  double paper_bound = kPaperConstantBound;

  std::string to_json() const;
};

// (1 - 2 kappa alpha) / (4 alpha (1 - alpha)).
double main_term_integrand(double kappa, double alpha);

// 1/2 e^gamma log 3 - 2 e^gamma * integral over [1/4, upper] of the integrand.
// upper = 1/(2 kappa) in derivation mode; the literal upper limit 2 kappa lies
// past the pole at alpha = 1 and raises DivergenceError. kappa must lie in
// (1/2, 3/4).
MainTermReport main_term_constant(double kappa, double tolerance = 1e-10,
                                  LimitMode mode = LimitMode::derivation);

// (sum over (e, q) = 1 of rho_e / e) / V(w_level), V over p < w_level.
double fundamental_lemma_ratio(const WeightSystem& rho, u64 q);
mpq_class fundamental_lemma_sum(const WeightSystem& rho, u64 q);

// sum over d | b of lambda_d. b must be squarefree.
i64 theta_transform(const WeightSystem& lambda, const FactoredInteger& b);

struct S1Diagnostic {
  mpq_class value;
  double value_real = 0.0;
  double reference = 0.0;  // (q / phi(q)) / log X
  double ratio = 0.0;
  std::size_t divisors = 0;
};

// sum over d of d * (sum over m = 0 (d), (m, q) = 1 of weight_m / m)^2.
S1Diagnostic s1_weight_diagnostic(const WeightSystem& system, u64 q, const SieveParams& params);

}  // namespace sievelab
