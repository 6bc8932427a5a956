#pragma once

// Type-I variance machinery: the remainder E(x, a), the S1 + S2 + S3
// decomposition of the smoothed variance checked against a direct evaluation,
// the S1/S3 evaluators for sieve weights, the Delta fraction identity and the
// bracketed congruence-count probe.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sievelab/arith.hpp"
#include "sievelab/sieve_weights.hpp"
#include "sievelab/smooth_window.hpp"

namespace sievelab {

// a_d coefficients, keyed by d.
using Coefficients = std::map<u64, double>;

// A_d(x, a) = #{x - L < n <= x : n = a (q), d | n}, exact for (d, q) = 1.
u64 progression_count(double x, u64 L, u64 q, u64 a, u64 d);

// sum over (d, q) = 1 of (alpha_d - beta_d)(A_d(x, a) - L / (q d)).
mpq_class remainder_E(double x, u64 a, const WeightSystem& alpha_minus, const WeightSystem& beta,
                      const SieveParams& params);

struct DecompositionOptions {
  double Y_big = 1e6;
  double budget_constant = 10.0;
  double delta = 0.1;  // support must lie below X^(1 - delta)
};

struct VarianceReport {
  double lhs = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double residual = 0.0;
  double error_budget = 0.0;
  bool flagged = false;

  Coefficients coefficients;
  u64 q = 1;
  u64 L = 1;
  double X = 0.0;
  double Y_big = 0.0;
  double budget_constant = 0.0;
  std::string window;
  std::size_t window_cells = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

// Throws DomainError when a precondition of the decomposition fails
// (support too large, L > X / 3, coefficient on d not coprime to q).
VarianceReport variance_decompose(const Coefficients& a, u64 q, u64 L, double X,
                                const SmoothWindow& g, const DecompositionOptions& options = {});

// c_n = sum over d | n of a_d for 0 <= n <= top (c_0 unused).
std::vector<double> divisor_sums(const Coefficients& a, u64 top);

// Budget 1 + (L^2 d(q) / q) |sum a_d / d| |sum a_d|, times the constant.
double variance_budget(const Coefficients& a, u64 q, u64 L, double constant);

struct S1S3Values {
  double s1 = 0.0;
  double s1_reference = 0.0;  // X L / log X
  double s1_ratio = 0.0;
  double s3_3X = 0.0;          // Y = 3X
  double s3_3X_ratio = 0.0;    // against Y / log X
  double s3_big = 0.0;         // Y = Y_big
  double s3_big_ratio = 0.0;
};

// S1 = X phi(q) sum over d of gamma_{d, L/q} (sum over m = 0 (d), (m, q) = 1
// of w_m / m)^2 with gamma in closed form; S3 sums (sum over d | n of w_d)^2
// over n <= Y coprime to q.
S1S3Values s1_s3_evaluators(const WeightSystem& system, u64 q, u64 L, double X,
                            double Y_big = 1e6);

// sum over n <= Y, (n, q) = 1 of (sum over d | n of w_d)^2, exact integer.
i64 s3_square_sum(const WeightSystem& system, u64 q, u64 Y);

struct DeltaTuple {
  i64 l1 = 1;
  i64 l2 = 1;
  u64 m1 = 1;
  u64 n1 = 1;
  u64 tn1 = 1;
  u64 n2 = 1;
  u64 tn2 = 1;
  u64 m2 = 1;
  u64 d = 1;
};

struct DeltaResult {
  i64 Delta = 0;
  mpq_class lhs;  // in [0, 1)
  mpq_class rhs;  // in [0, 1)
  bool ok = false;
  i64 u = 0;      // l1 tn1 tn2
  i64 h = 0;      // l1 tn1 tn2 - l2 n1 n2
  u64 g1 = 1;     // (n1, tn2)
  u64 g2 = 1;     // (tn1, n2)
};

// Throws DomainError naming the first coprimality condition that fails.
DeltaResult delta_identity_check(const DeltaTuple& t);

bool delta_admissible(const DeltaTuple& t) noexcept;

struct DeltaSweep {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::size_t attempts = 0;          // draws including rejected ones
  std::size_t unit_gcd_checked = 0;  // tuples with (n1', ~n2') = (~n1', n2') = 1
  std::size_t unit_gcd_failures = 0;
  std::size_t degenerate_checked = 0;
  std::size_t degenerate_failures = 0;
  std::vector<DeltaTuple> first_failures;  // at most 5
};

// count admissible tuples drawn with entries in [1, entry_max] and
// l1, l2 in [-entry_max, entry_max] minus {0}, plus the symmetric tuples
// l1 = l2, n1' = ~n1', n2' = ~n2' for every admissible small triple.
DeltaSweep delta_sweep(std::uint64_t seed, std::size_t count, u64 entry_max);

struct ProbeConfig {
  u64 M1 = 8, N1 = 8, M2 = 8, N2 = 8;  // variables range over [M, 2M)
  u64 e = 1, e2 = 1;
  i64 a = 1;
  u64 q = 5;
  u64 delta = 1;
  double X = 1e4;
};

using ProbeCoefficient = std::function<double(u64)>;

struct ProbeResult {
  double quadruple_sum = 0.0;
  double paper_bound = 0.0;
  double ratio = 0.0;
  std::size_t tuples = 0;
  std::size_t incompatible = 0;
};

// Bracket for one tuple: sum over r = -aq (e m1 n1), r = 0 (e' m2 n2),
// (r, q) = 1 of w(r / X), minus (1 / [e m1 n1, e' m2 n2]) (phi(q)/q) w_hat(0) X.
double bracket_value(const ProbeConfig& c, u64 m1, u64 n1, u64 m2, u64 n2, const SmoothWindow& w,
                     bool* compatible = nullptr);

ProbeResult prop52_bracket_probe(const ProbeConfig& c, const SmoothWindow& w,
                                 const ProbeCoefficient& alpha1 = nullptr,
                                 const ProbeCoefficient& beta1 = nullptr,
                                 const ProbeCoefficient& alpha2 = nullptr,
                                 const ProbeCoefficient& beta2 = nullptr);

}  // namespace sievelab
