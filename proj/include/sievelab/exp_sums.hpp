#pragma once

// Kloosterman sums (complete and incomplete), Weil-bound sweeps, the gcd-sum
// and coprime-count lemmas, and the Fourier coefficient gamma_{d, Lambda}.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include <gmpxx.h>

#include "sievelab/arith.hpp"

namespace sievelab {

// Precomputed inverses and unit-circle phases modulo c, reused across (a, b).
class KloostermanEvaluator {
 public:
  explicit KloostermanEvaluator(u64 c);

  u64 modulus() const noexcept { return c_; }
  // sum over x mod c, (x, c) = 1 of e((a x + b xbar) / c).
  std::complex<double> operator()(i64 a, i64 b) const;

 private:
  u64 c_;
  std::vector<u64> units_;
  std::vector<u64> inverses_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

std::complex<double> kloosterman_complete(i64 a, i64 b, u64 c);

struct WeilCheck {
  u64 p = 0;
  i64 a = 0;
  i64 b = 0;
  double abs_s = 0.0;
  double bound = 0.0;
  bool ok = false;
  double ratio() const noexcept { return abs_s / bound; }
};

// Throws DomainError when p is not prime or p divides ab.
WeilCheck weil_bound_check(u64 p, i64 a, i64 b);

struct WeilPrimeSummary {
  u64 p = 0;
  std::size_t pairs = 0;
  std::size_t failures = 0;
  WeilCheck worst;            // largest |S| / 2 sqrt(p)
  double max_abs_imag = 0.0;
};

// Exhaustive sweep over every prime p <= p_max and 1 <= a, b < p.
std::vector<WeilPrimeSummary> weil_sweep(u64 p_max);

void write_weil_csv(std::ostream& out, const std::vector<WeilPrimeSummary>& rows);

struct IncompleteKloosterman {
  std::complex<double> sum;
  double bound_ratio = 0.0;  // |sum| / ((a, q)^(1/2) q^(1/2) (1 + X / q))
};

// sum over n <= X, (n, q d) = 1 of e(a nbar / q).
IncompleteKloosterman kloosterman_incomplete(i64 a, u64 q, u64 d, double X);

struct IncompleteSurveyRow {
  u64 q = 0;
  u64 d = 0;
  i64 a = 0;
  double X = 0.0;
  double ratio = 0.0;
  bool flagged = false;  // ratio above the survey constant
};

inline constexpr double kKloostermanSurveyConstant = 100.0;

std::vector<IncompleteSurveyRow> kloosterman_survey(const std::vector<u64>& moduli,
                                                    const std::vector<u64>& ds,
                                                    const std::vector<double>& lengths,
                                                    double survey_constant =
                                                        kKloostermanSurveyConstant);
void write_survey_csv(std::ostream& out, const std::vector<IncompleteSurveyRow>& rows);

struct GcdSumCheck {
  u64 sum = 0;
  u64 bound = 0;  // d(q) * X
  bool ok = false;
};

GcdSumCheck gcd_sum_check(u64 q, u64 X);

struct CoprimeCountCheck {
  u64 count = 0;
  double main = 0.0;   // phi(q) X / q
  mpq_class error;     // |count - phi(q) X / q|, exact
  u64 divisor_count = 0;
  bool ok = false;
};

CoprimeCountCheck coprime_count_check(u64 q, u64 X);

struct LemmaSweep {
  u64 pairs = 0;
  u64 gcd_failures = 0;
  u64 coprime_failures = 0;
};

// Both checks above for every 1 <= q <= q_max and 1 <= X <= X_max, with the
// sums carried forward in X.
LemmaSweep lemma_sweep(u64 q_max, u64 X_max);

struct GammaCoefficient {
  u64 d = 1;
  double Lambda = 0.0;
  u64 M = 0;
  double value = 0.0;
  double tail_bound = 0.0;  // d^2 / (pi^2 M)
};

// max(10^6, d^2 * 10^6).
u64 default_gamma_truncation(u64 d);

// Partial sum over m <= M, (m, d) = 1 of (d / (pi m))^2 sin^2(pi m Lambda).
// M = 0 selects the default truncation.
GammaCoefficient gamma_coefficient(u64 d, double Lambda, u64 M = 0);

// Full series in closed form: sum over e | d of mu(e) (d/e)^2 {e L}(1 - {e L}) / 2.
mpq_class gamma_coefficient_exact(u64 d, const mpq_class& Lambda);

}  // namespace sievelab
