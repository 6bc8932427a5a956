#include "sievelab/exp_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "sievelab/error.hpp"
#include "sievelab/numeric.hpp"

namespace sievelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void fill_phases(u64 c, std::vector<double>& cs, std::vector<double>& sn) {
  cs.resize(c);
  sn.resize(c);
  for (u64 r = 0; r < c; ++r) {
    const double t = kTwoPi * static_cast<double>(r) / static_cast<double>(c);
    cs[r] = std::cos(t);
    sn[r] = std::sin(t);
  }
}

}  // namespace

KloostermanEvaluator::KloostermanEvaluator(u64 c) : c_(c) {
  if (c == 0) throw DomainError("Kloosterman modulus must be positive");
  for (u64 x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    units_.push_back(x);
    inverses_.push_back(mod_inverse(static_cast<i64>(x), c));
  }
  fill_phases(c, cos_, sin_);
}

std::complex<double> KloostermanEvaluator::operator()(i64 a, i64 b) const {
  const u64 ar = reduce_mod(a, c_);
  const u64 br = reduce_mod(b, c_);
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const u64 r = (mul_mod(ar, units_[i], c_) + mul_mod(br, inverses_[i], c_)) % c_;
    re += cos_[r];
    im += sin_[r];
  }
  return {re, im};
}

std::complex<double> kloosterman_complete(i64 a, i64 b, u64 c) {
  return KloostermanEvaluator(c)(a, b);
}

WeilCheck weil_bound_check(u64 p, i64 a, i64 b) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  if (reduce_mod(a, p) == 0 || reduce_mod(b, p) == 0) {
    throw DomainError("Weil bound needs p not dividing ab");
  }
  WeilCheck w;
  w.p = p;
  w.a = a;
  w.b = b;
  w.abs_s = std::abs(kloosterman_complete(a, b, p));
  w.bound = 2.0 * std::sqrt(static_cast<double>(p));
  w.ok = w.abs_s <= w.bound;
  return w;
}

std::vector<WeilPrimeSummary> weil_sweep(u64 p_max) {
  std::vector<WeilPrimeSummary> out;
  std::vector<double> cs, sn;
  std::vector<std::uint32_t> inv, cur;
  for (u64 p : primes_up_to(p_max)) {
    fill_phases(p, cs, sn);
    inv.assign(p, 0);
    for (u64 x = 1; x < p; ++x) inv[x] = static_cast<std::uint32_t>(mod_inverse(static_cast<i64>(x), p));
    const double bound = 2.0 * std::sqrt(static_cast<double>(p));
    WeilPrimeSummary s;
    s.p = p;
    s.worst.p = p;
    s.worst.bound = bound;
    cur.assign(p, 0);
    const auto pp = static_cast<std::uint32_t>(p);
    for (u64 b = 1; b < p; ++b) {
      for (u64 x = 1; x < p; ++x) cur[x] = static_cast<std::uint32_t>(b * inv[x] % p);
      // cur[x] = a x + b xbar (mod p), advanced one step in a at a time.
      for (u64 a = 1; a < p; ++a) {
        double re = 0.0;
        double im = 0.0;
        for (std::uint32_t x = 1; x < pp; ++x) {
          std::uint32_t r = cur[x] + x;
          if (r >= pp) r -= pp;
          cur[x] = r;
          re += cs[r];
          im += sn[r];
        }
        const double abs_s = std::hypot(re, im);
        ++s.pairs;
        if (!(abs_s <= bound)) ++s.failures;
        s.max_abs_imag = std::max(s.max_abs_imag, std::abs(im));
        if (abs_s > s.worst.abs_s) {
          s.worst.a = static_cast<i64>(a);
          s.worst.b = static_cast<i64>(b);
          s.worst.abs_s = abs_s;
        }
      }
    }
    s.worst.ok = s.failures == 0;
    out.push_back(s);
  }
  return out;
}

void write_weil_csv(std::ostream& out, const std::vector<WeilPrimeSummary>& rows) {
  out << "p,a,b,abs_s,bound,ratio,pairs,failures\n";
  for (const auto& r : rows) {
    out << r.p << ',' << r.worst.a << ',' << r.worst.b << ',' << r.worst.abs_s << ','
        << r.worst.bound << ',' << r.worst.ratio() << ',' << r.pairs << ',' << r.failures << '\n';
  }
}

IncompleteKloosterman kloosterman_incomplete(i64 a, u64 q, u64 d, double X) {
  if (q == 0 || d == 0) throw DomainError("q and d must be positive");
  IncompleteKloosterman out;
  const u64 qd = q * d;
  const u64 ar = reduce_mod(a, q);
  std::vector<double> cs, sn;
  fill_phases(q, cs, sn);
  const auto top = X < 1.0 ? u64{0} : static_cast<u64>(std::floor(X));
  double re = 0.0;
  double im = 0.0;
  for (u64 n = 1; n <= top; ++n) {
    if (std::gcd(n, qd) != 1) continue;
    const u64 r = q == 1 ? 0 : mul_mod(ar, mod_inverse(static_cast<i64>(n % q), q), q);
    re += cs[r];
    im += sn[r];
  }
  out.sum = {re, im};
  const double g = static_cast<double>(std::gcd(ar == 0 ? q : ar, q));
  const double qq = static_cast<double>(q);
  out.bound_ratio = std::abs(out.sum) / (std::sqrt(g) * std::sqrt(qq) * (1.0 + X / qq));
  return out;
}

std::vector<IncompleteSurveyRow> kloosterman_survey(const std::vector<u64>& moduli,
                                                    const std::vector<u64>& ds,
                                                    const std::vector<double>& lengths,
                                                    double survey_constant) {
  std::vector<IncompleteSurveyRow> rows;
  for (u64 q : moduli) {
    for (u64 d : ds) {
      for (double X : lengths) {
        for (i64 a : {i64{1}, static_cast<i64>(q / 2 + 1)}) {
          IncompleteSurveyRow r{q, d, a, X, kloosterman_incomplete(a, q, d, X).bound_ratio, false};
          r.flagged = r.ratio > survey_constant;
          rows.push_back(r);
        }
      }
    }
  }
  return rows;
}

void write_survey_csv(std::ostream& out, const std::vector<IncompleteSurveyRow>& rows) {
  out << "q,d,a,X,ratio,flagged\n";
  for (const auto& r : rows) {
    out << r.q << ',' << r.d << ',' << r.a << ',' << r.X << ',' << r.ratio << ','
        << (r.flagged ? 1 : 0) << '\n';
  }
}

GcdSumCheck gcd_sum_check(u64 q, u64 X) {
  if (q == 0 || X == 0) throw DomainError("gcd_sum_check needs q, X >= 1");
  GcdSumCheck out;
  for (u64 n = 1; n <= X; ++n) out.sum += std::gcd(q, n);
  out.bound = multiplicative(factorize_trial(q)).tau * X;
  out.ok = out.sum <= out.bound;
  return out;
}

CoprimeCountCheck coprime_count_check(u64 q, u64 X) {
  if (q == 0 || X == 0) throw DomainError("coprime_count_check needs q, X >= 1");
  CoprimeCountCheck out;
  for (u64 n = 1; n <= X; ++n) out.count += std::gcd(q, n) == 1 ? 1 : 0;
  const auto mv = multiplicative(factorize_trial(q));
  const mpq_class main(mpz_class(static_cast<unsigned long>(mv.phi)) *
                           static_cast<unsigned long>(X),
                       mpz_class(static_cast<unsigned long>(q)));
  out.main = main.get_d();
  out.error = abs(mpq_class(static_cast<unsigned long>(out.count)) - main);
  out.error.canonicalize();
  out.divisor_count = mv.tau;
  out.ok = out.error <= mpq_class(static_cast<unsigned long>(mv.tau));
  return out;
}

LemmaSweep lemma_sweep(u64 q_max, u64 X_max) {
  LemmaSweep out;
  for (u64 q = 1; q <= q_max; ++q) {
    const auto mv = multiplicative(factorize_trial(q));
    u64 gsum = 0;
    u64 count = 0;
    for (u64 X = 1; X <= X_max; ++X) {
      const u64 g = std::gcd(q, X);
      gsum += g;
      count += g == 1 ? 1 : 0;
      ++out.pairs;
      if (gsum > mv.tau * X) ++out.gcd_failures;
      // |count - phi X / q| <= tau, cleared of the denominator
      const i64 diff = static_cast<i64>(count * q) - static_cast<i64>(mv.phi * X);
      if (static_cast<u64>(diff < 0 ? -diff : diff) > mv.tau * q) ++out.coprime_failures;
    }
  }
  return out;
}

u64 default_gamma_truncation(u64 d) {
  const u64 base = 1'000'000;
  if (d > 3'000'000) throw RangeError("gamma truncation d^2 * 10^6 overflows");
  return std::max(base, d * d * base);
}

GammaCoefficient gamma_coefficient(u64 d, double Lambda, u64 M) {
  if (d == 0) throw DomainError("gamma_coefficient needs d >= 1");
  if (M == 0) M = default_gamma_truncation(d);
  GammaCoefficient out;
  out.d = d;
  out.Lambda = Lambda;
  out.M = M;
  const double pi = std::numbers::pi;
  out.tail_bound = static_cast<double>(d) * static_cast<double>(d) / (pi * pi * static_cast<double>(M));

  // Only Lambda mod 1 matters for sin^2.
  const long double lam = Lambda - std::floor(Lambda);
  std::vector<char> coprime(d, 0);
  for (u64 r = 0; r < d; ++r) coprime[r] = std::gcd(r, d) == 1 ? 1 : 0;

  // sin(pi m lam) by complex rotation, reseeded from the exact angle every block.
  constexpr u64 kBlock = 512;
  const long double step_c = std::cos(std::numbers::pi_v<long double> * lam);
  const long double step_s = std::sin(std::numbers::pi_v<long double> * lam);
  long double c = 1.0L;
  long double s = 0.0L;
  long double total = 0.0L;
  u64 r = 0;
  for (u64 m = 1; m <= M; ++m) {
    if (m % kBlock == 1) {
      const long double turns = std::fmod(static_cast<long double>(m) * lam, 2.0L);
      c = std::cos(std::numbers::pi_v<long double> * turns);
      s = std::sin(std::numbers::pi_v<long double> * turns);
    } else {
      const long double nc = c * step_c - s * step_s;
      s = s * step_c + c * step_s;
      c = nc;
    }
    if (++r == d) r = 0;
    if (!coprime[r]) continue;
    const long double md = static_cast<long double>(m);
    total += s * s / (md * md);
  }
  const long double scale = static_cast<long double>(d) / std::numbers::pi_v<long double>;
  out.value = static_cast<double>(scale * scale * total);
  return out;
}

mpq_class gamma_coefficient_exact(u64 d, const mpq_class& Lambda) {
  if (d == 0) throw DomainError("gamma_coefficient_exact needs d >= 1");
  const auto fd = factorize_trial(d);
  mpq_class total = 0;
  for (u64 e : fd.squarefree_divisors()) {
    const int mu = multiplicative(factorize_trial(e)).mu;
    const mpq_class t = frac(Lambda * static_cast<unsigned long>(e));
    const mpq_class de(static_cast<unsigned long>(d / e));
    total += mu * de * de * t * (1 - t) / 2;
  }
  total.canonicalize();
  return total;
}

}  // namespace sievelab
