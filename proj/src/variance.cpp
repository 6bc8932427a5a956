#include "sievelab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "sievelab/error.hpp"
#include "sievelab/exp_sums.hpp"
#include "sievelab/numeric.hpp"

namespace sievelab {

namespace {

using i128 = __int128;

u64 phi_of(u64 q) { return multiplicative(factorize_trial(q)).phi; }

// Count of integers n in (lo, hi] with n = r (mod m), lo, hi integers.
i64 count_in_class(i64 lo, i64 hi, u64 r, u64 m) {
  auto fl = [m](i64 v, u64 res) {
    const i128 t = static_cast<i128>(v) - static_cast<i128>(res);
    const i128 mm = static_cast<i128>(m);
    i128 qt = t / mm;
    if (t % mm != 0 && t < 0) --qt;
    return static_cast<i64>(qt);
  };
  return fl(hi, r) - fl(lo, r);
}

// Solution of n = a (q), n = 0 (d) modulo q d for coprime q, d.
u64 crt_residue(u64 a, u64 q, u64 d) {
  if (q == 1) return 0;
  // n = d t with d t = a (q).
  const u64 t = mul_mod(a % q, mod_inverse(static_cast<i64>(d % q), q), q);
  return d * t;
}

void require_coprime(u64 x, u64 y, const char* nx, const char* ny) {
  if (std::gcd(x, y) != 1) {
    throw DomainError(std::string("coprimality (") + nx + ", " + ny + ") = 1 fails: gcd = " +
                      std::to_string(std::gcd(x, y)));
  }
}

mpq_class frac_of(i128 num, u64 den) {
  // num / den reduced to [0, 1)
  const i128 d = static_cast<i128>(den);
  i128 r = num % d;
  if (r < 0) r += d;
  mpq_class out(mpz_class(static_cast<long>(r)), mpz_class(static_cast<unsigned long>(den)));
  out.canonicalize();
  return out;
}

}  // namespace

u64 progression_count(double x, u64 L, u64 q, u64 a, u64 d) {
  if (std::gcd(d, q) != 1) throw DomainError("progression_count needs (d, q) = 1");
  const auto hi = static_cast<i64>(std::floor(x));
  const i64 lo = hi - static_cast<i64>(L);
  const u64 m = q * d;
  return static_cast<u64>(count_in_class(lo, hi, crt_residue(a, q, d), m));
}

mpq_class remainder_E(double x, u64 a, const WeightSystem& alpha_minus, const WeightSystem& beta,
                      const SieveParams& params) {
  if (!(alpha_minus.params() == params) || !(beta.params() == params)) {
    throw ConsistencyError("remainder_E systems built from different parameters");
  }
  const u64 q = params.q;
  if (std::gcd(a % q, q) != 1 && q > 1) throw DomainError("remainder_E needs (a, q) = 1");
  std::map<u64, i64> joint;
  for (const auto& e : alpha_minus.entries()) joint[e.d] += e.value;
  for (const auto& e : beta.entries()) joint[e.d] -= e.value;
  mpq_class total = 0;
  for (const auto& [d, w] : joint) {
    if (w == 0 || std::gcd(d, q) != 1) continue;
    const auto A = static_cast<long>(progression_count(x, params.L, q, a, d));
    total += w * (mpq_class(A) - mpq_class(static_cast<unsigned long>(params.L),
                                           static_cast<unsigned long>(q * d)));
  }
  total.canonicalize();
  return total;
}

std::vector<double> divisor_sums(const Coefficients& a, u64 top) {
  std::vector<double> c(top + 1, 0.0);
  for (const auto& [d, v] : a) {
    if (d == 0) throw DomainError("coefficient index must be positive");
    for (u64 n = d; n <= top; n += d) c[n] += v;
  }
  return c;
}

double variance_budget(const Coefficients& a, u64 q, u64 L, double constant) {
  double s_over_d = 0.0;
  double s = 0.0;
  for (const auto& [d, v] : a) {
    s_over_d += v / static_cast<double>(d);
    s += v;
  }
  const double tau = static_cast<double>(multiplicative(factorize_trial(q)).tau);
  const double Ld = static_cast<double>(L);
  return constant * (1.0 + Ld * Ld * tau / static_cast<double>(q) * std::abs(s_over_d) * std::abs(s));
}

std::string VarianceReport::to_json() const {
  nlohmann::json j;
  j["lhs"] = lhs;
  j["s1"] = s1;
  j["s2"] = s2;
  j["s3"] = s3;
  j["residual"] = residual;
  j["error_budget"] = error_budget;
  j["flagged"] = flagged;
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [d, v] : coefficients) coeffs[std::to_string(d)] = v;
  j["coefficients"] = coeffs;
  j["q"] = q;
  j["L"] = L;
  j["X"] = X;
  j["Y_big"] = Y_big;
  j["tail_cutoff_substitution"] = "X^10 -> Y_big";
  j["budget_constant"] = budget_constant;
  j["window"] = window;
  j["window_cells"] = window_cells;
  j["seed"] = seed;
  return j.dump();
}

VarianceReport variance_decompose(const Coefficients& a, u64 q, u64 L, double X,
                                const SmoothWindow& g, const DecompositionOptions& options) {
  if (q == 0 || L == 0) throw DomainError("q and L must be positive");
  if (!(X >= 4.0)) throw DomainError("X must be at least 4");
  if (static_cast<double>(L) > X / 3.0) throw DomainError("need L <= X / 3");
  Coefficients coeffs;
  for (const auto& [d, v] : a) {
    if (d == 0) throw DomainError("coefficient index must be positive");
    if (std::gcd(d, q) != 1) {
      throw DomainError("coefficient at d = " + std::to_string(d) + " not coprime to q");
    }
    if (static_cast<double>(d) > std::pow(X, 1.0 - options.delta)) {
      throw DomainError("coefficient support exceeds X^(1 - delta)");
    }
    if (v != 0.0) coeffs[d] = v;
  }

  VarianceReport r;
  r.coefficients = coeffs;
  r.q = q;
  r.L = L;
  r.X = X;
  r.Y_big = options.Y_big;
  r.budget_constant = options.budget_constant;
  r.window = g.name();
  r.window_cells = g.cells();
  r.error_budget = variance_budget(coeffs, q, L, options.budget_constant);
  if (coeffs.empty()) return r;

  const auto Lq = static_cast<i64>(L);
  const i64 j_lo = static_cast<i64>(std::floor(X * SmoothWindow::kSupportLo)) - 1;
  const i64 j_hi = static_cast<i64>(std::ceil(X * SmoothWindow::kSupportHi)) + 1;
  const auto Y = static_cast<u64>(std::floor(options.Y_big));
  const u64 top = std::max<u64>(static_cast<u64>(j_hi) + L + 2, Y);
  const auto c = divisor_sums(coeffs, top);
  auto cn = [&](i64 n) { return n >= 1 && static_cast<u64>(n) <= top ? c[n] : 0.0; };
  auto reduced = [q](i64 n) { return std::gcd(static_cast<u64>(n), q) == 1; };
  auto piece = [&](double u, double v) { return g.integral_scaled(u, v, X); };

  double sum_a_over_d = 0.0;
  for (const auto& [d, v] : coeffs) sum_a_over_d += v / static_cast<double>(d);
  const double mu = static_cast<double>(L) / static_cast<double>(q) * sum_a_over_d;
  const auto phi = static_cast<double>(phi_of(q));
  const double ghat = g.g_hat_0();

  // Direct left-hand side: on [j, j + 1) the window holds j - L + 1 .. j.
  {
    std::vector<double> N(q, 0.0);
    std::vector<char> is_reduced(q, 0);
    for (u64 res = 0; res < q; ++res) is_reduced[res] = std::gcd(res, q) == 1 ? 1 : 0;
    for (i64 n = j_lo - Lq + 1; n <= j_lo; ++n) {
      if (n >= 1) N[static_cast<u64>(n) % q] += cn(n);
    }
    CompensatedSum lhs;
    for (i64 j = j_lo; j <= j_hi; ++j) {
      double sq = 0.0;
      for (u64 res = 0; res < q; ++res) {
        if (is_reduced[res]) sq += (N[res] - mu) * (N[res] - mu);
      }
      const double w = piece(static_cast<double>(j), static_cast<double>(j + 1));
      if (w != 0.0) lhs += sq * w;
      const i64 in = j + 1;
      const i64 out = j + 1 - Lq;
      if (in >= 1) N[static_cast<u64>(in) % q] += cn(in);
      if (out >= 1) N[static_cast<u64>(out) % q] -= cn(out);
    }
    r.lhs = lhs.value();
  }

  // S1 with exact gamma coefficients and the squared inner sum.
  {
    std::map<u64, double> inner;
    for (const auto& [m, v] : coeffs) {
      const auto fm = factorize_trial(m);
      // every divisor of m, not only squarefree ones
      std::vector<u64> divs{1};
      for (const auto& [p, e] : fm.factors()) {
        const std::size_t k = divs.size();
        u64 pk = 1;
        for (int i = 1; i <= e; ++i) {
          pk *= p;
          for (std::size_t t = 0; t < k; ++t) divs.push_back(divs[t] * pk);
        }
      }
      for (u64 d : divs) inner[d] += v / static_cast<double>(m);
    }
    CompensatedSum s1;
    for (const auto& [d, s] : inner) {
      const mpq_class Lambda(static_cast<unsigned long>(L), static_cast<unsigned long>(q * d));
      s1 += gamma_coefficient_exact(d, Lambda).get_d() * s * s;
    }
    r.s1 = 2.0 * ghat * X * phi * s1.value();
  }

  // S2: off-diagonal pairs n1 = n2 + k q, grouped by n2.
  {
    CompensatedSum s2;
    const i64 K = static_cast<i64>(L / q);
    const auto qi = static_cast<i64>(q);
    for (i64 k = -K; k <= K; ++k) {
      if (k == 0) continue;
      const i64 lo = std::max<i64>(0, k * qi);
      const i64 hi = Lq + std::min<i64>(0, k * qi);
      if (hi <= lo) continue;
      CompensatedSum pairs;
      const i64 n_lo = std::max<i64>(1, j_lo - hi);
      const i64 n_hi = j_hi;
      for (i64 n2 = n_lo; n2 <= n_hi; ++n2) {
        const double c2 = cn(n2);
        if (c2 == 0.0 || !reduced(n2)) continue;
        const double c1 = cn(n2 + k * qi);
        if (c1 == 0.0) continue;
        pairs += c1 * c2 * piece(static_cast<double>(n2 + lo), static_cast<double>(n2 + hi));
      }
      double density = 0.0;
      for (const auto& [d1, v1] : coeffs) {
        for (const auto& [d2, v2] : coeffs) {
          const u64 gd = std::gcd(d1, d2);
          if (static_cast<u64>(std::abs(k)) % gd != 0) continue;
          density += v1 * v2 / static_cast<double>(d1 / gd * d2);
        }
      }
      s2 += pairs.value() - static_cast<double>(hi - lo) * phi / static_cast<double>(q) * ghat * X *
                                density;
    }
    r.s2 = s2.value();
  }

  // S3: diagonal minus its average over n <= Y_big.
  {
    CompensatedSum diag;
    for (i64 n = std::max<i64>(1, j_lo - Lq); n <= j_hi; ++n) {
      const double cv = cn(n);
      if (cv == 0.0 || !reduced(n)) continue;
      diag += cv * cv * piece(static_cast<double>(n), static_cast<double>(n + Lq));
    }
    CompensatedSum avg;
    for (u64 n = 1; n <= Y; ++n) {
      if (c[n] != 0.0 && std::gcd(n, q) == 1) avg += c[n] * c[n];
    }
    r.s3 = diag.value() - ghat * static_cast<double>(L) * X / options.Y_big * avg.value();
  }

  r.residual = r.lhs - r.s1 - r.s2 - r.s3;
  r.flagged = !(std::abs(r.residual) <= r.error_budget);
  return r;
}

i64 s3_square_sum(const WeightSystem& system, u64 q, u64 Y) {
  std::vector<i64> c(Y + 1, 0);
  for (const auto& e : system.entries()) {
    if (e.d > Y) break;
    for (u64 n = e.d; n <= Y; n += e.d) c[n] += e.value;
  }
  i64 total = 0;
  for (u64 n = 1; n <= Y; ++n) {
    if (c[n] != 0 && std::gcd(n, q) == 1) total += c[n] * c[n];
  }
  return total;
}

S1S3Values s1_s3_evaluators(const WeightSystem& system, u64 q, u64 L, double X, double Y_big) {
  if (q == 0 || L == 0 || !(X > 1.0)) throw DomainError("need q, L >= 1 and X > 1");
  S1S3Values out;
  std::map<u64, mpq_class> inner;
  for (const auto& e : system.entries()) {
    if (std::gcd(e.d, q) != 1) continue;
    const mpq_class term(e.value, static_cast<unsigned long>(e.d));
    for (u64 d : factorize_trial(e.d).squarefree_divisors()) inner[d] += term;
  }
  mpq_class s1 = 0;
  for (auto& [d, s] : inner) {
    const mpq_class Lambda(static_cast<unsigned long>(L), static_cast<unsigned long>(q * d));
    s1 += gamma_coefficient_exact(d, Lambda) * s * s;
  }
  const auto phi = static_cast<double>(phi_of(q));
  out.s1 = X * phi * s1.get_d();
  out.s1_reference = X * static_cast<double>(L) / std::log(X);
  out.s1_ratio = out.s1 / out.s1_reference;
  const auto y3 = static_cast<u64>(std::floor(3.0 * X));
  const auto yb = static_cast<u64>(std::floor(Y_big));
  out.s3_3X = static_cast<double>(s3_square_sum(system, q, y3));
  out.s3_3X_ratio = out.s3_3X / (3.0 * X / std::log(X));
  out.s3_big = static_cast<double>(s3_square_sum(system, q, yb));
  out.s3_big_ratio = out.s3_big / (Y_big / std::log(X));
  return out;
}

DeltaResult delta_identity_check(const DeltaTuple& t) {
  for (u64 v : {t.m1, t.n1, t.tn1, t.n2, t.tn2, t.m2, t.d}) {
    if (v == 0) throw DomainError("delta tuple entries must be positive");
  }
  if (t.l1 == 0 || t.l2 == 0) throw DomainError("l1 and l2 must be nonzero");
  require_coprime(t.m1 * t.n1, t.n2, "m1' n1'", "n2'");
  require_coprime(t.m1 * t.tn1, t.tn2, "m1' ~n1'", "~n2'");
  require_coprime(t.d * t.m2 * t.n2, t.m1 * t.n1, "d m2' n2'", "m1' n1'");
  require_coprime(t.d * t.m2 * t.tn2, t.m1 * t.tn1, "d m2' ~n2'", "m1' ~n1'");
  DeltaResult r;
  r.g1 = std::gcd(t.n1, t.tn2);
  r.g2 = std::gcd(t.tn1, t.n2);
  const u64 den = t.m1 * (t.n1 / r.g1) * (t.tn1 / r.g2);
  require_coprime(t.d * t.m2 * t.n2 * t.tn2, den, "d m2' n2' ~n2'", "m1' (n1'/g1)(~n1'/g2)");

  const auto l1 = static_cast<i128>(t.l1);
  const auto l2 = static_cast<i128>(t.l2);
  r.Delta = static_cast<i64>(l1 * static_cast<i128>(t.tn2 / r.g1) * static_cast<i128>(t.tn1 / r.g2) -
                             l2 * static_cast<i128>(t.n1 / r.g1) * static_cast<i128>(t.n2 / r.g2));
  r.u = static_cast<i64>(l1 * static_cast<i128>(t.tn1) * static_cast<i128>(t.tn2));
  r.h = static_cast<i64>(l1 * static_cast<i128>(t.tn1 * t.tn2) -
                         l2 * static_cast<i128>(t.n1 * t.n2));
  if (static_cast<i128>(r.h) !=
      static_cast<i128>(r.Delta) * static_cast<i128>(r.g1) * static_cast<i128>(r.g2)) {
    throw ConsistencyError("h != Delta (n1', ~n2')(~n1', n2')");
  }

  const u64 den1 = t.m1 * t.n1;
  const u64 den2 = t.m1 * t.tn1;
  const u64 inv1 = mod_inverse(static_cast<i64>(t.d * t.m2 * t.n2 % den1), den1);
  const u64 inv2 = mod_inverse(static_cast<i64>(t.d * t.m2 * t.tn2 % den2), den2);
  const mpq_class lhs = frac_of(l1 * inv1, den1) - frac_of(l2 * inv2, den2);
  r.lhs = frac(lhs);
  const u64 inv3 = mod_inverse(static_cast<i64>(t.d * t.m2 % den * t.n2 % den * t.tn2 % den), den);
  r.rhs = frac_of(static_cast<i128>(r.Delta) * inv3, den);
  r.ok = r.lhs == r.rhs;
  return r;
}

double bracket_value(const ProbeConfig& c, u64 m1, u64 n1, u64 m2, u64 n2, const SmoothWindow& w,
                     bool* compatible) {
  const i128 A = static_cast<i128>(c.e) * m1 * n1;
  const i128 B = static_cast<i128>(c.e2) * m2 * n2;
  const u64 g = std::gcd(static_cast<u64>(A), static_cast<u64>(B));
  const i128 lcm = A / g * B;
  if (lcm > (static_cast<i128>(1) << 62)) throw RangeError("CRT modulus overflows 62 bits");
  const auto M = static_cast<u64>(lcm);
  const auto phi = static_cast<double>(phi_of(c.q));
  const double main = phi / static_cast<double>(c.q) * w.g_hat_0() * c.X / static_cast<double>(M);
  const i128 target = -static_cast<i128>(c.a) * static_cast<i128>(c.q);
  i128 tm = target % static_cast<i128>(g);
  if (tm < 0) tm += g;
  if (tm != 0) {
    if (compatible) *compatible = false;
    return -main;
  }
  if (compatible) *compatible = true;
  // r = B t with (B/g) t = target/g (mod A/g).
  const auto Ag = static_cast<u64>(A / g);
  const auto Bg = static_cast<u64>(B / g);
  i128 tg = (target / g) % static_cast<i128>(Ag);
  if (tg < 0) tg += Ag;
  const u64 t0 = Ag == 1 ? 0 : mul_mod(static_cast<u64>(tg), mod_inverse(static_cast<i64>(Bg % Ag), Ag), Ag);
  const u64 r0 = static_cast<u64>((B * t0) % lcm);
  const double lo = c.X * SmoothWindow::kSupportLo;
  const double hi = c.X * SmoothWindow::kSupportHi;
  u64 r = r0;
  if (static_cast<double>(r) < lo) {
    const auto skip = static_cast<u64>((lo - static_cast<double>(r)) / static_cast<double>(M));
    r += skip * M;
  }
  CompensatedSum s;
  for (; static_cast<double>(r) < hi; r += M) {
    if (r == 0 || std::gcd(r, c.q) != 1) continue;
    s += w(static_cast<double>(r) / c.X);
  }
  return s.value() - main;
}

ProbeResult prop52_bracket_probe(const ProbeConfig& c, const SmoothWindow& w,
                                 const ProbeCoefficient& alpha1, const ProbeCoefficient& beta1,
                                 const ProbeCoefficient& alpha2, const ProbeCoefficient& beta2) {
  if (c.a == 0) throw DomainError("probe needs a != 0");
  if (std::gcd(c.e * c.e2, c.q) != 1) throw DomainError("probe needs (e e', q) = 1");
  const u64 aq = static_cast<u64>(std::abs(c.a)) * c.q;
  if (c.delta == 0 || aq % c.delta != 0) throw DomainError("probe needs delta | a q");
  auto coef = [](const ProbeCoefficient& f, u64 v) { return f ? f(v) : 1.0; };
  ProbeResult out;
  CompensatedSum total;
  for (u64 m1 = c.M1; m1 < 2 * c.M1; ++m1) {
    for (u64 n1 = c.N1; n1 < 2 * c.N1; ++n1) {
      for (u64 m2 = c.M2; m2 < 2 * c.M2; ++m2) {
        for (u64 n2 = c.N2; n2 < 2 * c.N2; ++n2) {
          if (std::gcd(m1 * n1, m2 * n2) != c.delta) continue;
          if (std::gcd(m1 * n1 * m2 * n2, c.q) != 1) continue;
          const double weight = coef(alpha1, m1) * coef(beta1, n1) * coef(alpha2, m2) * coef(beta2, n2);
          if (weight == 0.0) continue;
          bool compatible = true;
          total += weight * bracket_value(c, m1, n1, m2, n2, w, &compatible);
          ++out.tuples;
          if (!compatible) ++out.incompatible;
        }
      }
    }
  }
  out.quadruple_sum = total.value();
  const double M1 = static_cast<double>(c.M1), N1 = static_cast<double>(c.N1);
  const double M2 = static_cast<double>(c.M2), N2 = static_cast<double>(c.N2);
  const double ee = static_cast<double>(c.e * c.e2);
  out.paper_bound = (std::pow(M1, 0.25) * std::sqrt(N1) / std::sqrt(M2) +
                     1.0 / (std::pow(M1, 0.25) * std::sqrt(N1)) +
                     std::sqrt(c.X) / (std::sqrt(M1) * std::sqrt(M2) * N1 * N2)) *
                    ee * ee * M1 * N1 * M2 * N2;
  out.ratio = std::abs(out.quadruple_sum) / out.paper_bound;
  return out;
}

bool delta_admissible(const DeltaTuple& t) noexcept {
  if (t.l1 == 0 || t.l2 == 0) return false;
  for (u64 v : {t.m1, t.n1, t.tn1, t.n2, t.tn2, t.m2, t.d}) {
    if (v == 0) return false;
  }
  if (std::gcd(t.m1 * t.n1, t.n2) != 1 || std::gcd(t.m1 * t.tn1, t.tn2) != 1) return false;
  if (std::gcd(t.d * t.m2 * t.n2, t.m1 * t.n1) != 1) return false;
  if (std::gcd(t.d * t.m2 * t.tn2, t.m1 * t.tn1) != 1) return false;
  const u64 den = t.m1 * (t.n1 / std::gcd(t.n1, t.tn2)) * (t.tn1 / std::gcd(t.tn1, t.n2));
  return std::gcd(t.d * t.m2 * t.n2 * t.tn2, den) == 1;
}

DeltaSweep delta_sweep(std::uint64_t seed, std::size_t count, u64 entry_max) {
  if (entry_max == 0) throw DomainError("entry_max must be positive");
  DeltaSweep s;
  auto record = [&s](const DeltaTuple& t, bool degenerate) {
    const auto r = delta_identity_check(t);
    ++s.checked;
    const bool unit = r.g1 == 1 && r.g2 == 1;
    if (unit) ++s.unit_gcd_checked;
    if (degenerate) ++s.degenerate_checked;
    if (!r.ok) {
      ++s.failures;
      if (unit) ++s.unit_gcd_failures;
      if (degenerate) ++s.degenerate_failures;
      if (s.first_failures.size() < 5) s.first_failures.push_back(t);
    }
  };
  CounterRng rng(seed);
  const auto hi = static_cast<i64>(entry_max);
  std::size_t found = 0;
  while (found < count) {
    DeltaTuple t;
    t.l1 = rng.integer(1, hi) * (rng.integer(0, 1) == 0 ? 1 : -1);
    t.l2 = rng.integer(1, hi) * (rng.integer(0, 1) == 0 ? 1 : -1);
    t.m1 = static_cast<u64>(rng.integer(1, hi));
    t.n1 = static_cast<u64>(rng.integer(1, hi));
    t.tn1 = static_cast<u64>(rng.integer(1, hi));
    t.n2 = static_cast<u64>(rng.integer(1, hi));
    t.tn2 = static_cast<u64>(rng.integer(1, hi));
    t.m2 = static_cast<u64>(rng.integer(1, hi));
    t.d = static_cast<u64>(rng.integer(1, hi));
    ++s.attempts;
    if (!delta_admissible(t)) continue;
    ++found;
    record(t, false);
  }
  // Symmetric tuples: l1 = l2, n1' = ~n1', n2' = ~n2'.
  const u64 small = std::min<u64>(entry_max, 12);
  for (u64 l = 1; l <= small; l += 5) {
    for (u64 m1 = 1; m1 <= small; ++m1) {
      for (u64 n1 = 1; n1 <= small; ++n1) {
        for (u64 n2 = 1; n2 <= small; ++n2) {
          for (u64 m2 = 1; m2 <= small; m2 += 3) {
            const DeltaTuple t{static_cast<i64>(l), static_cast<i64>(l), m1, n1, n1, n2, n2, m2, 1};
            if (delta_admissible(t)) record(t, true);
          }
        }
      }
    }
  }
  return s;
}

}  // namespace sievelab
