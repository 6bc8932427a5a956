#include "sievelab/sieve_theory.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "sievelab/error.hpp"
#include "sievelab/numeric.hpp"

namespace sievelab {

namespace {

const double kTwoExpGamma = 2.0 * std::exp(kEulerGamma);

std::vector<u64> primes_in(double lo_exclusive, double hi_inclusive) {
  if (hi_inclusive > static_cast<double>(kPrimeTableLimit)) {
    throw RangeError("prime range upper end exceeds the prime table limit");
  }
  std::vector<u64> out;
  if (hi_inclusive < 2.0) return out;
  for (u64 p : primes_up_to(static_cast<u64>(std::floor(hi_inclusive)))) {
    if (static_cast<double>(p) > lo_exclusive) out.push_back(p);
  }
  return out;
}

mpq_class euler_factor_product(const std::vector<u64>& primes, u64 q) {
  mpz_class num = 1;
  mpz_class den = 1;
  for (u64 p : primes) {
    if (q % p == 0) continue;
    num *= static_cast<unsigned long>(p - 1);
    den *= static_cast<unsigned long>(p);
  }
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

std::vector<u64> squarefree_divisors_of(u64 n) { return factorize_trial(n).squarefree_divisors(); }

}  // namespace

double F_closed(double s) { return kTwoExpGamma / s; }

double f_closed(double s) { return s <= 2.0 ? 0.0 : kTwoExpGamma * std::log(s - 1.0) / s; }

SieveFunctionTable::SieveFunctionTable(double s_max, double step) : s_max_(s_max), step_(step) {
  if (!(step > 0.0) || !(s_max > 4.0)) throw DomainError("sieve table needs step > 0, s_max > 4");
  const auto n = static_cast<std::size_t>(std::llround((s_max - 2.0) / step)) + 1;
  const auto lag = static_cast<std::size_t>(std::llround(1.0 / step));
  F_.assign(n, 0.0);
  f_.assign(n, 0.0);
  // sF and sf at s = 2; the lagged integrands come from the closed forms
  // while s - 1 <= 2 and from the table afterwards.
  double sF = 2.0 * F_closed(2.0);
  double sf = 0.0;
  F_[0] = F_closed(2.0);
  f_[0] = 0.0;
  auto lagged = [&](std::size_t i, bool want_F) {
    const double s_back = 2.0 + static_cast<double>(i) * step - 1.0;
    if (i < lag) return want_F ? F_closed(s_back) : f_closed(s_back);
    return want_F ? F_[i - lag] : f_[i - lag];
  };
  for (std::size_t i = 1; i < n; ++i) {
    sF += 0.5 * step * (lagged(i - 1, false) + lagged(i, false));
    sf += 0.5 * step * (lagged(i - 1, true) + lagged(i, true));
    const double s = 2.0 + static_cast<double>(i) * step;
    F_[i] = sF / s;
    f_[i] = sf / s;
  }
}

double SieveFunctionTable::interpolate(const std::vector<double>& v, double s) const {
  const double pos = (s - 2.0) / step_;
  auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  const double t = pos - static_cast<double>(i);
  return v[i] + t * (v[i + 1] - v[i]);
}

SieveFunctionValues SieveFunctionTable::integrated(double s) const {
  if (s < 2.0 || s > s_max_) throw RangeError("integrated sieve values live on [2, s_max]");
  return {interpolate(F_, s), interpolate(f_, s)};
}

SieveFunctionValues SieveFunctionTable::at(double s) const {
  if (!(s > 0.0)) throw DomainError("linear sieve functions need s > 0");
  if (s > s_max_) return {1.0, 1.0};
  SieveFunctionValues out;
  out.F = s <= 3.0 ? F_closed(s) : interpolate(F_, s);
  out.f = s <= 4.0 ? f_closed(s) : interpolate(f_, s);
  return out;
}

SieveFunctionValues linear_sieve_F_f(double s) {
  static const SieveFunctionTable table;
  return table.at(s);
}

mpq_class v_product_exact(double lo, double hi, u64 q) {
  if (lo > hi) throw DomainError("v_product needs lo <= hi");
  return euler_factor_product(primes_in(lo, hi), q);
}

double v_product(double lo, double hi, u64 q) { return v_product_exact(lo, hi, q).get_d(); }

mpq_class v_below(double w, u64 q) {
  std::vector<u64> primes;
  for (u64 p : primes_in(1.0, std::ceil(w))) {
    if (static_cast<double>(p) < w) primes.push_back(p);
  }
  return euler_factor_product(primes, q);
}

MainTermSum evaluate_M(const WeightSystem& alpha_minus, const WeightSystem& beta, u64 q) {
  if (alpha_minus.kind() != WeightKind::alpha_minus || beta.kind() != WeightKind::beta) {
    throw ConsistencyError("evaluate_M needs alpha_minus and beta systems");
  }
  if (!(alpha_minus.params() == beta.params())) {
    throw ConsistencyError("alpha_minus and beta built from different parameters");
  }
  // Common denominator accumulation: sum w_d / d over a fixed order.
  MainTermSum out;
  mpq_class total = 0;
  auto add = [&](const WeightSystem& s, int sign) {
    for (const auto& e : s.entries()) {
      if (std::gcd(e.d, q) != 1) continue;
      total += mpq_class(sign * e.value, static_cast<unsigned long>(e.d));
      ++out.terms;
    }
  };
  add(alpha_minus, 1);
  add(beta, -1);
  total.canonicalize();
  out.value = total;
  out.value_real = total.get_d();
  out.V_z = v_below(alpha_minus.params().z, q).get_d();
  out.ratio = out.value_real / out.V_z;
  return out;
}

std::string_view to_string(LimitMode mode) noexcept {
  return mode == LimitMode::derivation ? "derivation" : "literal";
}

LimitMode parse_limit_mode(std::string_view name) {
  if (name == "derivation") return LimitMode::derivation;
  if (name == "literal") return LimitMode::literal;
  throw DomainError("unknown limit mode '" + std::string(name) + "'");
}

std::string MainTermReport::to_json() const {
  nlohmann::json j;
  j["kappa"] = kappa;
  j["limit_mode"] = std::string(to_string(limit_mode));
  j["lower_limit"] = lower_limit;
  j["upper_limit"] = upper_limit;
  j["integral"] = integral;
  j["value"] = value;
  j["error_bound"] = error_bound;
  j["panels"] = panels;
  j["paper_bound"] = paper_bound;
  j["meets_paper_bound"] = value >= paper_bound;
  return j.dump();
}

double main_term_integrand(double kappa, double alpha) {
  return (1.0 - 2.0 * kappa * alpha) / (4.0 * alpha * (1.0 - alpha));
}

MainTermReport main_term_constant(double kappa, double tolerance, LimitMode mode) {
  if (!(kappa > 0.5 && kappa < 0.75)) throw DomainError("kappa must lie in (1/2, 3/4)");
  if (!(tolerance > 0.0)) throw DomainError("quadrature tolerance must be positive");
  MainTermReport r;
  r.kappa = kappa;
  r.limit_mode = mode;
  r.upper_limit = mode == LimitMode::derivation ? 1.0 / (2.0 * kappa) : 2.0 * kappa;
  if (r.upper_limit >= 1.0) {
    throw DivergenceError("upper limit " + std::to_string(r.upper_limit) +
                          " reaches the pole of 1/(4 alpha (1 - alpha)) at alpha = 1 while the "
                          "numerator 1 - 2 kappa alpha is nonzero there; the integral diverges");
  }
  const auto q = adaptive_simpson([kappa](double a) { return main_term_integrand(kappa, a); },
                                  r.lower_limit, r.upper_limit, tolerance);
  const double e_gamma = std::exp(kEulerGamma);
  r.integral = q.value;
  r.panels = q.panels;
  r.value = 0.5 * e_gamma * std::log(3.0) - 2.0 * e_gamma * q.value;
  r.error_bound = 2.0 * e_gamma * q.error_bound;
  return r;
}

mpq_class fundamental_lemma_sum(const WeightSystem& rho, u64 q) {
  if (rho.kind() != WeightKind::rho_plus && rho.kind() != WeightKind::rho_minus) {
    throw ConsistencyError("fundamental_lemma_ratio needs a rho system");
  }
  mpq_class total = 0;
  for (const auto& e : rho.entries()) {
    if (std::gcd(e.d, q) == 1) total += mpq_class(e.value, static_cast<unsigned long>(e.d));
  }
  total.canonicalize();
  return total;
}

double fundamental_lemma_ratio(const WeightSystem& rho, u64 q) {
  const mpq_class ratio = fundamental_lemma_sum(rho, q) / v_below(rho.params().w_level, q);
  return ratio.get_d();
}

i64 theta_transform(const WeightSystem& lambda, const FactoredInteger& b) {
  if (!b.is_squarefree()) throw DomainError("theta_transform needs squarefree b");
  i64 total = 0;
  for (u64 d : b.squarefree_divisors()) total += lambda.value(d);
  return total;
}

S1Diagnostic s1_weight_diagnostic(const WeightSystem& system, u64 q, const SieveParams& params) {
  const auto kind = system.kind();
  if (kind != WeightKind::rho_plus && kind != WeightKind::rho_minus &&
      kind != WeightKind::alpha_minus && kind != WeightKind::beta) {
    throw ConsistencyError("s1_weight_diagnostic takes rho, alpha_minus or beta systems");
  }
  std::map<u64, mpq_class> inner;
  for (const auto& e : system.entries()) {
    if (std::gcd(e.d, q) != 1) continue;
    const mpq_class term(e.value, static_cast<unsigned long>(e.d));
    for (u64 d : squarefree_divisors_of(e.d)) inner[d] += term;
  }
  S1Diagnostic out;
  mpq_class total = 0;
  for (auto& [d, s] : inner) {
    s.canonicalize();
    total += static_cast<unsigned long>(d) * s * s;
  }
  total.canonicalize();
  out.value = total;
  out.value_real = total.get_d();
  out.divisors = inner.size();
  const auto phi = multiplicative(factorize_trial(q)).phi;
  out.reference = static_cast<double>(q) / static_cast<double>(phi) / std::log(params.X);
  out.ratio = out.value_real / out.reference;
  return out;
}

}  // namespace sievelab
