#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "oracles.hpp"
#include "sievelab/error.hpp"
#include "sievelab/exp_sums.hpp"
#include "sievelab/numeric.hpp"
#include "sievelab/smooth_window.hpp"
#include "sievelab/variance.hpp"

using namespace sievelab;

namespace {

const SmoothWindow& window() {
  static const SmoothWindow w;
  return w;
}

std::map<u64, int> as_map(const WeightSystem& w) {
  std::map<u64, int> m;
  for (const auto& e : w.entries()) m[e.d] = e.value;
  return m;
}

}  // namespace

TEST_CASE("smooth window") {
  const auto& g = window();
  for (double t = -1.0; t <= 3.5; t += 1e-3) {
    const double v = g(t);
    const double lo = (t >= 1.0 && t <= 2.0) ? 1.0 : 0.0;
    const double hi = (t >= 0.5 && t <= 3.0) ? 1.0 : 0.0;
    REQUIRE(v >= lo);
    REQUIRE(v <= hi);
  }
  const auto q = adaptive_simpson([&](double t) { return g(t); }, 0.5, 2.5, 1e-12);
  CHECK(g.g_hat_0() == doctest::Approx(q.value).epsilon(1e-9));
  CHECK(g.g_hat_0() == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(g.antiderivative(0.0) == 0.0);
  CHECK(g.antiderivative(3.0) == doctest::Approx(g.g_hat_0()));
  CHECK(g.integral_scaled(1000, 2000, 1000) == doctest::Approx(1000.0).epsilon(1e-9));
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("progression counts") {
  CHECK(progression_count(110, 10, 1, 0, 1) == 10);
  CHECK(progression_count(110.7, 10, 1, 0, 1) == 10);
  for (u64 q : {1, 3, 4, 7}) {
    for (u64 d : {1, 2, 5, 9}) {
      if (std::gcd(d, q) != 1) continue;
      for (u64 a = 0; a < q; ++a) {
        for (double x : {50.0, 97.5, 1000.0}) {
          u64 brute = 0;
          for (i64 n = static_cast<i64>(std::floor(x)); n > static_cast<i64>(std::floor(x)) - 30; --n) {
            if (n >= 0 && static_cast<u64>(n) % q == a && static_cast<u64>(n) % d == 0) ++brute;
          }
          CHECK(progression_count(x, 30, q, a, d) == brute);
        }
      }
    }
  }
  CHECK_THROWS_AS(progression_count(100, 10, 2, 1, 2), DomainError);
}

TEST_CASE("remainder E") {
  auto p = SieveParams::desk_preset();
  const WeightSystem one(WeightKind::alpha_minus, p, std::nullopt, {{1, 1}});
  const WeightSystem none(WeightKind::beta, p, std::nullopt, {});
  CHECK(remainder_E(1000, 1, one, none, p) == 0);
  CHECK(remainder_E(1234, 0, one, none, p) == 0);

  auto p2 = p;
  p2.q = 2;
  const WeightSystem even(WeightKind::alpha_minus, p2, std::nullopt, {{1, 1}, {2, -1}});
  const WeightSystem none2(WeightKind::beta, p2, std::nullopt, {});
  CHECK(remainder_E(1000, 1, even, none2, p2) == 0);

  const auto w = build_composed_weights(p);
  for (double x : {1'000'000.0, 1'234'567.5, 1'999'999.0}) {
    CHECK(remainder_E(x, 1, w.alpha_minus, w.beta, p) == oracle::remainder(x, 1, p));
  }
  auto p3 = p;
  p3.q = 3;
  p3.L = 50;
  const auto w3 = build_composed_weights(p3);
  CHECK(remainder_E(54321, 2, w3.alpha_minus, w3.beta, p3) == oracle::remainder(54321, 2, p3));
  CHECK_THROWS_AS(remainder_E(54321, 3, w3.alpha_minus, w3.beta, p3), DomainError);
  CHECK_THROWS_AS(remainder_E(54321, 1, w.alpha_minus, w.beta, p3), ConsistencyError);
}

TEST_CASE("variance decomposition") {
  const auto& g = window();
  const auto zero = variance_decompose({{1, 0.0}, {2, 0.0}}, 1, 20, 2000, g);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.s1 == 0.0);
  CHECK(zero.s2 == 0.0);
  CHECK(zero.s3 == 0.0);
  CHECK_FALSE(zero.flagged);

  const auto d1 = variance_decompose({{1, 1.0}}, 1, 20, 2000, g);
  CHECK(std::abs(d1.residual) <= d1.error_budget);
  CHECK(d1.residual == doctest::Approx(d1.lhs - d1.s1 - d1.s2 - d1.s3));
  CHECK(d1.error_budget == doctest::Approx(variance_budget({{1, 1.0}}, 1, 20, 10.0)));

  CounterRng rng(2024);
  int pass = 0;
  for (int i = 0; i < 12; ++i) {
    Coefficients a;
    for (u64 d = 1; d <= 10; ++d) {
      if (std::gcd(d, u64{3}) == 1) a[d] = rng.uniform(-1.0, 1.0);
    }
    const auto r = variance_decompose(a, 3, 30, 3000, g);
    pass += r.flagged ? 0 : 1;
    CHECK(r.q == 3);
    CHECK(r.coefficients == a);
  }
  CHECK(pass >= 11);

  CHECK_THROWS_AS(variance_decompose({{3, 1.0}}, 3, 30, 3000, g), DomainError);
  CHECK_THROWS_AS(variance_decompose({{1, 1.0}}, 1, 2000, 3000, g), DomainError);
  CHECK_THROWS_AS(variance_decompose({{2999, 1.0}}, 1, 30, 3000, g), DomainError);

  DecompositionOptions tight;
  tight.budget_constant = 1e-12;
  const auto flagged = variance_decompose({{1, 0.3}, {2, -0.8}, {3, 0.5}}, 1, 37, 2500, g, tight);
  CHECK(flagged.flagged);
  CHECK(flagged.to_json().find("\"flagged\":true") != std::string::npos);
}

TEST_CASE("divisor sums and budget") {
  const auto c = divisor_sums({{1, 1.0}, {2, 2.0}, {3, -1.0}}, 12);
  CHECK(c[1] == 1.0);
  CHECK(c[2] == 3.0);
  CHECK(c[3] == 0.0);
  CHECK(c[6] == 2.0);
  CHECK(c[7] == 1.0);
  CHECK(variance_budget({{1, 1.0}}, 1, 10, 1.0) == doctest::Approx(101.0));
}

TEST_CASE("S1 and S3 evaluators") {
  const auto p = SieveParams::desk_preset();
  const WeightSystem one(WeightKind::rho_plus, p, std::nullopt, {{1, 1}});
  for (u64 q : {1, 6, 35}) {
    CHECK(static_cast<u64>(s3_square_sum(one, q, 5000)) == coprime_count_check(q, 5000).count);
  }

  SieveParams big = p;
  big.w_level = 50;
  big.z = 100;
  big.D = 1e8;
  big.y = 1e4;
  big.E = std::pow(50.0, 6);
  const auto rp = enumerate_support(WeightKind::rho_plus, big);
  CHECK(s3_square_sum(rp, 1, 100'000) == oracle::s3_naive(as_map(rp), 1, 100'000));

  const auto lp = enumerate_support(WeightKind::lambda_plus, p);
  CHECK(s3_square_sum(lp, 1, 100'000) == oracle::s3_naive(as_map(lp), 1, 100'000));
  const auto w = build_composed_weights(p);
  CHECK(s3_square_sum(w.alpha_minus, 7, 20'000) == oracle::s3_naive(as_map(w.alpha_minus), 7, 20'000));

  const auto v = s1_s3_evaluators(lp, 1, 105, 1e4, 1e5);
  CHECK(v.s1 == 0.0);
  CHECK(v.s3_3X == static_cast<double>(oracle::s3_naive(as_map(lp), 1, 30'000)));

  const auto t = s1_s3_evaluators(one, 1, 5, 1e4, 1e5);
  CHECK(t.s1 == 0.0);
  const auto u = s1_s3_evaluators(one, 3, 7, 1e4, 1e5);
  const double L = 7.0 / 3.0, f = L - std::floor(L);
  CHECK(u.s1 == doctest::Approx(1e4 * 2.0 * f * (1.0 - f) / 2.0));
  CHECK(u.s1_reference == doctest::Approx(1e4 * 7.0 / std::log(1e4)));
}

TEST_CASE("Delta identity") {
  const auto sym = delta_identity_check({3, 3, 5, 4, 4, 7, 7, 11, 1});
  CHECK(sym.Delta == 0);
  CHECK(sym.lhs == 0);
  CHECK(sym.rhs == 0);
  CHECK(sym.ok);

  const auto r = delta_identity_check({1, 1, 5, 3, 2, 7, 11, 13, 1});
  CHECK(r.ok);
  CHECK(r.g1 == 1);
  CHECK(r.g2 == 1);
  CHECK(r.h == r.Delta);
  CHECK(r.u == 22);

  CHECK_THROWS_AS(delta_identity_check({1, 1, 5, 3, 2, 3, 11, 13, 1}), DomainError);
  CHECK_THROWS_AS(delta_identity_check({1, 1, 5, 3, 2, 7, 11, 5, 1}), DomainError);
  CHECK_THROWS_AS(delta_identity_check({0, 1, 5, 3, 2, 7, 11, 13, 1}), DomainError);
  CHECK_FALSE(delta_admissible({1, 1, 5, 3, 2, 3, 11, 13, 1}));
  CHECK(delta_admissible({1, 1, 5, 3, 2, 7, 11, 13, 1}));

  const auto s = delta_sweep(11, 500, 60);
  CHECK(s.checked >= 500);
  CHECK(s.unit_gcd_checked > 0);
  CHECK(s.unit_gcd_failures == 0);
  CHECK(s.degenerate_checked > 0);
  CHECK(s.degenerate_failures == 0);
  const auto again = delta_sweep(11, 500, 60);
  CHECK(again.failures == s.failures);
  CHECK(again.attempts == s.attempts);
  for (const auto& t : s.first_failures) {
    const auto fr = delta_identity_check(t);
    CHECK_FALSE(fr.ok);
    CHECK((fr.g1 != 1 || fr.g2 != 1));
  }
}

TEST_CASE("bracketed congruence probe") {
  const auto& w = window();
  ProbeConfig c;
  bool compatible = true;
  const double b = bracket_value(c, 2, 3, 1, 4, w, &compatible);
  CHECK_FALSE(compatible);
  const double main = (4.0 / 5.0) * w.g_hat_0() * c.X / 12.0;
  CHECK(b == doctest::Approx(-main));

  double brute = 0.0;
  for (u64 r = 1; r < 3 * 10'000; ++r) {
    if (r % 7 == (7 - 5 % 7) % 7 && r % 3 == 0 && r % 5 != 0) brute += w(r / c.X);
  }
  const double b2 = bracket_value(c, 1, 7, 1, 3, w, &compatible);
  CHECK(compatible);
  CHECK(b2 == doctest::Approx(brute - (4.0 / 5.0) * w.g_hat_0() * c.X / 21.0).epsilon(1e-9));

  const auto zero = prop52_bracket_probe(c, w, [](u64) { return 0.0; });
  CHECK(zero.quadruple_sum == 0.0);
  const auto probe = prop52_bracket_probe(c, w);
  CHECK(probe.tuples > 0);
  CHECK(probe.ratio <= 100.0);

  ProbeConfig huge = c;
  huge.e = 1ULL << 40;
  huge.e2 = (1ULL << 40) + 1;
  CHECK_THROWS_AS(bracket_value(huge, 9, 9, 9, 11, w), RangeError);
}
