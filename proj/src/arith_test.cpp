#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "sievelab/arith.hpp"
#include "sievelab/error.hpp"
#include "sievelab/numeric.hpp"

using namespace sievelab;

TEST_CASE("factorize small values") {
  const SpfTable t(2000);
  const auto f = t.factorize(84);
  CHECK(f.factors().size() == 3);
  CHECK(f.factors()[0] == PrimePower{2, 2});
  CHECK(f.factors()[1] == PrimePower{3, 1});
  CHECK(f.factors()[2] == PrimePower{7, 1});
  CHECK(f.big_omega() == 4);
  CHECK(f.small_omega() == 3);

  const auto one = t.factorize(1);
  CHECK(one.is_one());
  CHECK(one.big_omega() == 0);
  CHECK(one.small_omega() == 0);

  const auto k = t.factorize(1024);
  REQUIRE(k.factors().size() == 1);
  CHECK(k.factors()[0] == PrimePower{2, 10});
  CHECK(k.big_omega() == 10);
  CHECK(k.small_omega() == 1);

  CHECK_THROWS_AS(t.factorize(2001), RangeError);
}

TEST_CASE("factorization recomposes and matches trial division") {
  const u64 limit = 1'000'000;
  const SpfTable t(limit, 1 << 12);
  for (u64 n = 1; n <= limit; ++n) {
    const auto f = t.factorize(n);
    u64 v = 1;
    for (const auto& pp : f.factors()) {
      for (int i = 0; i < pp.exponent; ++i) v *= pp.prime;
    }
    REQUIRE(v == n);
    REQUIRE(f.value() == n);
  }
  for (u64 n = 1; n <= 5000; ++n) {
    const auto f = t.factorize(n);
    const auto o = oracle::trial_factor(n);
    REQUIRE(f.factors().size() == o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
      CHECK(f.factors()[i].prime == o[i].first);
      CHECK(f.factors()[i].exponent == o[i].second);
    }
    CHECK(factorize_trial(n) == f);
  }
}

TEST_CASE("segment size does not change the table") {
  const SpfTable a(200'000, 1 << 10);
  const SpfTable b(200'000, 1 << 18);
  for (u64 n = 2; n <= 200'000; n += 7) CHECK(a.smallest_prime_factor(n) == b.smallest_prime_factor(n));
  CHECK(a.primes_between(100, 200) == b.primes_between(100, 200));
  CHECK(a.primes_between(2, 30) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("multiplicative functions") {
  CHECK(multiplicative(factorize_trial(30)) == MultiplicativeValues{-1, 8, 8});
  CHECK(multiplicative(factorize_trial(12)) == MultiplicativeValues{0, 4, 6});
  CHECK(multiplicative(factorize_trial(1)) == MultiplicativeValues{1, 1, 1});
  const SpfTable t(10'000);
  for (u64 n = 1; n <= 10'000; n += (n < 500 ? 1 : 37)) {
    const auto m = multiplicative(t.factorize(n));
    CHECK(m.mu == oracle::mobius(n));
    CHECK(m.phi == oracle::totient(n));
    CHECK(m.tau == oracle::divisor_count(n));
  }
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(1, 13) == 1);
  CHECK(mod_inverse(-1, 7) == 6);
  CHECK_THROWS_AS(mod_inverse(2, 4), NotInvertibleError);
  CounterRng rng(7);
  int checked = 0;
  while (checked < 10'000) {
    const u64 m = static_cast<u64>(rng.integer(2, 1'000'000'000));
    const auto a = rng.integer(-1'000'000'000, 1'000'000'000);
    if (std::gcd(reduce_mod(a, m), m) != 1) continue;
    REQUIRE(mul_mod(mod_inverse(a, m), reduce_mod(a, m), m) == 1);
    ++checked;
  }
}

TEST_CASE("is_rough") {
  CHECK(is_rough(factorize_trial(77), 6));
  CHECK_FALSE(is_rough(factorize_trial(77), 7));
  CHECK(is_rough(FactoredInteger{}, 1e9));
  const SpfTable t(100'000);
  for (double z : {2.0, 5.0, 10.0, 100.0}) {
    for (u64 n = 2; n <= 100'000; ++n) {
      REQUIRE(is_rough(t.factorize(n), z) == (static_cast<double>(t.smallest_prime_factor(n)) > z));
    }
  }
}

TEST_CASE("primality helpers agree") {
  const SpfTable t(100'000);
  const auto ps = primes_up_to(100'000);
  std::size_t k = 0;
  for (u64 n = 0; n <= 100'000; ++n) {
    const bool p = k < ps.size() && ps[k] == n;
    if (p) ++k;
    REQUIRE(is_prime(n) == p);
    if (n >= 2) REQUIRE(t.is_prime(n) == p);
  }
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(reduce_mod(-3, 5) == 2);
}

TEST_CASE("from_factors") {
  const auto f = FactoredInteger::from_factors({{2, 1}, {5, 2}});
  CHECK(f.value() == 50);
  CHECK_FALSE(f.is_squarefree());
  CHECK(f.primes() == std::vector<u64>{2, 5});
  auto ds = f.squarefree_divisors();
  std::sort(ds.begin(), ds.end());
  CHECK(ds == std::vector<u64>{1, 2, 5, 10});
  CHECK_THROWS(FactoredInteger::from_factors({{5, 1}, {2, 1}}));
}

TEST_CASE("compensated sum and rng") {
  CompensatedSum s;
  s += 1e16;
  s += 1.0;
  s += -1e16;
  CHECK(s.value() == 1.0);
  CounterRng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(a.at(3) == CounterRng(5).at(3));
  const auto q = adaptive_simpson([](double x) { return x * x; }, 0.0, 3.0, 1e-12);
  CHECK(q.value == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(frac(mpq_class(-1, 3)) == mpq_class(2, 3));
}
