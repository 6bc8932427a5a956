#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "sievelab/error.hpp"
#include "sievelab/experiment.hpp"

using namespace sievelab;

namespace {

const SpfTable& table() {
  static const SpfTable t(400'000);
  return t;
}

}  // namespace

TEST_CASE("qualifiers") {
  CHECK_FALSE(qualifies(FactoredInteger{}, Qualifier::almost_prime, 1.0));
  CHECK_FALSE(qualifies(FactoredInteger{}, Qualifier::prime, 1.0));
  CHECK(qualifies(factorize_trial(9), Qualifier::almost_prime, 2.0));
  CHECK_FALSE(qualifies(factorize_trial(27), Qualifier::almost_prime, 2.0));
  CHECK_FALSE(qualifies(factorize_trial(106), Qualifier::almost_prime, 10.0));
  CHECK(qualifies(factorize_trial(11 * 11 * 2), Qualifier::square_above_z, 10.0));
  CHECK_FALSE(qualifies(factorize_trial(7 * 7 * 2), Qualifier::square_above_z, 10.0));
}

TEST_CASE("window counts") {
  const auto& t = table();
  CHECK(window_count({1, 1, 10, 110.0}, 10.0, t) == 4);
  CHECK(window_count({1, 1, 10, 110.0}, 10.0, t) == oracle::window_count(1, 0, 10, 110.0, 10.0));
  CHECK(window_count({2, 1, 2, 9.0}, 2.0, t) == 1);
  CHECK(window_count({5, 2, 1, 0.5}, 2.0, t) == 0);
  for (u64 q : {1, 3, 4, 7}) {
    for (double x : {500.0, 777.5, 4321.0}) {
      for (u64 a = 0; a < q; ++a) {
        if (q > 1 && std::gcd(a, q) != 1) continue;
        CHECK(window_count({q, a, 60, x}, 3.0, t) == oracle::window_count(q, a, 60, x, 3.0));
      }
    }
  }
  CHECK_THROWS_AS(window_count({4, 2, 10, 100.0}, 3.0, t), DomainError);
  CHECK_THROWS_AS(window_count({1, 1, 10, 1e7}, 3.0, t), RangeError);
}

TEST_CASE("exceptional measure saturation") {
  const auto& t = table();
  const auto neg = exceptional_measure(5, 1000, 30, 3.0, -1.0, t);
  for (const auto& [a, m] : neg.measure) CHECK(m == 0.0);
  CHECK(neg.measure.size() == 4);
  const auto all = exceptional_measure(5, 1000, 30, 3.0, 30.0, t);
  for (const auto& [a, m] : all.measure) CHECK(m == 1000.0);
  const auto one = exceptional_measure(1, 1000, 30, 3.0, 0.0, t);
  REQUIRE(one.measure.size() == 1);
  CHECK(one.measure.count(0) == 1);
}

TEST_CASE("exceptional measure against naive scans") {
  const auto& t = table();
  const u64 q = 4, X = 10'000, L = 100;
  const double z = std::pow(1e4, 0.125);
  std::vector<u64> counts;
  for (u64 k = 0; k < 4 * X; k += 3) {
    const double x = static_cast<double>(X) + static_cast<double>(k) / 4.0;
    counts.push_back(window_count({q, 1, L, x}, z, t));
  }
  std::nth_element(counts.begin(), counts.begin() + counts.size() / 2, counts.end());
  const double threshold = static_cast<double>(counts[counts.size() / 2]) / 2.0;
  const auto r = exceptional_measure(q, X, L, z, threshold, t);
  const auto naive = oracle::census(q, X, L, z, threshold);
  CHECK(r.measure == naive);
  const auto scan = exceptional_measure_scan(q, X, L, z, threshold, t);
  CHECK(scan.measure == r.measure);
  const double median = static_cast<double>(counts[counts.size() / 2]);
  const auto at_median = exceptional_measure(q, X, L, z, median, t);
  CHECK(at_median.measure == oracle::census(q, X, L, z, median));
  CHECK(at_median.total > 0.0);

  const auto frac = exceptional_measure(3, 2000.5, 40, 2.0, 3.0, t);
  const auto frac_scan = exceptional_measure_scan(3, 2000.5, 40, 2.0, 3.0, t);
  for (const auto& [a, m] : frac.measure) CHECK(m == doctest::Approx(frac_scan.measure.at(a)));
}

TEST_CASE("CSV and JSON summaries") {
  const auto r = exceptional_measure(3, 1000, 20, 2.0, 1.0, table());
  std::ostringstream out;
  r.write_csv(out);
  CHECK(out.str().rfind("a,measure\n1,", 0) == 0);
  const auto j = nlohmann::json::parse(r.summary_json());
  CHECK(j["q"] == 3);
  CHECK(j["total"].get<double>() == r.total);
  CHECK(j["c"].is_null());
}

TEST_CASE("trend scan") {
  const auto& t = table();
  const auto rows = theorem_trend_scan(3, 20'000, 2.0, 0.05, {2, 2, 4}, t);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].total == rows[1].total);
  CHECK(rows[0].L == rows[1].L);
  CHECK(rows[0].L == static_cast<u64>(std::llround(2 * 2 * std::log(20'000.0))));
  const auto sat = theorem_trend_scan(3, 20'000, 2.0, 100.0, {2}, t);
  CHECK(sat[0].degenerate);
  CHECK(sat[0].normalized == doctest::Approx(2.0));
  std::ostringstream out;
  write_trend_csv(out, rows);
  CHECK(out.str().rfind("A,L,threshold,total,normalized,degenerate\n", 0) == 0);
  CHECK_THROWS_AS(theorem_trend_scan(3, 20'000, 2.0, 0.05, {0}, t), DomainError);
}

TEST_CASE("corollary scan") {
  const auto two = corollary_scan(2, 5.0);
  CHECK(two.total == 1);
  CHECK(two.witnesses.at(1) == std::optional<u64>{3});
  CHECK(two.coverage() == 1.0);
  const auto tiny = corollary_scan(101, 0.001);
  CHECK(tiny.covered == 0);
  CHECK(tiny.total == 100);
  const auto s = corollary_scan(101, 10.0);
  CHECK(s.coverage() >= 0.99);
  for (const auto& [a, n] : s.witnesses) {
    if (n) CHECK(*n % 101 == a);
  }
  CHECK_THROWS_AS(corollary_scan(1, 10.0), DomainError);
}

TEST_CASE("prime variant and squarefull measure") {
  const auto& t = table();
  const auto bert = prime_variant_scan(1, 10'000, 10'000, t);
  CHECK(bert.total == 0.0);
  const auto p = prime_variant_scan(3, 100'000, 50, t);
  const auto scan = exceptional_measure_scan(3, 100'000, 50, 0.0, 0.0, t, Qualifier::prime);
  CHECK(p.measure == scan.measure);
  CHECK(p.measure.size() == 2);

  const auto sq = squarefull_measure(1, 100'000, 100, 10.0, t);
  CHECK(sq.ok);
  CHECK(sq.envelope == doctest::Approx(3.0 * 100 * 100'000 / 10.0));
  CHECK(sq.measure > 0.0);
}
