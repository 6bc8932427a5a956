#include "sievelab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sievelab/error.hpp"

namespace sievelab {

namespace {

constexpr u64 kValueCeiling = u64{1} << 63;

u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  FactoredInteger out;
  u64 value = 1;
  u64 prev = 1;
  for (const auto& [p, e] : factors) {
    if (p < 2 || p <= prev) throw DomainError("factor primes must be >= 2 and strictly increasing");
    if (e < 1) throw DomainError("factor exponents must be >= 1");
    for (int i = 0; i < e; ++i) {
      if (value > (kValueCeiling - 1) / p) throw RangeError("factored value exceeds 2^63");
      value *= p;
    }
    prev = p;
  }
  out.value_ = value;
  out.factors_ = std::move(factors);
  return out;
}

int FactoredInteger::big_omega() const noexcept {
  int total = 0;
  for (const auto& f : factors_) total += f.exponent;
  return total;
}

bool FactoredInteger::is_squarefree() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

std::vector<u64> FactoredInteger::primes() const {
  std::vector<u64> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.prime);
  return out;
}

std::vector<u64> FactoredInteger::squarefree_divisors() const {
  std::vector<u64> divs{1};
  divs.reserve(std::size_t{1} << factors_.size());
  for (const auto& f : factors_) {
    const std::size_t n = divs.size();
    for (std::size_t i = 0; i < n; ++i) divs.push_back(divs[i] * f.prime);
  }
  return divs;
}

SpfTable::SpfTable(u64 limit, u64 segment_size) : limit_(limit) {
  if (limit < 2) throw RangeError("SpfTable limit must be >= 2");
  if (limit > kMaxLimit) throw RangeError("SpfTable limit " + std::to_string(limit) + " too large");
  segment_size = std::max<u64>(segment_size, 1024);

  const u64 root = isqrt(limit);
  for (u64 p : primes_up_to(root)) {
    if (p != 2) base_primes_.push_back(static_cast<std::uint32_t>(p));
  }

  // index_[i] describes the odd number 2i + 1.
  const u64 odd_count = (limit + 1) / 2;
  index_.assign(odd_count, 0);

  for (u64 seg_lo = 0; seg_lo < odd_count; seg_lo += segment_size) {
    const u64 seg_hi = std::min(odd_count, seg_lo + segment_size);
    const u64 n_lo = 2 * seg_lo + 1;
    const u64 n_hi = 2 * (seg_hi - 1) + 1;
    for (std::size_t k = 0; k < base_primes_.size(); ++k) {
      const u64 p = base_primes_[k];
      if (p * p > n_hi) break;
      u64 start = std::max(p * p, (n_lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      const auto tag = static_cast<std::uint16_t>(k + 1);
      for (u64 n = start; n <= n_hi; n += 2 * p) {
        auto& slot = index_[n / 2];
        if (slot == 0) slot = tag;
      }
    }
  }
}

u64 SpfTable::smallest_prime_factor(u64 n) const {
  if (n < 2 || n > limit_) {
    throw RangeError("n = " + std::to_string(n) + " outside SpfTable range [2, " +
                     std::to_string(limit_) + "]");
  }
  if (n % 2 == 0) return 2;
  const auto tag = index_[n / 2];
  return tag == 0 ? n : base_primes_[tag - 1];
}

bool SpfTable::is_prime(u64 n) const {
  if (n < 2) return false;
  return smallest_prime_factor(n) == n;
}

FactoredInteger SpfTable::factorize(u64 n) const {
  if (n == 0) throw DomainError("cannot factorize 0");
  if (n > limit_) {
    throw RangeError("n = " + std::to_string(n) + " exceeds SpfTable limit " +
                     std::to_string(limit_));
  }
  std::vector<PrimePower> factors;
  while (n > 1) {
    const u64 p = smallest_prime_factor(n);
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    factors.push_back({p, e});
  }
  return FactoredInteger::from_factors(std::move(factors));
}

std::vector<u64> SpfTable::primes_between(u64 lo, u64 hi) const {
  std::vector<u64> out;
  hi = std::min(hi, limit_);
  if (lo <= 2 && hi >= 2) out.push_back(2);
  for (u64 n = std::max<u64>(lo, 3) | 1; n <= hi; n += 2) {
    if (index_[n / 2] == 0) out.push_back(n);
  }
  return out;
}

FactoredInteger factorize(u64 n, const SpfTable& table) { return table.factorize(n); }

FactoredInteger factorize_trial(u64 n) {
  if (n == 0) throw DomainError("cannot factorize 0");
  std::vector<PrimePower> factors;
  for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) factors.push_back({p, e});
  }
  if (n > 1) factors.push_back({n, 1});
  return FactoredInteger::from_factors(std::move(factors));
}

MultiplicativeValues multiplicative(const FactoredInteger& n) {
  MultiplicativeValues out;
  for (const auto& [p, e] : n.factors()) {
    out.mu = e > 1 ? 0 : -out.mu;
    u64 pk = 1;
    for (int i = 1; i < e; ++i) pk *= p;
    out.phi *= pk * (p - 1);
    out.tau *= static_cast<u64>(e + 1);
  }
  return out;
}

u64 reduce_mod(i64 a, u64 m) noexcept {
  const auto r = static_cast<__int128>(a) % static_cast<__int128>(m);
  return static_cast<u64>(r < 0 ? r + m : r);
}

u64 mod_inverse(i64 a, u64 m) {
  if (m == 0) throw DomainError("modulus must be positive");
  const u64 r = reduce_mod(a, m);
  if (m == 1) return 0;
  __int128 old_r = r, cur_r = m;
  __int128 old_s = 1, cur_s = 0;
  while (cur_r != 0) {
    const __int128 quot = old_r / cur_r;
    std::swap(old_r, cur_r);
    cur_r -= quot * old_r;
    std::swap(old_s, cur_s);
    cur_s -= quot * old_s;
  }
  if (old_r != 1) {
    throw NotInvertibleError(std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  __int128 x = old_s % static_cast<__int128>(m);
  if (x < 0) x += m;
  return static_cast<u64>(x);
}

bool is_rough(const FactoredInteger& n, double z) {
  return n.is_one() || static_cast<double>(n.smallest_prime()) > z;
}

u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    if (p <= n / p) {
      for (u64 m = p * p; m <= n; m += p) composite[m] = true;
    }
  }
  return out;
}

}  // namespace sievelab
