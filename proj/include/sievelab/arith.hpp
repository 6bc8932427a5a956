#pragma once

// Exact integer kernel: smallest-prime-factor tables, factorizations,
// multiplicative functions and modular inverses. All values fit in 63 bits;
// modular products go through 128-bit intermediates.

#include <cstdint>
#include <span>
#include <vector>

namespace sievelab {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
  u64 prime = 0;
  int exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A positive integer together with its factorization. Default-constructed
// value is 1 (empty product).
class FactoredInteger {
 public:
  FactoredInteger() = default;

  // Factors must be strictly increasing in prime with exponents >= 1 and the
  // product must stay below 2^63. Primality of each entry is not re-checked.
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  u64 value() const noexcept { return value_; }
  std::span<const PrimePower> factors() const noexcept { return factors_; }

  // Omega(n): prime factors with multiplicity.
  int big_omega() const noexcept;
  // omega(n): distinct prime factors.
  int small_omega() const noexcept { return static_cast<int>(factors_.size()); }
  bool is_one() const noexcept { return factors_.empty(); }
  bool is_squarefree() const noexcept;

  // 0 when the value is 1.
  u64 smallest_prime() const noexcept { return factors_.empty() ? 0 : factors_.front().prime; }
  u64 largest_prime() const noexcept { return factors_.empty() ? 0 : factors_.back().prime; }

  // Distinct primes, ascending.
  std::vector<u64> primes() const;
  // All squarefree divisors (divisors of the radical), unsorted.
  std::vector<u64> squarefree_divisors() const;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;

 private:
  u64 value_ = 1;
  std::vector<PrimePower> factors_;
};

// Smallest-prime-factor table for 2 <= n <= limit, built by a segmented
// sieve. Odd entries only; each stores a 16-bit index into the list of
// primes up to sqrt(limit), so memory is about limit bytes.
class SpfTable {
 public:
  static constexpr u64 kMaxLimit = 100'000'000'000ULL;

  explicit SpfTable(u64 limit, u64 segment_size = u64{1} << 18);

  u64 limit() const noexcept { return limit_; }
  u64 smallest_prime_factor(u64 n) const;
  bool is_prime(u64 n) const;
  FactoredInteger factorize(u64 n) const;

  // Primes p with lo <= p <= hi (hi clipped to the limit).
  std::vector<u64> primes_between(u64 lo, u64 hi) const;

 private:
  u64 limit_;
  std::vector<std::uint32_t> base_primes_;  // odd primes <= sqrt(limit)
  std::vector<std::uint16_t> index_;        // odd n -> 0 (prime) or 1 + base index
};

struct MultiplicativeValues {
  int mu = 1;
  u64 phi = 1;
  u64 tau = 1;
  friend bool operator==(const MultiplicativeValues&, const MultiplicativeValues&) = default;
};

FactoredInteger factorize(u64 n, const SpfTable& table);

// Trial-division factorization for values off the table (small inputs only).
FactoredInteger factorize_trial(u64 n);

MultiplicativeValues multiplicative(const FactoredInteger& n);

// x in [0, m) with a*x = 1 (mod m). Throws NotInvertibleError when gcd(a, m) != 1.
u64 mod_inverse(i64 a, u64 m);

// Every prime factor exceeds z; 1 is z-rough for every z.
bool is_rough(const FactoredInteger& n, double z);

u64 mul_mod(u64 a, u64 b, u64 m) noexcept;
u64 pow_mod(u64 base, u64 exp, u64 m) noexcept;

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n) noexcept;

// Primes p <= n by a plain sieve of Eratosthenes.
std::vector<u64> primes_up_to(u64 n);

// Non-negative residue of a modulo m.
u64 reduce_mod(i64 a, u64 m) noexcept;

}  // namespace sievelab
