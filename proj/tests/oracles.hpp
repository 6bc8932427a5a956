#pragma once

// Slow reference implementations. Nothing here calls the library's
// enumerators or sweeps; only plain loops and trial division.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "sievelab/sieve_weights.hpp"

namespace oracle {

using sievelab::i64;
using sievelab::u64;

inline std::vector<std::pair<u64, int>> trial_factor(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline bool squarefree(u64 n) {
  for (const auto& [p, e] : trial_factor(n)) {
    if (e > 1) return false;
  }
  return true;
}

inline int mobius(u64 n) {
  int s = 1;
  for (const auto& [p, e] : trial_factor(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

inline u64 divisor_count(u64 n) {
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d) c += (n % d == 0);
  return c;
}

inline u64 totient(u64 n) {
  u64 c = 0;
  for (u64 k = 1; k <= n; ++k) c += (std::gcd(k, n) == 1);
  return c;
}

inline u64 smallest_factor(u64 n) {
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

inline bool prime(u64 n) { return n >= 2 && smallest_factor(n) == n; }

// Membership of squarefree d in the prefix-condition set, checked straight
// from the definition with long double products.
inline bool prefix_member(u64 d, bool plus, long double threshold, int exponent) {
  auto f = trial_factor(d);
  std::vector<u64> ps;
  for (const auto& [p, e] : f) ps.push_back(p);
  std::sort(ps.rbegin(), ps.rend());
  long double prod = 1.0L;
  for (std::size_t m = 1; m <= ps.size(); ++m) {
    prod *= static_cast<long double>(ps[m - 1]);
    const bool odd = m % 2 == 1;
    if (odd != plus) continue;
    const long double v = prod * std::pow(static_cast<long double>(ps[m - 1]), exponent);
    if (!(v < threshold)) return false;
  }
  return true;
}

inline bool primes_within(u64 d, double lo, double hi) {
  for (const auto& [p, e] : trial_factor(d)) {
    if (static_cast<double>(p) < lo || static_cast<double>(p) >= hi) return false;
  }
  return true;
}

inline int lambda(u64 d, bool plus, const sievelab::SieveParams& s, double P = 0.0) {
  if (!squarefree(d) || !primes_within(d, s.w_level, s.z)) return 0;
  const long double t = P > 0.0 ? s.D / P : s.D;
  return prefix_member(d, plus, t, 2) ? mobius(d) : 0;
}

inline int rho(u64 d, bool plus, const sievelab::SieveParams& s) {
  if (!squarefree(d) || !primes_within(d, 2.0, s.w_level)) return 0;
  return prefix_member(d, plus, s.E, s.beta) ? mobius(d) : 0;
}

// Splits d into the part built from primes below w_level and the rest.
inline std::pair<u64, u64> split_rho(u64 d, double w) {
  u64 small = 1;
  for (const auto& [p, e] : trial_factor(d)) {
    if (static_cast<double>(p) < w) {
      for (int i = 0; i < e; ++i) small *= p;
    }
  }
  return {d / small, small};
}

inline int alpha_minus(u64 d, const sievelab::SieveParams& s) {
  const auto [dl, dr] = split_rho(d, s.w_level);
  const int lp = lambda(dl, true, s), lm = lambda(dl, false, s);
  const int rp = rho(dr, true, s), rm = rho(dr, false, s);
  return lp * rm + lm * rp - lp * rp;
}

inline int alpha_plus(u64 d, double P, const sievelab::SieveParams& s) {
  const auto [dl, dr] = split_rho(d, s.w_level);
  return lambda(dl, true, s, P) * rho(dr, true, s);
}

inline int beta(u64 d, const sievelab::SieveParams& s) {
  std::vector<u64> big;
  for (const auto& [p, e] : trial_factor(d)) {
    if (static_cast<double>(p) >= s.z) big.push_back(p);
  }
  if (big.size() != 1) return 0;
  const u64 p = big[0];
  if (static_cast<double>(p) >= s.y) return 0;
  for (double P = 1.0; P < s.y; P *= 2.0) {
    if (P < s.z) continue;
    if (static_cast<double>(p) >= P && static_cast<double>(p) < 2.0 * P) {
      return alpha_plus(d / p, P, s);
    }
  }
  return 0;
}

// Largest integer that can carry a composed weight.
inline u64 composed_bound(const sievelab::SieveParams& s) {
  u64 b = 1;
  for (u64 p = 2; static_cast<double>(p) < s.z; ++p) {
    if (prime(p)) b *= p;
  }
  return b * static_cast<u64>(std::ceil(s.y));
}

inline mpq_class main_term(const sievelab::SieveParams& s, u64 q) {
  mpq_class sum = 0;
  const u64 bound = composed_bound(s);
  for (u64 d = 1; d <= bound; ++d) {
    if (std::gcd(d, q) != 1) continue;
    const int w = alpha_minus(d, s) - beta(d, s);
    if (w != 0) sum += mpq_class(w, d);
  }
  sum.canonicalize();
  return sum;
}

// sum over d of d (sum over m = 0 (d), (m, q) = 1 of w_m / m)^2.
inline mpq_class s1_double_loop(const std::map<u64, int>& w, u64 q) {
  const u64 top = w.empty() ? 1 : w.rbegin()->first;
  mpq_class total = 0;
  for (u64 d = 1; d <= top; ++d) {
    mpq_class inner = 0;
    for (u64 m = d; m <= top; m += d) {
      if (std::gcd(m, q) != 1) continue;
      auto it = w.find(m);
      if (it != w.end()) inner += mpq_class(it->second, m);
    }
    total += d * inner * inner;
  }
  total.canonicalize();
  return total;
}

inline i64 s3_naive(const std::map<u64, int>& w, u64 q, u64 Y) {
  i64 total = 0;
  for (u64 n = 1; n <= Y; ++n) {
    if (std::gcd(n, q) != 1) continue;
    i64 inner = 0;
    for (u64 e = 1; e * e <= n; ++e) {
      if (n % e != 0) continue;
      auto it = w.find(e);
      if (it != w.end()) inner += it->second;
      if (e * e != n) {
        auto jt = w.find(n / e);
        if (jt != w.end()) inner += jt->second;
      }
    }
    total += inner * inner;
  }
  return total;
}

inline bool almost_prime_rough(u64 n, double z) {
  if (n < 2) return false;
  int omega = 0;
  for (const auto& [p, e] : trial_factor(n)) {
    if (static_cast<double>(p) <= z) return false;
    omega += e;
  }
  return omega <= 2;
}

// Count in (x - L, x] with n = a (q), qualifying as z-rough E2.
inline u64 window_count(u64 q, u64 a, u64 L, double x, double z) {
  u64 c = 0;
  const auto hi = static_cast<i64>(std::floor(x));
  for (i64 n = hi; static_cast<double>(n) > x - static_cast<double>(L) && n >= 1; --n) {
    if (static_cast<u64>(n) % q == a % q && almost_prime_rough(static_cast<u64>(n), z)) ++c;
  }
  return c;
}

// Measure of x in [X, 2X] with window count <= threshold; X and L integers,
// so the count is constant on each [t, t + 1).
inline std::map<u64, double> census(u64 q, u64 X, u64 L, double z, double threshold) {
  std::map<u64, double> out;
  for (u64 a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1 && q != 1) continue;
    double m = 0.0;
    for (u64 t = X; t < 2 * X; ++t) {
      if (static_cast<double>(window_count(q, a, L, static_cast<double>(t), z)) <= threshold) m += 1.0;
    }
    out[a] = m;
  }
  return out;
}

inline std::complex<double> kloosterman(i64 a, i64 b, u64 c) {
  std::complex<long double> s = 0;
  const long double two_pi = 6.283185307179586476925286766559L;
  for (u64 x = 0; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    u64 xb = 0;
    for (u64 y = 0; y < c; ++y) {
      if ((x * y) % c == 1 % c) {
        xb = y;
        break;
      }
    }
    const auto ar = ((a % static_cast<i64>(c)) + static_cast<i64>(c)) % static_cast<i64>(c);
    const auto br = ((b % static_cast<i64>(c)) + static_cast<i64>(c)) % static_cast<i64>(c);
    const u64 k = (static_cast<u64>(ar) * x + static_cast<u64>(br) * xb) % c;
    s += std::polar(1.0L, two_pi * static_cast<long double>(k) / static_cast<long double>(c));
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

// sum over alpha_d - beta_d over the joint support, (d, q) = 1, of
// (#{n in (x - L, x], n = a (q), d | n} - L / (q d)).
inline mpq_class remainder(double x, u64 a, const sievelab::SieveParams& s) {
  mpq_class sum = 0;
  const u64 bound = composed_bound(s);
  const auto hi = static_cast<i64>(std::floor(x));
  for (u64 d = 1; d <= bound; ++d) {
    if (std::gcd(d, s.q) != 1) continue;
    const int w = alpha_minus(d, s) - beta(d, s);
    if (w == 0) continue;
    i64 count = 0;
    for (i64 n = hi; static_cast<double>(n) > x - static_cast<double>(s.L); --n) {
      if (n >= 1 && static_cast<u64>(n) % s.q == a % s.q && static_cast<u64>(n) % d == 0) ++count;
    }
    sum += w * (mpq_class(count) - mpq_class(s.L, s.q * d));
  }
  sum.canonicalize();
  return sum;
}

}  // namespace oracle
