#pragma once

#include <cstdint>
#include <functional>

#include <gmpxx.h>

namespace sievelab {

// Neumaier-compensated running sum. Order of add() calls fixes the result
// bit-for-bit.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + carry_; }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int panels = 0;
};

// Adaptive composite Simpson with interval-halving (Richardson) error
// estimate. Panels are refined depth-first in a fixed order.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tolerance, int max_depth = 48);

// 10-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

// Counter-based generator: the i-th draw is a SplitMix64 finalizer of
// seed + i * golden-gamma, so any draw can be recomputed from (seed, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next() noexcept { return at(counter_++); }
  std::uint64_t at(std::uint64_t index) const noexcept;

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi] (inclusive).
  std::int64_t integer(std::int64_t lo, std::int64_t hi) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Fractional part of an exact rational, in [0, 1).
mpq_class frac(const mpq_class& x);

double to_double(const mpq_class& x);

}  // namespace sievelab
