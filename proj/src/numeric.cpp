#include "sievelab/numeric.hpp"

#include <array>
#include <cmath>

namespace sievelab {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void refine(const std::function<double(double)>& f, const SimpsonPanel& p, double tol, int depth,
            CompensatedSum& value, CompensatedSum& error, int& panels) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    value += left + right + delta / 15.0;
    error += std::abs(delta) / 15.0;
    ++panels;
    return;
  }
  refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, value, error, panels);
  refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, value, error, panels);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tolerance, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  CompensatedSum value;
  CompensatedSum error;
  int panels = 0;
  refine(f, {a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, tolerance, max_depth, value, error,
         panels);
  return {value.value(), error.value(), panels};
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 5> kNodes = {
      0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
      0.8650633666889845107320967, 0.9739065285171717200779640};
  static constexpr std::array<double, 5> kWeights = {
      0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
      0.1494513491505805931457763, 0.0666713443086881375935688};
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    sum += kWeights[i] * (f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]));
  }
  return half * sum;
}

std::uint64_t CounterRng::at(std::uint64_t index) const noexcept {
  std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t CounterRng::integer(std::int64_t lo, std::int64_t hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

mpq_class frac(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  mpq_class out = x - mpq_class(fl);
  out.canonicalize();
  return out;
}

double to_double(const mpq_class& x) { return x.get_d(); }

}  // namespace sievelab
