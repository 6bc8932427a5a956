#pragma once

// Smooth plateau g with 1 on [1, 2], support [1/2, 5/2] inside [1/2, 3],
// joined by exp(-1/t) transitions of width 1/2. The antiderivative G is
// tabulated once (Gauss-Legendre per cell, cubic Hermite in between).

#include <string>
#include <vector>

namespace sievelab {

class SmoothWindow {
 public:
  static constexpr double kSupportLo = 0.5;
  static constexpr double kSupportHi = 2.5;
  static constexpr double kNominalHi = 3.0;

  explicit SmoothWindow(std::size_t cells = std::size_t{1} << 16);

  double operator()(double t) const noexcept { return value(t); }
  double value(double t) const noexcept;
  // G(t) = integral of g over (-inf, t].
  double antiderivative(double t) const noexcept;
  // integral of g(x / X) over [u, v] = X (G(v / X) - G(u / X)).
  double integral_scaled(double u, double v, double X) const noexcept;

  double g_hat_0() const noexcept { return g_hat_0_; }
  std::size_t cells() const noexcept { return cells_; }
  std::string name() const { return "exp_plateau_w0.5"; }

 private:
  std::size_t cells_;
  double h_;
  std::vector<double> G_;  // G at cell boundaries
  double g_hat_0_;
};

// The C-infinity step s(u) = psi(u) / (psi(u) + psi(1 - u)), psi(u) = exp(-1/u).
double smooth_step(double u) noexcept;

}  // namespace sievelab
