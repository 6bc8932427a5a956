#include "sievelab/smooth_window.hpp"

#include <cmath>

#include "sievelab/numeric.hpp"

namespace sievelab {

double smooth_step(double u) noexcept {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

SmoothWindow::SmoothWindow(std::size_t cells)
    : cells_(cells), h_((kSupportHi - kSupportLo) / static_cast<double>(cells)) {
  G_.assign(cells + 1, 0.0);
  CompensatedSum acc;
  const auto g = [this](double t) { return value(t); };
  for (std::size_t i = 0; i < cells; ++i) {
    const double a = kSupportLo + static_cast<double>(i) * h_;
    acc += gauss_legendre(g, a, a + h_);
    G_[i + 1] = acc.value();
  }
  g_hat_0_ = G_.back();
}

double SmoothWindow::value(double t) const noexcept {
  if (t <= kSupportLo || t >= kSupportHi) return 0.0;
  if (t < 1.0) return smooth_step((t - 0.5) / 0.5);
  if (t <= 2.0) return 1.0;
  return smooth_step((2.5 - t) / 0.5);
}

double SmoothWindow::antiderivative(double t) const noexcept {
  if (t <= kSupportLo) return 0.0;
  if (t >= kSupportHi) return g_hat_0_;
  const double pos = (t - kSupportLo) / h_;
  auto i = static_cast<std::size_t>(pos);
  if (i >= cells_) i = cells_ - 1;
  const double u = pos - static_cast<double>(i);
  const double x0 = kSupportLo + static_cast<double>(i) * h_;
  const double d0 = value(x0) * h_;
  const double d1 = value(x0 + h_) * h_;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * G_[i] + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * G_[i + 1] +
         (u3 - u2) * d1;
}

double SmoothWindow::integral_scaled(double u, double v, double X) const noexcept {
  return X * (antiderivative(v / X) - antiderivative(u / X));
}

}  // namespace sievelab
