#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace wbfv {

/// Three-point Gauss-Legendre rule mapped onto a cell, normalised so that the
/// weights sum to one (cell averages rather than integrals).
struct GaussRule {
  static constexpr int size = 3;
  static constexpr std::array<double, 3> weights{5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};

  /// Node offsets from the cell centre in units of dx.
  static inline const std::array<double, 3> offsets{-0.5 * std::sqrt(0.6), 0.0, 0.5 * std::sqrt(0.6)};

  static double node(double center, double dx, int j) { return center + offsets[j] * dx; }
};

/// Gauss average of f over the cell [center - dx/2, center + dx/2].
template <class F>
double gauss_cell_average(F&& f, double center, double dx) {
  double s = 0.0;
  for (int j = 0; j < GaussRule::size; ++j) s += GaussRule::weights[j] * f(GaussRule::node(center, dx, j));
  return s;
}

enum class SourceOrder { fourth, sixth };

/// Composite trapezoid approximation of the integral over [a, b] of
/// rho d(H) - rho d(Hstar), using `m` equal subintervals.
template <class Rho, class H, class HStar>
double trapezoid_source(int m, const Rho& rho, const H& h, const HStar& hstar, double a, double b) {
  if (m < 1) throw std::invalid_argument("trapezoid_source needs m >= 1");
  const double step = (b - a) / m;
  double sum = 0.0;
  double x0 = a;
  double r0 = rho(x0), h0 = h(x0), s0 = hstar(x0);
  for (int j = 1; j <= m; ++j) {
    const double x1 = (j == m) ? b : a + j * step;
    const double r1 = rho(x1), h1 = h(x1), s1 = hstar(x1);
    const double rbar = 0.5 * (r0 + r1);
    sum += rbar * (h1 - h0) - rbar * (s1 - s0);
    r0 = r1;
    h0 = h1;
    s0 = s1;
  }
  return sum;
}

/// Richardson extrapolation of trapezoid_source to fourth or sixth order.
template <class Rho, class H, class HStar>
double richardson_source(SourceOrder order, const Rho& rho, const H& h, const HStar& hstar, double a,
                         double b) {
  const double i1 = trapezoid_source(1, rho, h, hstar, a, b);
  const double i2 = trapezoid_source(2, rho, h, hstar, a, b);
  if (order == SourceOrder::fourth) return (4.0 * i2 - i1) / 3.0;
  const double i3 = trapezoid_source(3, rho, h, hstar, a, b);
  return (81.0 / 40.0) * i3 - (16.0 / 15.0) * i2 + (1.0 / 24.0) * i1;
}

} // namespace wbfv
