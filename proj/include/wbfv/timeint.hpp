#pragma once

#include "errors.hpp"
#include "scheme.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace wbfv {

/// Stages with density below this are treated as a genuine positivity failure;
/// anything between it and zero is round-off and is clamped.
inline constexpr double kNegativeTolerance = 1e-13;

/// Shu-Osher form of the three-stage third-order SSP Runge-Kutta method:
///   u1 = u + dt L(u)
///   u2 = (1 - b2) u + b2 (u1 + dt L(u1))
///   u' = (1 - b3) u + b3 (u2 + dt L(u2))
struct SspRk3 {
  static constexpr std::array<double, 3> blend{1.0, 0.25, 2.0 / 3.0};
};

/// Positivity-preserving step bound: CFL * dx * w_min / max signal speed.
inline double compute_dt(const Scheme& scheme, const Reconstruction& r, double cfl) {
  const double dx = scheme.grid().dx();
  const double v = scheme.max_signal_speed(r);
  if (!(v > 0.0)) return cfl * dx;
  return cfl * dx * scheme.points().weight_floor / v;
}

inline double compute_dt(const Scheme& scheme, const FieldState& s, double cfl) {
  return compute_dt(scheme, scheme.reconstruct(s), cfl);
}

namespace timeint_detail {
inline void sanitize(FieldState& s) {
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (!std::isfinite(s.rho[i]) || !std::isfinite(s.mom[i]))
      throw NumericalFault("non-finite state in cell " + std::to_string(i));
    if (s.rho[i] < -kNegativeTolerance)
      throw NumericalFault("negative density " + std::to_string(s.rho[i]) + " in cell " + std::to_string(i));
    if (s.rho[i] < 0.0) s.rho[i] = 0.0;
    if (s.rho[i] <= kDryThreshold) s.mom[i] = 0.0;  // vacuum carries no momentum
  }
}
} // namespace timeint_detail

/// Advances one SSP-RK3 step. K is refreshed after every stage from the
/// free-energy variation relative to the state at the start of the step.
inline FieldState ssp_rk3_step(const Scheme& scheme, const FieldState& u0, double dt,
                               const Reconstruction* r0 = nullptr) {
  const auto rho_ref = scheme.reconstruct_density(u0.rho);
  const int n = scheme.grid().size();

  auto stage = [&](const FieldState& from, const Reconstruction& r, double b) {
    const Derivative d = scheme.rhs(from, r);
    FieldState out(n);
    for (int i = 0; i < n; ++i) {
      out.rho[i] = (1.0 - b) * u0.rho[i] + b * (from.rho[i] + dt * d.rho[i]);
      out.mom[i] = (1.0 - b) * u0.mom[i] + b * (from.mom[i] + dt * d.mom[i]);
    }
    timeint_detail::sanitize(out);
    out.K = scheme.update_K(u0.K, rho_ref, scheme.reconstruct_density(out.rho));
    return out;
  };

  const Reconstruction first = r0 ? *r0 : scheme.reconstruct(u0);
  FieldState u1 = stage(u0, first, SspRk3::blend[0]);
  FieldState u2 = stage(u1, scheme.reconstruct(u1), SspRk3::blend[1]);
  FieldState u3 = stage(u2, scheme.reconstruct(u2), SspRk3::blend[2]);
  u3.t = u0.t + dt;
  return u3;
}

} // namespace wbfv
