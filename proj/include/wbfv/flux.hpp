#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

namespace wbfv {

/// Conserved pair (rho, rho u), also used for fluxes.
struct Conserved {
  double mass = 0.0;
  double momentum = 0.0;

  friend Conserved operator+(Conserved a, Conserved b) { return {a.mass + b.mass, a.momentum + b.momentum}; }
  friend Conserved operator-(Conserved a, Conserved b) { return {a.mass - b.mass, a.momentum - b.momentum}; }
  friend Conserved operator*(double s, Conserved a) { return {s * a.mass, s * a.momentum}; }
};

enum class FluxKind { llf, kinetic };

/// "auto" resolves to LLF for m = 1 and the kinetic flux for m > 1.
inline FluxKind resolve_flux(std::string_view name, const PressureLaw& law) {
  if (name == "llf") return FluxKind::llf;
  if (name == "kinetic") return FluxKind::kinetic;
  if (name == "auto") return law.isothermal() ? FluxKind::llf : FluxKind::kinetic;
  throw InvalidInput("unknown flux '" + std::string(name) + "'");
}

inline std::string_view to_string(FluxKind k) { return k == FluxKind::llf ? "llf" : "kinetic"; }

inline Conserved physical_flux(Conserved U, const PressureLaw& law) {
  const double u = velocity_of(U.mass, U.momentum);
  return {U.momentum, U.momentum * u + law.pressure(U.mass)};
}

/// Local Lax-Friedrichs flux with |lambda| = max over both states of |u| + sqrt(P').
inline Conserved llf_flux(Conserved UL, Conserved UR, const PressureLaw& law) {
  const double uL = velocity_of(UL.mass, UL.momentum);
  const double uR = velocity_of(UR.mass, UR.momentum);
  const double lambda = std::max(std::abs(uL) + law.sound_speed(UL.mass), std::abs(uR) + law.sound_speed(UR.mass));
  return 0.5 * (physical_flux(UL, law) + physical_flux(UR, law) - lambda * (UR - UL));
}

/// Half-width of the kinetic equilibrium used by kinetic_flux: a water-bag
/// profile rho / (2c) on [u - c, u + c] with c^2 = 3 P(rho) / rho.
inline double kinetic_half_width(double rho, const PressureLaw& law) {
  if (rho <= 0.0) return 0.0;
  return std::sqrt(3.0 * law.pressure(rho) / rho);
}

namespace kinetic_detail {
// Moments (int xi, int xi^2) of the water-bag equilibrium over xi in [lo, hi]
// intersected with its support.
inline Conserved partial_moments(double rho, double u, double c, double lo, double hi) {
  const double a = std::max(lo, u - c);
  const double b = std::min(hi, u + c);
  if (!(b > a)) return {};
  const double density = rho / (2.0 * c);
  return {density * 0.5 * (b * b - a * a), density * (b * b * b - a * a * a) / 3.0};
}
} // namespace kinetic_detail

/// Kinetic flux-vector splitting F+(UL) + F-(UR). The equilibrium has compact
/// support, so vacuum states contribute nothing and F+ + F- = F exactly.
inline Conserved kinetic_flux(Conserved UL, Conserved UR, const PressureLaw& law) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Conserved out;
  if (UL.mass > 0.0) {
    const double c = kinetic_half_width(UL.mass, law);
    out = out + kinetic_detail::partial_moments(UL.mass, velocity_of(UL.mass, UL.momentum), c, 0.0, inf);
  }
  if (UR.mass > 0.0) {
    const double c = kinetic_half_width(UR.mass, law);
    out = out + kinetic_detail::partial_moments(UR.mass, velocity_of(UR.mass, UR.momentum), c, -inf, 0.0);
  }
  return out;
}

inline Conserved numerical_flux(FluxKind kind, Conserved UL, Conserved UR, const PressureLaw& law) {
  return kind == FluxKind::llf ? llf_flux(UL, UR, law) : kinetic_flux(UL, UR, law);
}

/// One side of an interface: reconstructed density, velocity and potential.
/// `active` is false for a dry trace under the log pressure law, where the
/// potential is undefined.
struct TraceSide {
  double rho = 0.0;
  double u = 0.0;
  double H = 0.0;
  bool active = true;
};

struct InterfaceStates {
  TraceSide left;
  TraceSide right;
  double H_interface = 0.0;
  Conserved hr_left;
  Conserved hr_right;
};

/// Hydrostatic reconstruction at x_{i+1/2} from the two reconstructed traces.
/// An inactive (dry, log-law) trace has H = +inf in the limit, so the
/// interface becomes a wall: both hydrostatic states vanish.
inline InterfaceStates hydrostatic_states(const TraceSide& left, const TraceSide& right, const PressureLaw& law) {
  InterfaceStates s{left, right, 0.0, {}, {}};
  if (!left.active || !right.active) {
    s.H_interface = std::numeric_limits<double>::infinity();
    return s;
  }
  s.H_interface = std::max(left.H, right.H);
  auto hr = [&](const TraceSide& t) -> Conserved {
    const double r = std::max(law.xi(law.pi_prime(std::max(t.rho, 0.0)) + t.H - s.H_interface), 0.0);
    return {r, r * t.u};
  };
  s.hr_left = hr(left);
  s.hr_right = hr(right);
  return s;
}

struct WellBalancedFlux {
  Conserved minus;  ///< flux seen by the cell on the left of the interface
  Conserved plus;   ///< flux seen by the cell on the right
};

/// F^{+-} = F_num(U^{HR,-}, U^{HR,+}) +- S^{HR,+-}, with the pressure
/// corrections S^{HR,+} = (0, P(rho^+) - P(rho^{HR,+})) and
/// S^{HR,-} = (0, P(rho^{HR,-}) - P(rho^-)).
inline WellBalancedFlux wb_interface_flux(const InterfaceStates& s, FluxKind kind, const PressureLaw& law) {
  const Conserved f = numerical_flux(kind, s.hr_left, s.hr_right, law);
  const Conserved s_plus{0.0, law.pressure(s.right.rho) - law.pressure(s.hr_right.mass)};
  const Conserved s_minus{0.0, law.pressure(s.hr_left.mass) - law.pressure(s.left.rho)};
  return {f - s_minus, f + s_plus};
}

} // namespace wbfv
