#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wbfv {

/// Barotropic pressure P(rho) = c_P rho^m together with the internal energy
/// Pi it induces through rho Pi''(rho) = P'(rho).
class PressureLaw {
public:
  explicit PressureLaw(double exponent = 1.0, double scale = 1.0) : m_(exponent), c_(scale) {
    if (!(exponent >= 1.0)) throw InvalidInput("pressure exponent must be >= 1");
    if (!(scale > 0.0)) throw InvalidInput("pressure scale must be positive");
  }

  double exponent() const { return m_; }
  double scale() const { return c_; }
  bool isothermal() const { return m_ == 1.0; }

  double pressure(double rho) const {
    rho = std::max(rho, 0.0);
    return isothermal() ? c_ * rho : c_ * std::pow(rho, m_);
  }

  double dpressure(double rho) const {
    rho = std::max(rho, 0.0);
    return isothermal() ? c_ : c_ * m_ * std::pow(rho, m_ - 1.0);
  }

  double sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }

  /// Internal energy density Pi(rho); Pi(0) = 0.
  double internal_energy(double rho) const {
    if (rho <= 0.0) return 0.0;
    if (isothermal()) return c_ * (rho * std::log(rho) - rho);
    return c_ * std::pow(rho, m_) / (m_ - 1.0);
  }

  /// Pi'(rho). Throws std::domain_error for rho <= 0 when m = 1.
  double pi_prime(double rho) const {
    if (isothermal()) {
      if (!(rho > 0.0)) throw std::domain_error("log-pressure variation needs rho > 0");
      return c_ * std::log(rho);
    }
    if (rho <= 0.0) return 0.0;
    return c_ * (m_ / (m_ - 1.0)) * std::pow(rho, m_ - 1.0);
  }

  /// Pi' with densities below `floor` lifted to `floor` when m = 1.
  double pi_prime_guarded(double rho, double floor) const {
    return isothermal() ? c_ * std::log(std::max(rho, floor)) : pi_prime(rho);
  }

  /// Inverse of Pi' on rho > 0, clamped to vacuum for s <= 0 when m > 1.
  double xi(double s) const {
    if (isothermal()) return std::exp(s / c_);
    if (s <= 0.0) return 0.0;
    return std::pow((m_ - 1.0) * s / (m_ * c_), 1.0 / (m_ - 1.0));
  }

private:
  double m_;
  double c_;
};

} // namespace wbfv
