#pragma once

#include "errors.hpp"
#include "pressure.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wbfv {

/// Uniformly sampled profile interpolated with a cubic B-spline. Outside the
/// sampled range the end values are held constant.
class TabulatedProfile {
public:
  TabulatedProfile(std::vector<double> values, double x0, double spacing)
      : x0_(x0), h_(spacing), samples_(std::move(values)) {
    if (samples_.size() < 4) throw InvalidInput("tabulated profile needs at least 4 samples");
    if (!(spacing > 0.0)) throw InvalidInput("tabulated profile needs positive spacing");
    spline_ = std::make_shared<Spline>(samples_.begin(), samples_.end(), x0_, h_);
  }

  double operator()(double x) const {
    const double x1 = x0_ + h_ * static_cast<double>(samples_.size() - 1);
    if (x <= x0_) return samples_.front();
    if (x >= x1) return samples_.back();
    return (*spline_)(x);
  }

  double x0() const { return x0_; }
  double spacing() const { return h_; }
  const std::vector<double>& samples() const { return samples_; }

private:
  using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
  double x0_;
  double h_;
  std::vector<double> samples_;
  std::shared_ptr<const Spline> spline_;
};

enum class PotentialKind { none, quadratic, double_well, tabulated };

/// External potential V(x).
struct ExternalPotential {
  PotentialKind kind = PotentialKind::none;
  std::optional<TabulatedProfile> table;

  static ExternalPotential none() { return {}; }
  static ExternalPotential quadratic() { return {PotentialKind::quadratic, std::nullopt}; }
  static ExternalPotential double_well() { return {PotentialKind::double_well, std::nullopt}; }
  static ExternalPotential tabulated(TabulatedProfile t) {
    return {PotentialKind::tabulated, std::move(t)};
  }

  double operator()(double x) const {
    switch (kind) {
      case PotentialKind::none: return 0.0;
      case PotentialKind::quadratic: return 0.5 * x * x;
      case PotentialKind::double_well: return 0.25 * x * x * x * x - 1.5 * x * x;
      case PotentialKind::tabulated: return (*table)(x);
    }
    return 0.0;
  }
};

enum class KernelKind { none, quadratic, log, power, morse, tabulated };

/// Interaction kernel W(x). Singular kernels (log, |x|^a/a with a < 1) are
/// replaced at zero separation by their average over a small symmetric cell.
struct InteractionKernel {
  KernelKind kind = KernelKind::none;
  double alpha = 2.0;
  std::optional<TabulatedProfile> table;

  static InteractionKernel none() { return {}; }
  static InteractionKernel quadratic() { return {KernelKind::quadratic, 2.0, std::nullopt}; }
  static InteractionKernel log() { return {KernelKind::log, 0.0, std::nullopt}; }
  static InteractionKernel morse() { return {KernelKind::morse, 0.0, std::nullopt}; }
  static InteractionKernel tabulated(TabulatedProfile t) {
    return {KernelKind::tabulated, 0.0, std::move(t)};
  }
  static InteractionKernel power(double a) {
    if (!(a > -1.0)) throw InvalidInput("power kernel needs alpha > -1");
    if (a == 0.0) return log();
    return {KernelKind::power, a, std::nullopt};
  }

  bool active() const { return kind != KernelKind::none; }

  bool singular() const {
    return kind == KernelKind::log || (kind == KernelKind::power && alpha < 1.0);
  }

  double operator()(double x) const {
    const double ax = std::abs(x);
    switch (kind) {
      case KernelKind::none: return 0.0;
      case KernelKind::quadratic: return 0.5 * x * x;
      case KernelKind::log: return std::log(ax);
      case KernelKind::power: return std::pow(ax, alpha) / alpha;
      case KernelKind::morse: return -std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
      case KernelKind::tabulated: return (*table)(x);
    }
    return 0.0;
  }

  /// Value used at zero separation for an effective node spacing h.
  double self_value(double h) const {
    if (kind == KernelKind::log) return std::log(0.5 * h) - 1.0;
    if (kind == KernelKind::power && alpha < 1.0)
      return std::pow(0.5 * h, alpha) / (alpha * (alpha + 1.0));
    return (*this)(0.0);
  }
};

enum class Alignment { none, cucker_smale, motsch_tadmor };

/// Linear damping -gamma rho u plus optional nonlocal velocity alignment with
/// communication function psi(x) = (1 + x^2)^(-psi_decay).
struct Damping {
  double gamma = 0.0;
  Alignment alignment = Alignment::none;
  double psi_decay = 0.25;

  double psi(double x) const { return std::pow(1.0 + x * x, -psi_decay); }
};

struct ModelSpec {
  PressureLaw pressure{};
  ExternalPotential potential{};
  InteractionKernel kernel{};
  Damping damping{};

  void validate() const {
    if (!(damping.gamma >= 0.0)) throw InvalidInput("damping gamma must be >= 0");
    if (!(damping.psi_decay >= 0.0)) throw InvalidInput("psi decay must be >= 0");
    if (kernel.kind == KernelKind::power && !(kernel.alpha > -1.0))
      throw InvalidInput("power kernel needs alpha > -1");
  }
};

inline PotentialKind parse_potential(std::string_view s) {
  if (s == "none") return PotentialKind::none;
  if (s == "quadratic") return PotentialKind::quadratic;
  if (s == "double_well") return PotentialKind::double_well;
  if (s == "tabulated") return PotentialKind::tabulated;
  throw InvalidInput("unknown potential '" + std::string(s) + "'");
}

inline std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::none: return "none";
    case PotentialKind::quadratic: return "quadratic";
    case PotentialKind::double_well: return "double_well";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "?";
}

inline KernelKind parse_kernel(std::string_view s) {
  if (s == "none") return KernelKind::none;
  if (s == "quadratic") return KernelKind::quadratic;
  if (s == "log") return KernelKind::log;
  if (s == "power") return KernelKind::power;
  if (s == "morse") return KernelKind::morse;
  if (s == "tabulated") return KernelKind::tabulated;
  throw InvalidInput("unknown kernel '" + std::string(s) + "'");
}

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::none: return "none";
    case KernelKind::quadratic: return "quadratic";
    case KernelKind::log: return "log";
    case KernelKind::power: return "power";
    case KernelKind::morse: return "morse";
    case KernelKind::tabulated: return "tabulated";
  }
  return "?";
}

inline Alignment parse_alignment(std::string_view s) {
  if (s == "none") return Alignment::none;
  if (s == "cucker_smale" || s == "cs") return Alignment::cucker_smale;
  if (s == "motsch_tadmor" || s == "mt") return Alignment::motsch_tadmor;
  throw InvalidInput("unknown alignment '" + std::string(s) + "'");
}

inline std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::none: return "none";
    case Alignment::cucker_smale: return "cucker_smale";
    case Alignment::motsch_tadmor: return "motsch_tadmor";
  }
  return "?";
}

} // namespace wbfv
