#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "pressure.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace wbfv {

/// Polynomial of degree <= 4 in powers of (x - center).
struct CellPolynomial {
  double center = 0.0;
  std::array<double, 5> coeffs{};

  static CellPolynomial constant(double center, double value) {
    CellPolynomial p;
    p.center = center;
    p.coeffs[0] = value;
    return p;
  }

  double operator()(double x) const {
    const double s = x - center;
    return coeffs[0] + s * (coeffs[1] + s * (coeffs[2] + s * (coeffs[3] + s * coeffs[4])));
  }

  /// Evaluates at center + offset * dx.
  double at(double offset, double dx) const {
    const double s = offset * dx;
    return coeffs[0] + s * (coeffs[1] + s * (coeffs[2] + s * (coeffs[3] + s * coeffs[4])));
  }

  double gauss_average(double dx) const {
    double s = 0.0;
    for (int j = 0; j < GaussRule::size; ++j) s += GaussRule::weights[j] * at(GaussRule::offsets[j], dx);
    return s;
  }
};

/// Five cell averages g_{i-2}, ..., g_{i+2}.
using Stencil = std::array<double, 5>;

enum class ReconstructionOrder { first = 1, third = 3, fifth = 5 };

inline ReconstructionOrder order_from_int(int order) {
  switch (order) {
    case 1: return ReconstructionOrder::first;
    case 3: return ReconstructionOrder::third;
    case 5: return ReconstructionOrder::fifth;
    default: throw InvalidInput("order must be 1, 3 or 5");
  }
}

namespace cweno3_detail {
inline constexpr std::array<double, 3> ideal{3.0 / 16.0, 5.0 / 8.0, 3.0 / 16.0};
inline constexpr double epsilon = 1e-6;
inline constexpr int power = 3;
} // namespace cweno3_detail

/// Nonlinear weights (left, centre, right) of the third-order reconstruction.
inline std::array<double, 3> cweno3_weights(const Stencil& g) {
  using namespace cweno3_detail;
  auto sq = [](double v) { return v * v; };
  const std::array<double, 3> is{
      13.0 / 12.0 * sq(g[0] - 2.0 * g[1] + g[2]) + 0.25 * sq(g[0] - 4.0 * g[1] + 3.0 * g[2]),
      13.0 / 12.0 * sq(g[1] - 2.0 * g[2] + g[3]) + 0.25 * sq(g[1] - g[3]),
      13.0 / 12.0 * sq(g[2] - 2.0 * g[3] + g[4]) + 0.25 * sq(3.0 * g[2] - 4.0 * g[3] + g[4]),
  };
  std::array<double, 3> a{};
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    a[k] = ideal[k] / std::pow(epsilon + is[k], power);
    sum += a[k];
  }
  for (double& w : a) w /= sum;
  return a;
}

/// Third-order CWENO: weighted blend of the three quadratics interpolating the
/// averages of cells (i-2..i), (i-1..i+1), (i..i+2), all expanded about x_i.
inline CellPolynomial cweno3(const Stencil& g, double dx, double center) {
  const auto w = cweno3_weights(g);
  std::array<double, 3> gt{}, gd{}, gdd{};
  for (int k = 0; k < 3; ++k) {
    const double lm = g[k], c = g[k + 1], rp = g[k + 2];
    gt[k] = c - (lm - 2.0 * c + rp) / 24.0;
    gd[k] = (rp - lm) / (2.0 * dx);
    gdd[k] = (rp - 2.0 * c + lm) / (dx * dx);
  }
  CellPolynomial p;
  p.center = center;
  p.coeffs[0] = w[0] * (gt[0] + dx * gd[0] + 0.5 * dx * dx * gdd[0]) + w[1] * gt[1] +
                w[2] * (gt[2] - dx * gd[2] + 0.5 * dx * dx * gdd[2]);
  p.coeffs[1] = w[0] * (gd[0] + dx * gdd[0]) + w[1] * gd[1] + w[2] * (gd[2] - dx * gdd[2]);
  p.coeffs[2] = 0.5 * (w[0] * gdd[0] + w[1] * gdd[1] + w[2] * gdd[2]);
  return p;
}

namespace cweno5_detail {
// Order: left, centre, right quadratics, then the central quartic correction.
inline constexpr std::array<double, 4> ideal{1.0 / 8.0, 1.0 / 4.0, 1.0 / 8.0, 1.0 / 2.0};
inline constexpr double epsilon = 1e-6;
inline constexpr int power = 2;

struct Pieces {
  std::array<double, 5> opt;
  std::array<double, 3> left, centre, right;
};

inline Pieces pieces(const Stencil& g, double dx) {
  const double gm2 = g[0], gm1 = g[1], g0 = g[2], gp1 = g[3], gp2 = g[4];
  const double dx2 = dx * dx, dx3 = dx2 * dx, dx4 = dx2 * dx2;
  Pieces p;
  p.opt = {
      g0 - 29.0 / 480.0 * ((gp1 - g0) + (gm1 - g0)) + 3.0 / 640.0 * ((gp2 - g0) + (gm2 - g0)),
      (34.0 * (gp1 - gm1) + 5.0 * (gm2 - gp2)) / (48.0 * dx),
      (gm2 + 22.0 * g0 + gp2 - 12.0 * (gp1 + gm1)) / (-16.0 * dx2),
      (2.0 * (gp1 - gm1) + (gm2 - gp2)) / (-12.0 * dx3),
      (gm2 + 6.0 * g0 + gp2 - 4.0 * (gp1 + gm1)) / (24.0 * dx4),
  };
  p.left = {g0 + ((gm1 - g0) - 0.5 * (gm2 - g0)) / 12.0, (3.0 * g0 - 4.0 * gm1 + gm2) / (2.0 * dx),
            (g0 - 2.0 * gm1 + gm2) / (2.0 * dx2)};
  p.centre = {g0 - ((gm1 - g0) + (gp1 - g0)) / 24.0, (gp1 - gm1) / (2.0 * dx),
              (gp1 - 2.0 * g0 + gm1) / (2.0 * dx2)};
  p.right = {g0 + ((gp1 - g0) - 0.5 * (gp2 - g0)) / 12.0, (3.0 * g0 - 4.0 * gp1 + gp2) / (-2.0 * dx),
             (g0 - 2.0 * gp1 + gp2) / (2.0 * dx2)};
  return p;
}

inline std::array<double, 4> weights(const Pieces& p, double dx) {
  const double dx2 = dx * dx, dx4 = dx2 * dx2;
  auto is_quadratic = [&](const std::array<double, 3>& q) {
    return q[1] * q[1] * dx2 + 13.0 / 3.0 * q[2] * q[2] * dx4;
  };
  const std::array<double, 4> is{
      is_quadratic(p.left),
      is_quadratic(p.centre),
      is_quadratic(p.right),
      p.opt[1] * p.opt[1] * dx2 + (13.0 / 3.0 * p.opt[2] * p.opt[2] + 0.5 * p.opt[1] * p.opt[3]) * dx4,
  };
  std::array<double, 4> a{};
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    a[k] = ideal[k] / std::pow(epsilon + is[k], power);
    sum += a[k];
  }
  for (double& w : a) w /= sum;
  return a;
}
} // namespace cweno5_detail

/// Nonlinear weights (left, centre, right, quartic correction) of the
/// fifth-order reconstruction.
inline std::array<double, 4> cweno5_weights(const Stencil& g, double dx) {
  return cweno5_detail::weights(cweno5_detail::pieces(g, dx), dx);
}

/// Fifth-order CWENO: R = g_opt + sum_k (w_k - C_k) g_k, with the correction
/// polynomial g_c = (g_opt - C_1 g_1 - C_2 g_2 - C_3 g_3) / C_c.
inline CellPolynomial cweno5(const Stencil& g, double dx, double center) {
  using namespace cweno5_detail;
  const auto p = pieces(g, dx);
  const auto w = weights(p, dx);
  std::array<double, 5> gc{};
  for (int j = 0; j < 5; ++j) {
    double q = p.opt[j];
    if (j < 3) q -= ideal[0] * p.left[j] + ideal[1] * p.centre[j] + ideal[2] * p.right[j];
    gc[j] = q / ideal[3];
  }
  CellPolynomial r;
  r.center = center;
  for (int j = 0; j < 5; ++j) {
    double c = p.opt[j] + (w[3] - ideal[3]) * gc[j];
    if (j < 3)
      c += (w[0] - ideal[0]) * p.left[j] + (w[1] - ideal[1]) * p.centre[j] + (w[2] - ideal[2]) * p.right[j];
    r.coeffs[j] = c;
  }
  return r;
}

inline CellPolynomial reconstruct(ReconstructionOrder order, const Stencil& g, double dx, double center) {
  switch (order) {
    case ReconstructionOrder::first: return CellPolynomial::constant(center, g[2]);
    case ReconstructionOrder::third: return cweno3(g, dx, center);
    case ReconstructionOrder::fifth: return cweno5(g, dx, center);
  }
  return CellPolynomial::constant(center, g[2]);
}

/// Points (offsets from the cell centre, in units of dx) where reconstructed
/// densities must be nonnegative: cell faces, Gauss nodes, the nodes of the
/// Richardson source quadrature, and the interior 4-point Gauss-Lobatto nodes
/// that back the positivity time-step bound.
struct EvalPointSet {
  std::vector<double> offsets;
  /// Smallest weight of a positive quadrature supported on the set that
  /// includes both faces; scales the positivity time-step bound.
  double weight_floor = 1.0;

  static EvalPointSet for_order(ReconstructionOrder order) {
    EvalPointSet set;
    if (order == ReconstructionOrder::first) {
      set.offsets = {-0.5, 0.5};
      set.weight_floor = 1.0;
      return set;
    }
    const double g = 0.5 * std::sqrt(0.6);
    const double lobatto = 0.5 / std::sqrt(5.0);
    set.offsets = {-0.5, 0.5, -g, 0.0, g, -lobatto, lobatto};
    if (order == ReconstructionOrder::fifth) {
      set.offsets.push_back(-1.0 / 6.0);
      set.offsets.push_back(1.0 / 6.0);
    }
    set.weight_floor = 1.0 / 12.0;
    return set;
  }
};

/// Relative floor used by the density limiter under the log pressure law.
/// ln(R) at a point where the limited polynomial touches zero is ill
/// conditioned: round-off in theta then moves K by O(1). Keeping
/// R >= kLogLimiterFloor * g_i bounds that sensitivity.
inline constexpr double kLogLimiterFloor = 1e-3;

struct LimitedPolynomial {
  CellPolynomial poly;
  double theta = 1.0;
};

/// Scales R toward the cell average g_i so that it is at least floor * g_i on
/// `points`: R~ = theta (R - g_i) + g_i with
/// theta = min((1 - floor) |g_i| / |m_i - g_i|, 1). floor = 0 is the plain
/// positivity limiter.
inline LimitedPolynomial positivity_limit(const CellPolynomial& poly, double g_i, const EvalPointSet& points,
                                          double dx, double floor = 0.0) {
  if (g_i < 0.0) throw NumericalFault("positivity limiter received a negative cell average");
  if (g_i == 0.0) return {CellPolynomial::constant(poly.center, 0.0), 0.0};
  double m_i = std::numeric_limits<double>::infinity();
  for (double o : points.offsets) m_i = std::min(m_i, poly.at(o, dx));
  if (m_i >= floor * g_i) return {poly, 1.0};
  const double theta = std::min((1.0 - floor) * std::abs(g_i) / std::abs(m_i - g_i), 1.0);
  LimitedPolynomial out{poly, theta};
  for (double& c : out.poly.coeffs) c *= theta;
  out.poly.coeffs[0] += (1.0 - theta) * g_i;
  return out;
}

/// Blends the momentum reconstruction toward u_i R~rho (u_i = m_i / g_i),
/// which keeps the cell average, until every point velocity
/// R^m / R~rho on `points` lies in [u_lo, u_hi]. A point where R~rho
/// vanishes admits only the blended end state. Returns the blend factor.
inline double velocity_limit(CellPolynomial& mom, const CellPolynomial& rho, double g_i, double m_i, double u_lo,
                             double u_hi, const EvalPointSet& points, double dx) {
  const double u_i = velocity_of(g_i, m_i);
  CellPolynomial base = rho;
  for (double& c : base.coeffs) c *= u_i;
  double phi = 1.0;
  if (g_i > kDryThreshold) {
    for (double o : points.offsets) {
      const double r = std::max(rho.at(o, dx), 0.0);
      const double dev = mom.at(o, dx) - base.at(o, dx);
      if (dev > 0.0) phi = std::min(phi, std::max(u_hi - u_i, 0.0) * r / dev);
      else if (dev < 0.0) phi = std::min(phi, std::min(u_lo - u_i, 0.0) * r / dev);
    }
  } else {
    phi = 0.0;
  }
  if (phi >= 1.0) return 1.0;
  for (int k = 0; k < 5; ++k) mom.coeffs[k] = base.coeffs[k] + phi * (mom.coeffs[k] - base.coeffs[k]);
  return phi;
}

/// R^H(x) = R^K(x) - Pi'(R^rho(x)). For the log pressure law the value is only
/// defined where the reconstructed density exceeds kLogDensityFloor.
struct HReconstruction {
  const CellPolynomial* K;
  const CellPolynomial* rho;
  PressureLaw law;
  double dry_threshold = kLogDensityFloor;

  std::optional<double> operator()(double x) const {
    const double r = (*rho)(x);
    if (law.isothermal() && !(r > dry_threshold)) return std::nullopt;
    return (*K)(x) - law.pi_prime(std::max(r, 0.0));
  }
};

inline HReconstruction reconstruct_H(const CellPolynomial& rk, const CellPolynomial& rrho, const PressureLaw& law) {
  return HReconstruction{&rk, &rrho, law};
}

/// Fills the five-cell stencil around cell i using the grid's ghost rule.
inline Stencil gather_stencil(std::span<const double> values, const Grid& grid, int i) {
  Stencil s{};
  for (int k = -2; k <= 2; ++k) s[k + 2] = values[grid.wrap(i + k)];
  return s;
}

} // namespace wbfv
