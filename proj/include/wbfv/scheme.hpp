#pragma once

#include "convolution.hpp"
#include "errors.hpp"
#include "flux.hpp"
#include "freeenergy.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wbfv {

/// Per-cell reconstructions over the mesh plus one ghost cell on each side.
/// Index k holds cell k - 1.
struct Reconstruction {
  std::vector<CellPolynomial> rho;
  std::vector<CellPolynomial> mom;
  std::vector<CellPolynomial> K;
  /// Velocity bounds per cell, see Scheme::reconstruct.
  std::vector<double> u_lo;
  std::vector<double> u_hi;

  const CellPolynomial& rho_at(int cell) const { return rho[cell + 1]; }
  const CellPolynomial& mom_at(int cell) const { return mom[cell + 1]; }
  const CellPolynomial& K_at(int cell) const { return K[cell + 1]; }

  /// Point velocity R^m / R^rho, clipped to the cell's admissible range.
  double velocity(int cell, double offset, double dx) const {
    const double rr = std::max(rho_at(cell).at(offset, dx), 0.0);
    return std::clamp(velocity_of(rr, mom_at(cell).at(offset, dx)), u_lo[cell + 1], u_hi[cell + 1]);
  }
};

/// Time derivative of the conserved averages.
struct Derivative {
  std::vector<double> rho;
  std::vector<double> mom;
};

/// Momentum right-hand side split into its pieces (all already divided by dx).
struct RhsBudget {
  std::vector<double> flux;         ///< -(F^-_{i+1/2} - F^+_{i-1/2}) / dx
  std::vector<double> steady_flux;  ///< +(F(U*(x_{i+1/2})) - F(U*(x_{i-1/2}))) / dx
  std::vector<double> source;       ///< Richardson-integrated source correction
  std::vector<double> damping;
};

/// High-order well-balanced finite-volume discretisation of
///   rho_t + (rho u)_x = 0,
///   (rho u)_t + (rho u^2 + P)_x = -rho H_x - damping,  H = V + W * rho,
/// carrying the free-energy variation K alongside the conserved variables.
/// Density ratio marking a cell as adjacent to vacuum for the velocity limiter.
inline constexpr double kVacuumRatio = 0.5;

class Scheme {
public:
  Scheme(Grid grid, ModelSpec model, ReconstructionOrder order, FluxKind flux,
         ConvolutionMethod convolution = ConvolutionMethod::automatic)
      : grid_(grid), model_(std::move(model)), order_(order), flux_(flux),
        points_(EvalPointSet::for_order(order)) {
    if (model_.pressure.isothermal()) limiter_floor_ = kLogLimiterFloor;
    model_.validate();
    if (model_.kernel.active()) interaction_.emplace(make_kernel_convolution(grid_, model_.kernel, convolution));
    if (model_.damping.alignment != Alignment::none) {
      const Damping d = model_.damping;
      communication_.emplace(
          grid_, [d](double x) { return d.psi(x); }, [d](double) { return d.psi(0.0); }, convolution);
    }
  }

  const Grid& grid() const { return grid_; }
  const ModelSpec& model() const { return model_; }
  const PressureLaw& law() const { return model_.pressure; }
  ReconstructionOrder order() const { return order_; }
  FluxKind flux() const { return flux_; }
  const EvalPointSet& points() const { return points_; }
  double limiter_floor() const { return limiter_floor_; }
  const NodeConvolution* interaction() const { return interaction_ ? &*interaction_ : nullptr; }

  /// Cell averages from pointwise initial data, K from the discrete free-energy
  /// variation with Gauss nodes for both the average and the convolution.
  FieldState initialize(const std::function<double(double)>& rho0, const std::function<double(double)>& mom0) const {
    const int n = grid_.size();
    FieldState s(n);
    const auto x = gauss_nodes(grid_);
    std::vector<double> rho_nodes(x.size()), mom_nodes(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      rho_nodes[k] = rho0(x[k]);
      mom_nodes[k] = mom0(x[k]);
      if (!(rho_nodes[k] >= 0.0) || !std::isfinite(rho_nodes[k]))
        throw InvalidInput("initial density must be finite and nonnegative at every quadrature node");
      if (law().isothermal() && !(rho_nodes[k] > 0.0))
        throw InvalidInput("log pressure law needs a strictly positive initial density");
    }
    s.rho = node_averages(rho_nodes);
    s.mom = node_averages(mom_nodes);
    const auto field = discrete_convolution(rho_nodes, grid_, model_.potential, interaction());
    s.K = compute_K(rho_nodes, field, law());
    return s;
  }

  /// Reconstructs density (positivity limited), momentum and K.
  ///
  /// Momentum is velocity limited against the neighbouring cell velocities.
  /// In cells whose density reconstruction dips below kVacuumRatio times the
  /// average the range is strict, which keeps outflow from draining momentum
  /// faster than mass. Elsewhere it is widened by its own width so smooth
  /// extrema are left alone.
  Reconstruction reconstruct(const FieldState& s) const {
    Reconstruction r;
    r.rho = reconstruct_density(s.rho, true);
    const int n = grid_.size();
    r.mom.resize(n + 2);
    r.K.resize(n + 2);
    r.u_lo.resize(n + 2);
    r.u_hi.resize(n + 2);
    auto cell_u = [&](int c) { const int w = grid_.wrap(c); return velocity_of(s.rho[w], s.mom[w]); };
    for (int c = -1; c <= n; ++c) {
      const int w = grid_.wrap(c);
      const auto& rho = r.rho[c + 1];
      auto [lo, hi] = std::minmax({cell_u(c - 1), cell_u(c), cell_u(c + 1)});
      double rho_min = std::numeric_limits<double>::infinity();
      for (double o : points_.offsets) rho_min = std::min(rho_min, rho.at(o, grid_.dx()));
      if (!(rho_min < kVacuumRatio * s.rho[w])) {
        const double width = hi - lo;
        lo -= width;
        hi += width;
      }
      r.mom[c + 1] = wbfv::reconstruct(order_, gather_stencil(s.mom, grid_, c), grid_.dx(), grid_.center(c));
      velocity_limit(r.mom[c + 1], rho, s.rho[w], s.mom[w], lo, hi, points_, grid_.dx());
      r.K[c + 1] = wbfv::reconstruct(order_, gather_stencil(s.K, grid_, c), grid_.dx(), grid_.center(c));
      r.u_lo[c + 1] = lo;
      r.u_hi[c + 1] = hi;
    }
    return r;
  }

  /// Limited density reconstructions; with `ghosts` the vector also holds the
  /// two ghost cells (index k = cell k - 1), otherwise index k = cell k.
  std::vector<CellPolynomial> reconstruct_density(std::span<const double> rho, bool ghosts = false) const {
    const int n = grid_.size();
    const int lo = ghosts ? -1 : 0, hi = ghosts ? n : n - 1;
    std::vector<CellPolynomial> out;
    out.reserve(hi - lo + 1);
    for (int c = lo; c <= hi; ++c) {
      const auto poly = wbfv::reconstruct(order_, gather_stencil(rho, grid_, c), grid_.dx(), grid_.center(c));
      out.push_back(positivity_limit(poly, rho[grid_.wrap(c)], points_, grid_.dx(), limiter_floor_).poly);
    }
    return out;
  }

  Derivative rhs(const FieldState& s, RhsBudget* budget = nullptr) const {
    return rhs(s, reconstruct(s), budget);
  }

  Derivative rhs(const FieldState& s, const Reconstruction& r, RhsBudget* budget = nullptr) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    const PressureLaw& P = law();

    std::vector<WellBalancedFlux> faces(n + 1);
    for (int f = 0; f <= n; ++f) {
      const TraceSide left = trace(r, f - 1, +0.5);
      const TraceSide right = trace(r, f, -0.5);
      faces[f] = wb_interface_flux(hydrostatic_states(left, right, P), flux_, P);
    }

    Derivative d{std::vector<double>(n), std::vector<double>(n)};
    std::vector<double> damp = damping_rhs(s, r);
    if (budget) {
      budget->flux.assign(n, 0.0);
      budget->steady_flux.assign(n, 0.0);
      budget->source.assign(n, 0.0);
      budget->damping = damp;
    }
    for (int i = 0; i < n; ++i) {
      const auto& rho = r.rho_at(i);
      const double rho_face_right = std::max(rho.at(0.5, dx), 0.0);
      const double rho_face_left = std::max(rho.at(-0.5, dx), 0.0);
      const Conserved flux_diff = faces[i + 1].minus - faces[i].plus;
      const double steady = P.pressure(rho_face_right) - P.pressure(rho_face_left);
      const double src = -source_correction(r, i, s.K[i]) / dx;
      d.rho[i] = -flux_diff.mass / dx;
      d.mom[i] = -(flux_diff.momentum - steady) / dx + src + damp[i];
      if (budget) {
        budget->flux[i] = -flux_diff.momentum / dx;
        budget->steady_flux[i] = steady / dx;
        budget->source[i] = src;
      }
      if (!std::isfinite(d.rho[i]) || !std::isfinite(d.mom[i]))
        throw NumericalFault("non-finite right-hand side in cell " + std::to_string(i));
    }
    return d;
  }

  /// Momentum contribution of linear damping and nonlocal alignment.
  std::vector<double> damping_rhs(const FieldState& s, const Reconstruction& r) const {
    const int n = grid_.size();
    std::vector<double> out(n, 0.0);
    const Damping& dmp = model_.damping;
    if (dmp.gamma > 0.0)
      for (int i = 0; i < n; ++i) out[i] = -dmp.gamma * s.mom[i];
    if (dmp.alignment == Alignment::none) return out;

    const double dx = grid_.dx();
    std::vector<double> rho_nodes(3 * n), u_nodes(3 * n), flux_nodes(3 * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) {
        const double rr = std::max(r.rho_at(i).at(GaussRule::offsets[j], dx), 0.0);
        const double u = r.velocity(i, GaussRule::offsets[j], dx);
        rho_nodes[3 * i + j] = rr;
        u_nodes[3 * i + j] = u;
        flux_nodes[3 * i + j] = rr * u;
      }
    const auto psi_rho = communication_->apply(rho_nodes);
    const auto psi_flux = communication_->apply(flux_nodes);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) {
        const int k = 3 * i + j;
        double f = -rho_nodes[k] * (u_nodes[k] * psi_rho[k] - psi_flux[k]);
        if (dmp.alignment == Alignment::motsch_tadmor) f = psi_rho[k] > kDryThreshold ? f / psi_rho[k] : 0.0;
        acc += GaussRule::weights[j] * f;
      }
      out[i] += acc;
    }
    return out;
  }

  /// K^{new}_i = K^{ref}_i + Gauss average of [Pi'(R^new) - Pi'(R^ref)] plus the
  /// Gauss-node convolution of W with (R^new - R^ref). Both density vectors
  /// index interior cells only.
  std::vector<double> update_K(std::span<const double> K_ref, const std::vector<CellPolynomial>& rho_ref,
                               const std::vector<CellPolynomial>& rho_new) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    std::vector<double> K(K_ref.begin(), K_ref.end());
    std::vector<double> delta(3 * n);
    for (int i = 0; i < n; ++i) {
      double dpi = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double a = rho_new[i].at(GaussRule::offsets[j], dx);
        const double b = rho_ref[i].at(GaussRule::offsets[j], dx);
        delta[3 * i + j] = a - b;
        dpi += GaussRule::weights[j] * (pi_prime_safe(a) - pi_prime_safe(b));
      }
      K[i] += dpi;
    }
    if (interaction_) {
      const auto dH = node_averages(interaction_->apply(delta));
      for (int i = 0; i < n; ++i) K[i] += dH[i];
    }
    return K;
  }

  /// Largest signal speed over all interface traces used by the time-step bound.
  double max_signal_speed(const Reconstruction& r) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    const PressureLaw& P = law();
    double vmax = 0.0;
    for (int c = 0; c < n; ++c)
      for (double o : {-0.5, 0.5}) {
        const double rr = std::max(r.rho_at(c).at(o, dx), 0.0);
        const double u = r.velocity(c, o, dx);
        double v;
        if (flux_ == FluxKind::llf) {
          const double a = P.sound_speed(rr);
          v = std::max(std::abs(u + a), std::abs(u - a));
        } else {
          v = std::abs(u) + std::max(std::pow(3.0, (P.exponent() - 1.0) / 4.0), kinetic_half_width(rr, P));
        }
        vmax = std::max(vmax, v);
      }
    return vmax;
  }

  /// H_i = K_i - Gauss average of Pi'(R^rho): cell averages of the potential
  /// implied by the current state.
  std::vector<double> potential_averages(const FieldState& s) const {
    const auto polys = reconstruct_density(s.rho);
    std::vector<double> H(s.K);
    for (int i = 0; i < grid_.size(); ++i)
      for (int j = 0; j < 3; ++j)
        H[i] -= GaussRule::weights[j] * pi_prime_safe(polys[i].at(GaussRule::offsets[j], grid_.dx()));
    return H;
  }

  double pi_prime_safe(double rho) const { return law().pi_prime_guarded(std::max(rho, 0.0), kLogDensityFloor); }

private:
  TraceSide trace(const Reconstruction& r, int cell, double offset) const {
    const double dx = grid_.dx();
    TraceSide t;
    t.rho = std::max(r.rho_at(cell).at(offset, dx), 0.0);
    t.u = r.velocity(cell, offset, dx);
    t.active = !(law().isothermal() && !(t.rho > kLogDensityFloor));
    if (t.active) t.H = r.K_at(cell).at(offset, dx) - law().pi_prime(t.rho);
    return t;
  }

  /// Integral over cell i of R^rho d(R^H) - rho* d(H*), with H* = K_i - Pi'(R^rho).
  double source_correction(const Reconstruction& r, int i, double K_i) const {
    if (order_ == ReconstructionOrder::first) return 0.0;
    const auto& rho = r.rho_at(i);
    const auto& K = r.K_at(i);
    auto rho_fn = [&](double x) { return std::max(rho(x), 0.0); };
    auto h_fn = [&](double x) { return K(x) - pi_prime_safe(rho(x)); };
    auto hstar_fn = [&](double x) { return K_i - pi_prime_safe(rho(x)); };
    const double a = grid_.face(i), b = grid_.face(i + 1);
    const SourceOrder q = order_ == ReconstructionOrder::third ? SourceOrder::fourth : SourceOrder::sixth;
    return richardson_source(q, rho_fn, h_fn, hstar_fn, a, b);
  }

  Grid grid_;
  ModelSpec model_;
  ReconstructionOrder order_;
  FluxKind flux_;
  EvalPointSet points_;
  std::optional<NodeConvolution> interaction_;
  std::optional<NodeConvolution> communication_;
  double limiter_floor_ = 0.0;
};

} // namespace wbfv
