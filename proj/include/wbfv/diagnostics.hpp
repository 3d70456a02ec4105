#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace wbfv {

struct Energies {
  double kinetic = 0.0;
  double free = 0.0;
  double total = 0.0;
};

/// Discrete kinetic, free and total energy on cell averages:
///   F = sum dx [Pi(rho_i) + V_i rho_i] + 1/2 sum_ij dx^2 W_ij rho_i rho_j,
/// with W_ij taken at cell centres and the diagonal from the kernel's self value.
class EnergyFunctional {
public:
  /// Beyond this many cells W_ij is evaluated on the fly instead of cached.
  static constexpr int kMaxCachedCells = 4096;

  EnergyFunctional(const Grid& grid, const ModelSpec& model) : grid_(grid), model_(model) {
    const int n = grid_.size();
    V_.resize(n);
    for (int i = 0; i < n; ++i) V_[i] = model_.potential(grid_.center(i));
    if (model_.kernel.active() && n <= kMaxCachedCells) {
      W_.resize(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) W_[static_cast<std::size_t>(i) * n + j] = kernel_entry(i, j);
    }
  }

  Energies operator()(const FieldState& s) const {
    const int n = grid_.size();
    const double dx = grid_.dx();
    Energies e;
    for (int i = 0; i < n; ++i) {
      const double rho = s.rho[i];
      e.kinetic += 0.5 * dx * rho * velocity_of(rho, s.mom[i]) * velocity_of(rho, s.mom[i]);
      e.free += dx * (model_.pressure.internal_energy(rho) + V_[i] * rho);
    }
    if (model_.kernel.active()) {
      double pair = 0.0;
      for (int i = 0; i < n; ++i) {
        if (s.rho[i] == 0.0) continue;
        double row = 0.0;
        for (int j = 0; j < n; ++j)
          row += (W_.empty() ? kernel_entry(i, j) : W_[static_cast<std::size_t>(i) * n + j]) * s.rho[j];
        pair += s.rho[i] * row;
      }
      e.free += 0.5 * dx * dx * pair;
    }
    e.total = e.kinetic + e.free;
    return e;
  }

private:
  double kernel_entry(int i, int j) const {
    if (i == j) return model_.kernel.self_value(grid_.dx());
    return model_.kernel(grid_.center(i) - grid_.center(j));
  }

  Grid grid_;
  ModelSpec model_;
  std::vector<double> V_;
  std::vector<double> W_;
};

inline Energies discrete_energies(const FieldState& s, const Grid& grid, const ModelSpec& model) {
  return EnergyFunctional(grid, model)(s);
}

/// Block averages of `fine` onto `factor` times fewer cells.
inline std::vector<double> restrict_average(std::span<const double> fine, int factor) {
  if (factor < 1 || fine.size() % static_cast<std::size_t>(factor) != 0)
    throw InvalidInput("fine grid is not an integer refinement of the coarse grid");
  std::vector<double> out(fine.size() / factor, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < factor; ++k) s += fine[i * factor + k];
    out[i] = s / factor;
  }
  return out;
}

/// sum |a_i - b_i| dx, restricting `b` onto the grid of `a` when it is finer.
inline double l1_error(std::span<const double> a, std::span<const double> b, double dx) {
  if (a.empty() || b.size() % a.size() != 0) throw InvalidInput("grids are not integer refinements");
  std::vector<double> bb = restrict_average(b, static_cast<int>(b.size() / a.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - bb[i]);
  return s * dx;
}

/// L1 distance of cell averages from a reference function sampled by `avg`.
template <class Avg>
double l1_error_fn(std::span<const double> a, const Grid& grid, Avg&& avg) {
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) s += std::abs(a[i] - avg(i));
  return s * grid.dx();
}

inline double wellbalance_residual(const FieldState& s0, const FieldState& s1, const Grid& grid) {
  if (s0.size() != s1.size()) throw InvalidInput("states live on different grids");
  return l1_error(s0.rho, s1.rho, grid.dx());
}

inline double observed_order(double coarse_error, double fine_error) {
  return std::log2(coarse_error / fine_error);
}

struct ConvergenceRow {
  int cells = 0;
  double error = 0.0;
  std::optional<double> order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;

  void add(int cells, double error) {
    ConvergenceRow r{cells, error, std::nullopt};
    if (!rows.empty() && rows.back().error > 0.0 && error > 0.0) r.order = observed_order(rows.back().error, error);
    rows.push_back(r);
  }

  std::optional<double> final_order() const { return rows.empty() ? std::nullopt : rows.back().order; }
};

/// Maximal runs [begin, end) of cells with density above the dry threshold.
struct Component {
  int begin = 0;
  int end = 0;
};

inline std::vector<Component> wet_components(std::span<const double> rho, double dry = kDryThreshold) {
  std::vector<Component> out;
  const int n = static_cast<int>(rho.size());
  for (int i = 0; i < n;) {
    if (!(rho[i] > dry)) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && rho[j] > dry) ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

/// Largest spread max K - min K over each wet component, ignoring `margin`
/// cells at either end of a component (the reconstruction front).
inline double K_spread_on_support(const FieldState& s, double dry = kDryThreshold, int margin = 0) {
  double spread = 0.0;
  for (const auto& c : wet_components(s.rho, dry)) {
    const int b = c.begin + margin, e = c.end - margin;
    if (e <= b) continue;
    const auto [lo, hi] = std::minmax_element(s.K.begin() + b, s.K.begin() + e);
    spread = std::max(spread, *hi - *lo);
  }
  return spread;
}

/// Flags blowup when the density exceeds a threshold or dt collapses.
class BlowupMonitor {
public:
  static constexpr double kDefaultFactor = 1e3;
  static constexpr double kDefaultDtMin = 1e-10;

  BlowupMonitor(double rho_threshold, double dt_min = kDefaultDtMin) : rho_max_(rho_threshold), dt_min_(dt_min) {}

  static BlowupMonitor from_initial(const FieldState& s0, double factor = kDefaultFactor,
                                    double dt_min = kDefaultDtMin) {
    const double m = s0.rho.empty() ? 0.0 : *std::max_element(s0.rho.begin(), s0.rho.end());
    return BlowupMonitor(factor * m, dt_min);
  }

  bool check(const FieldState& s, double dt) const {
    if (!(dt >= dt_min_)) return true;
    for (double r : s.rho)
      if (!(r <= rho_max_)) return true;
    return false;
  }

  double rho_threshold() const { return rho_max_; }
  double dt_min() const { return dt_min_; }

private:
  double rho_max_;
  double dt_min_;
};

} // namespace wbfv
