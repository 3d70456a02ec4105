#pragma once

#include "errors.hpp"

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace wbfv {

/// Density below which velocity is taken as zero and a cell counts as dry.
inline constexpr double kDryThreshold = 1e-10;

/// Densities at or below this are vacuum for the log pressure law, whose
/// variation ln(rho) is evaluated down to here. Kept far below kDryThreshold
/// so that resolved Gaussian tails stay in the well-balanced regime.
inline constexpr double kLogDensityFloor = 1e-300;

enum class Boundary { periodic, outflow };

inline Boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "outflow") return Boundary::outflow;
  throw InvalidInput("unknown boundary '" + std::string(name) + "'");
}

inline std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "outflow";
}

/// Uniform 1D mesh. Cells are 0-based; cell i spans [face(i), face(i+1)].
class Grid {
public:
  Grid(int n_cells, double x_left, double x_right, Boundary boundary = Boundary::periodic)
      : n_cells_(n_cells), x_left_(x_left), x_right_(x_right), boundary_(boundary) {
    if (n_cells <= 0) throw InvalidInput("grid needs at least one cell");
    if (!(x_right > x_left)) throw InvalidInput("grid needs x_right > x_left");
    dx_ = (x_right - x_left) / n_cells;
  }

  int size() const { return n_cells_; }
  double dx() const { return dx_; }
  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  double length() const { return x_right_ - x_left_; }
  Boundary boundary() const { return boundary_; }

  double center(int i) const { return x_left_ + (i + 0.5) * dx_; }
  double face(int i) const { return x_left_ + i * dx_; }

  /// Maps an index that may fall into the ghost layer back onto the mesh.
  int wrap(int i) const {
    if (boundary_ == Boundary::periodic) {
      int r = i % n_cells_;
      return r < 0 ? r + n_cells_ : r;
    }
    return i < 0 ? 0 : (i >= n_cells_ ? n_cells_ - 1 : i);
  }

private:
  int n_cells_;
  double x_left_;
  double x_right_;
  double dx_;
  Boundary boundary_;
};

/// Cell averages of density, momentum and free-energy variation.
struct FieldState {
  std::vector<double> rho;
  std::vector<double> mom;
  std::vector<double> K;
  double t = 0.0;

  FieldState() = default;
  explicit FieldState(std::size_t n) : rho(n, 0.0), mom(n, 0.0), K(n, 0.0) {}

  std::size_t size() const { return rho.size(); }

  bool finite() const {
    for (std::size_t i = 0; i < rho.size(); ++i)
      if (!std::isfinite(rho[i]) || !std::isfinite(mom[i]) || !std::isfinite(K[i])) return false;
    return true;
  }
};

/// Velocity from averaged density and momentum; zero in vacuum.
inline double velocity_of(double rho, double mom, double dry_threshold = kDryThreshold) {
  return rho > dry_threshold ? mom / rho : 0.0;
}

inline double total_mass(const FieldState& s, const Grid& g) {
  double m = 0.0;
  for (double r : s.rho) m += r;
  return m * g.dx();
}

inline double total_momentum(const FieldState& s, const Grid& g) {
  double m = 0.0;
  for (double q : s.mom) m += q;
  return m * g.dx();
}

} // namespace wbfv
