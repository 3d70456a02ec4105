#pragma once

#include "convolution.hpp"
#include "errors.hpp"
#include "flux.hpp"
#include "grid.hpp"
#include "model.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace wbfv {

/// Everything that determines a run. Built-in scenarios fill in defaults that
/// a config file may override key by key.
struct ScenarioConfig {
  std::string id = "custom";
  std::string initial = "default";  ///< built-ins: default | steady; custom: constant | gaussian
  double mass = 1.0;

  int cells = 200;
  double x_left = -5.0;
  double x_right = 5.0;
  Boundary boundary = Boundary::periodic;

  double t_end = 1.0;
  double cfl = 0.7;
  std::vector<double> snapshots;
  double dt_min = 1e-10;
  double blowup_factor = 1e3;
  double blowup_rho = 0.0;  ///< absolute threshold; 0 defers to the next two knobs
  /// Threshold as a fraction of the total mass held by a single cell,
  /// i.e. fraction * mass / dx; 0 means blowup_factor * initial max.
  double blowup_mass_fraction = 0.0;
  int energy_every = 1;

  int order = 3;
  std::string flux = "auto";
  ConvolutionMethod convolution = ConvolutionMethod::automatic;

  ModelSpec model;

  // custom initial data
  double ic_center = 0.0;
  double ic_width = 1.0;
  double ic_velocity = 0.0;

  std::string output_dir;

  Grid grid() const { return Grid(cells, x_left, x_right, boundary); }
  FluxKind flux_kind() const { return resolve_flux(flux, model.pressure); }

  void validate() const {
    model.validate();
    (void)grid();
    (void)flux_kind();
    if (order != 1 && order != 3 && order != 5) throw InvalidInput("order must be 1, 3 or 5");
    if (!(t_end >= 0.0)) throw InvalidInput("t_end must be >= 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw InvalidInput("cfl must lie in (0, 1]");
    if (!(mass > 0.0)) throw InvalidInput("mass must be positive");
    if (!(dt_min > 0.0)) throw InvalidInput("dt_min must be positive");
    if (!(blowup_mass_fraction >= 0.0 && blowup_mass_fraction <= 1.0))
      throw InvalidInput("blowup_mass_fraction must lie in [0, 1]");
    if (energy_every < 0) throw InvalidInput("energy_every must be >= 0");
    if (!(ic_width > 0.0)) throw InvalidInput("initial width must be positive");
    for (double t : snapshots)
      if (!(t >= 0.0)) throw InvalidInput("snapshot times must be >= 0");
  }
};

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"ex31", "ex32", "ex33a", "ex33b", "ex34",
                                            "ex35a", "ex35b", "ex35c", "custom"};
  return ids;
}

inline std::string_view scenario_summary(std::string_view id) {
  if (id == "ex31") return "isothermal gas in a quadratic external potential";
  if (id == "ex32") return "isothermal gas with quadratic interaction kernel";
  if (id == "ex33a") return "shallow water with vacuum, single well";
  if (id == "ex33b") return "shallow water with vacuum, double well";
  if (id == "ex34") return "two groups under linear, Cucker-Smale or Motsch-Tadmor damping";
  if (id == "ex35a") return "hydrodynamic Keller-Segel, log kernel, subcritical mass 0.1";
  if (id == "ex35b") return "hydrodynamic Keller-Segel, log kernel, supercritical mass 3";
  if (id == "ex35c") return "Keller-Segel with P = 3 rho^m, compactly supported steady state";
  if (id == "custom") return "user-defined model and Gaussian or constant initial data";
  return "";
}

inline ScenarioConfig builtin_scenario(std::string_view id) {
  ScenarioConfig c;
  c.id = std::string(id);
  c.model.damping.gamma = 1.0;
  if (id == "ex31") {
    c.model.potential = ExternalPotential::quadratic();
    c.t_end = 12.0;
    c.snapshots = {0.0, 0.5, 2.0, 12.0};
  } else if (id == "ex32") {
    c.x_left = -10.0;
    c.x_right = 10.0;
    c.model.kernel = InteractionKernel::quadratic();
    c.t_end = 12.0;
    c.snapshots = {0.0, 0.5, 2.0, 12.0};
  } else if (id == "ex33a" || id == "ex33b") {
    c.model.pressure = PressureLaw(2.0);
    c.model.potential = id == "ex33a" ? ExternalPotential::quadratic() : ExternalPotential::double_well();
    c.t_end = 40.0;
    c.snapshots = {0.0, 1.0, 3.0, 10.0, 40.0};
  } else if (id == "ex34") {
    c.x_left = -5.0;
    c.x_right = 14.0;
    c.model.kernel = InteractionKernel::morse();
    c.t_end = 1.0;
    c.snapshots = {0.0, 0.5, 1.0};
  } else if (id == "ex35a" || id == "ex35b") {
    c.x_left = -8.0;
    c.x_right = 8.0;
    c.model.kernel = InteractionKernel::log();
    c.mass = id == "ex35a" ? 0.1 : 3.0;
    c.t_end = id == "ex35a" ? 20.0 : 10.0;
    if (id == "ex35b") c.blowup_mass_fraction = 0.5;
    c.snapshots = id == "ex35a" ? std::vector<double>{0.0, 1.0, 5.0, 20.0} : std::vector<double>{0.0, 2.0, 5.0, 7.0};
  } else if (id == "ex35c") {
    c.x_left = -8.0;
    c.x_right = 8.0;
    c.model.pressure = PressureLaw(2.0, 3.0);
    c.model.kernel = InteractionKernel::log();
    c.t_end = 250.0;
    c.snapshots = {0.0, 10.0, 50.0, 250.0};
  } else if (id == "custom") {
    c.model.damping.gamma = 0.0;
    c.initial = "constant";
  } else {
    throw InvalidInput("unknown scenario '" + std::string(id) + "'");
  }
  return c;
}

/// Pointwise initial density and momentum.
struct InitialData {
  std::function<double(double)> rho;
  std::function<double(double)> mom;
};

/// Integral of f over the grid with the same Gauss rule used for the cell
/// averages, so normalised data carries exactly the requested discrete mass.
inline double discrete_integral(const std::function<double(double)>& f, const Grid& grid) {
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) s += gauss_cell_average(f, grid.center(i), grid.dx());
  return s * grid.dx();
}

inline std::function<double(double)> normalized(std::function<double(double)> f, const Grid& grid, double mass) {
  const double scale = mass / discrete_integral(f, grid);
  return [f = std::move(f), scale](double x) { return scale * f(x); };
}

inline InitialData initial_data(const ScenarioConfig& c) {
  const Grid grid = c.grid();
  const std::string& id = c.id;
  const bool steady = c.initial == "steady";
  if (c.initial != "default" && !(steady && (id == "ex31" || id == "ex32")) && id != "custom")
    throw InvalidInput("initial '" + c.initial + "' is not available for scenario " + id);
  auto at_rest = [](double) { return 0.0; };

  if (id == "ex31" || id == "ex32") {
    std::function<double(double)> f;
    if (steady) {
      f = [](double x) { return std::exp(-0.5 * x * x); };
    } else if (id == "ex31") {
      f = [](double x) { return std::exp(-0.5 * x * x) + 0.1 * std::exp(-5.0 * (x + 3.0) * (x + 3.0)); };
    } else {
      f = [](double x) {
        return std::exp(-0.5 * x * x) + 0.05 * std::exp(-5.0 * (x + 3.0) * (x + 3.0)) +
               0.05 * std::exp(-5.0 * (x - 3.0) * (x - 3.0));
      };
    }
    return {normalized(f, grid, c.mass), at_rest};
  }
  if (id == "ex33a" || id == "ex33b") {
    const double x0 = id == "ex33a" ? 0.0 : 1.5;
    auto rho = normalized([x0](double x) { return std::exp(-(x - x0) * (x - x0) / 16.0); }, grid, c.mass);
    return {rho, [](double x) { return -0.1 * std::sin(std::numbers::pi * x / 10.0); }};
  }
  if (id == "ex34") {
    auto big = normalized([](double x) { return std::exp(-0.5 * (x + 1.0) * (x + 1.0)); }, grid, 0.9 * c.mass);
    auto small = normalized([](double x) { return std::exp(-(x - 11.0) * (x - 11.0)); }, grid, 0.1 * c.mass);
    auto rho = [big, small](double x) { return big(x) + small(x); };
    return {rho, [rho](double x) { return (x < 5.0 ? 2.0 : -2.0) * rho(x); }};
  }
  if (id == "ex35a" || id == "ex35b" || id == "ex35c") {
    return {normalized([](double x) { return std::exp(-x * x / 16.0); }, grid, c.mass), at_rest};
  }
  // custom
  const double u = c.ic_velocity;
  std::function<double(double)> rho;
  if (c.initial == "constant") {
    rho = [level = c.mass / grid.length()](double) { return level; };
  } else if (c.initial == "gaussian") {
    const double x0 = c.ic_center, w = c.ic_width;
    rho = normalized([x0, w](double x) { return std::exp(-0.5 * (x - x0) * (x - x0) / (w * w)); }, grid, c.mass);
  } else {
    throw InvalidInput("custom scenario needs initial = constant or gaussian");
  }
  return {rho, [rho, u](double x) { return u * rho(x); }};
}

} // namespace wbfv
