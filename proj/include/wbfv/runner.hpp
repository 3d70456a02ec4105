#pragma once

#include "config.hpp"
#include "diagnostics.hpp"
#include "scenarios.hpp"
#include "scheme.hpp"
#include "timeint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wbfv {

inline constexpr std::string_view kVersion = "1.0.0";

enum class RunStatus { ok, blowup, fault };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::blowup: return "blowup";
    case RunStatus::fault: return "fault";
  }
  return "?";
}

struct EnergySample {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double total_energy = 0.0;
  double free_energy = 0.0;
  double max_rho = 0.0;
  double min_rho = 0.0;
};

struct Snapshot {
  double t = 0.0;
  FieldState state;
};

struct RunReport {
  RunStatus status = RunStatus::ok;
  std::string message;
  FieldState initial;
  FieldState final;
  std::vector<Snapshot> snapshots;
  std::vector<EnergySample> energy;
  long steps = 0;
  double min_rho_seen = 0.0;  ///< smallest cell density over every completed step
  std::optional<double> blowup_time;
  double blowup_threshold = 0.0;
  double wall_seconds = 0.0;
};

struct RunOptions {
  /// Called after every completed step.
  std::function<void(const FieldState&, long step, double dt)> observer;
};

inline Scheme make_scheme(const ScenarioConfig& c) {
  return Scheme(c.grid(), c.model, order_from_int(c.order), c.flux_kind(), c.convolution);
}

inline FieldState initial_state(const ScenarioConfig& c, const Scheme& scheme) {
  const InitialData ic = initial_data(c);
  return scheme.initialize(ic.rho, ic.mom);
}

/// Runs a scenario to t_end (or until blowup or a numerical fault) and
/// collects snapshots and the energy time series in memory.
inline RunReport run(const ScenarioConfig& c, const RunOptions& opt = {}) {
  c.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const Scheme scheme = make_scheme(c);
  const Grid& grid = scheme.grid();
  const EnergyFunctional energy(grid, c.model);

  RunReport rep;
  FieldState s = initial_state(c, scheme);
  rep.initial = s;
  rep.min_rho_seen = *std::min_element(s.rho.begin(), s.rho.end());
  const BlowupMonitor monitor =
      c.blowup_rho > 0.0             ? BlowupMonitor(c.blowup_rho, c.dt_min)
      : c.blowup_mass_fraction > 0.0 ? BlowupMonitor(c.blowup_mass_fraction * c.mass / grid.dx(), c.dt_min)
                                     : BlowupMonitor::from_initial(s, c.blowup_factor, c.dt_min);
  rep.blowup_threshold = monitor.rho_threshold();

  std::vector<double> snaps;
  for (double t : c.snapshots)
    if (t <= c.t_end) snaps.push_back(t);
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  auto sample = [&](long step, double dt) {
    const Energies e = energy(s);
    const auto [lo, hi] = std::minmax_element(s.rho.begin(), s.rho.end());
    rep.energy.push_back({step, s.t, dt, total_mass(s, grid), total_momentum(s, grid), e.total, e.free, *hi, *lo});
  };
  auto take_snapshots = [&] {
    while (next_snap < snaps.size() && snaps[next_snap] <= s.t + 1e-12 * std::max(1.0, c.t_end)) {
      rep.snapshots.push_back({snaps[next_snap], s});
      ++next_snap;
    }
  };

  if (c.energy_every > 0) sample(0, 0.0);
  take_snapshots();

  long step = 0;
  const double t_tol = 1e-14 * std::max(1.0, c.t_end);
  try {
    while (s.t < c.t_end - t_tol) {
      const Reconstruction r = scheme.reconstruct(s);
      double dt = compute_dt(scheme, r, c.cfl);
      const bool tiny = dt < c.dt_min;
      double target = c.t_end;
      if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
      if (s.t + dt > target) dt = target - s.t;
      if (tiny) {
        rep.status = RunStatus::blowup;
        rep.blowup_time = s.t;
        rep.message = "time step collapsed below dt_min";
        break;
      }
      s = ssp_rk3_step(scheme, s, dt, &r);
      if (std::abs(s.t - target) <= t_tol) s.t = target;
      ++step;
      rep.min_rho_seen = std::min(rep.min_rho_seen, *std::min_element(s.rho.begin(), s.rho.end()));
      if (opt.observer) opt.observer(s, step, dt);
      const bool at_snapshot = next_snap < snaps.size() && s.t >= snaps[next_snap] - t_tol;
      const bool done = s.t >= c.t_end - t_tol;
      if (c.energy_every > 0 && (step % c.energy_every == 0 || at_snapshot || done)) sample(step, dt);
      take_snapshots();
      if (monitor.check(s, dt)) {
        rep.status = RunStatus::blowup;
        rep.blowup_time = s.t;
        rep.message = "density exceeded the blowup threshold";
        break;
      }
    }
  } catch (const NumericalFault& e) {
    rep.status = RunStatus::fault;
    rep.message = e.what();
  }
  rep.steps = step;
  rep.final = s;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return rep;
}

/// L1 density errors at t_end on each grid against a restricted fine reference.
inline ConvergenceTable study_convergence(ScenarioConfig base, const std::vector<int>& cells, int reference_cells) {
  base.snapshots.clear();
  base.energy_every = 0;
  ScenarioConfig ref_cfg = base;
  ref_cfg.cells = reference_cells;
  const RunReport ref = run(ref_cfg);
  if (ref.status != RunStatus::ok) throw NumericalFault("reference run failed: " + ref.message);
  ConvergenceTable table;
  for (int n : cells) {
    ScenarioConfig cfg = base;
    cfg.cells = n;
    const RunReport rep = run(cfg);
    if (rep.status != RunStatus::ok) throw NumericalFault("convergence run failed: " + rep.message);
    table.add(n, l1_error(rep.final.rho, ref.final.rho, cfg.grid().dx()));
  }
  return table;
}

struct WellBalanceRow {
  int order = 0;
  double residual = 0.0;
  double wall_seconds = 0.0;
};

/// Runs the steady initial data at each order and reports the L1 drift.
inline std::vector<WellBalanceRow> study_wellbalance(ScenarioConfig base, const std::vector<int>& orders = {3, 5}) {
  base.snapshots.clear();
  base.energy_every = 0;
  std::vector<WellBalanceRow> rows;
  for (int o : orders) {
    ScenarioConfig cfg = base;
    cfg.order = o;
    const RunReport rep = run(cfg);
    if (rep.status != RunStatus::ok) throw NumericalFault("well-balance run failed: " + rep.message);
    rows.push_back({o, wellbalance_residual(rep.initial, rep.final, cfg.grid()), rep.wall_seconds});
  }
  return rows;
}

namespace output_detail {
inline std::ostream& sci(std::ostream& os) { return os << std::scientific << std::setprecision(16); }

inline std::string snapshot_name(std::size_t k, double t) {
  std::ostringstream os;
  os << "snapshot_" << std::setw(3) << std::setfill('0') << k << "_t" << std::fixed << std::setprecision(4) << t
     << ".csv";
  return os.str();
}
} // namespace output_detail

inline void write_snapshot_csv(std::ostream& os, const Scheme& scheme, const FieldState& s) {
  const auto H = scheme.potential_averages(s);
  output_detail::sci(os);
  os << "x,rho,momentum,K,H\n";
  for (int i = 0; i < scheme.grid().size(); ++i)
    os << scheme.grid().center(i) << ',' << s.rho[i] << ',' << s.mom[i] << ',' << s.K[i] << ',' << H[i] << '\n';
}

inline void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& rows) {
  output_detail::sci(os);
  os << "step,t,dt,mass,momentum,total_energy,free_energy,max_rho,min_rho\n";
  for (const auto& r : rows)
    os << r.step << ',' << r.t << ',' << r.dt << ',' << r.mass << ',' << r.momentum << ',' << r.total_energy << ','
       << r.free_energy << ',' << r.max_rho << ',' << r.min_rho << '\n';
}

inline void write_manifest(std::ostream& os, const ScenarioConfig& c, const RunReport& rep,
                           const std::vector<std::string>& files) {
  write_config(os, c);
  os << "\n[run]\n"
     << "version = " << kVersion << "\n"
     << "status = " << to_string(rep.status) << "\n"
     << "message = " << rep.message << "\n"
     << "steps = " << rep.steps << "\n"
     << "t_final = " << config_detail::format_number(rep.final.t) << "\n"
     << "blowup = " << (rep.status == RunStatus::blowup ? "true" : "false") << "\n"
     << "blowup_time = " << (rep.blowup_time ? config_detail::format_number(*rep.blowup_time) : "") << "\n"
     << "blowup_threshold = " << config_detail::format_number(rep.blowup_threshold) << "\n"
     << "resolved_flux = " << to_string(c.flux_kind()) << "\n"
     << "dry_threshold = " << config_detail::format_number(kDryThreshold) << "\n"
     << "negative_tolerance = " << config_detail::format_number(kNegativeTolerance) << "\n"
     << "min_rho_seen = " << config_detail::format_number(rep.min_rho_seen) << "\n"
     << "wall_seconds = " << config_detail::format_number(rep.wall_seconds) << "\n"
     << "files = ";
  for (std::size_t i = 0; i < files.size(); ++i) os << (i ? "," : "") << files[i];
  os << "\n";
}

/// Writes snapshot CSVs, energy.csv and manifest.txt into `dir`.
inline std::vector<std::string> write_artifacts(const std::filesystem::path& dir, const ScenarioConfig& c,
                                                const RunReport& rep) {
  std::filesystem::create_directories(dir);
  const Scheme scheme = make_scheme(c);
  std::vector<std::string> files;
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    files.push_back(name);
    return f;
  };
  for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
    auto f = open(output_detail::snapshot_name(k, rep.snapshots[k].t));
    write_snapshot_csv(f, scheme, rep.snapshots[k].state);
  }
  if (rep.status != RunStatus::ok || rep.snapshots.empty() || rep.snapshots.back().t != rep.final.t) {
    auto f = open("final.csv");
    write_snapshot_csv(f, scheme, rep.final);
  }
  {
    auto f = open("energy.csv");
    write_energy_csv(f, rep.energy);
  }
  std::ofstream m(dir / "manifest.txt");
  if (!m) throw std::runtime_error("cannot write manifest");
  write_manifest(m, c, rep, files);
  return files;
}

} // namespace wbfv
