#include <wbfv/wbfv.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

enum ExitCode { kOk = 0, kBlowup = 2, kInvalidConfig = 3, kFault = 4 };

struct CommonOptions {
  std::string config;
  std::string scenario;
  std::optional<int> order;
  std::optional<int> cells;
  std::optional<double> t_end;
  std::string out;
  std::string flux;
  std::optional<double> cfl;
  std::optional<double> gamma;
  std::string alignment;
  std::vector<double> snapshots;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "INI scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--scenario", o.scenario, "built-in scenario id (when no config is given)");
  cmd->add_option("--order", o.order, "reconstruction order")->check(CLI::IsMember({1, 3, 5}));
  cmd->add_option("--cells", o.cells, "number of cells")->check(CLI::PositiveNumber);
  cmd->add_option("--t-end", o.t_end, "final time")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--flux", o.flux, "numerical flux")->check(CLI::IsMember({"llf", "kinetic", "auto"}));
  cmd->add_option("--cfl", o.cfl, "CFL number")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", o.gamma, "linear damping coefficient")->check(CLI::NonNegativeNumber);
  cmd->add_option("--alignment", o.alignment, "velocity alignment")
      ->check(CLI::IsMember({"none", "cucker_smale", "motsch_tadmor"}));
  cmd->add_option("--snapshots", o.snapshots, "snapshot times, comma separated")->delimiter(',');
}

wbfv::ScenarioConfig load(const CommonOptions& o) {
  wbfv::ScenarioConfig c;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw wbfv::InvalidInput("cannot open " + o.config);
    c = wbfv::parse_config(in);
  } else {
    c = wbfv::builtin_scenario(o.scenario.empty() ? "custom" : o.scenario);
  }
  if (o.order) c.order = *o.order;
  if (o.cells) c.cells = *o.cells;
  if (o.t_end) c.t_end = *o.t_end;
  if (!o.flux.empty()) c.flux = o.flux;
  if (o.cfl) c.cfl = *o.cfl;
  if (o.gamma) c.model.damping.gamma = *o.gamma;
  if (!o.alignment.empty()) c.model.damping.alignment = wbfv::parse_alignment(o.alignment);
  if (!o.snapshots.empty()) c.snapshots = o.snapshots;
  if (!o.out.empty()) c.output_dir = o.out;
  if (c.output_dir.empty()) c.output_dir = "out/" + c.id;
  c.validate();
  return c;
}

int cmd_run(const CommonOptions& o) {
  const auto c = load(o);
  const auto rep = wbfv::run(c);
  wbfv::write_artifacts(c.output_dir, c, rep);
  std::cout << c.id << ": status=" << wbfv::to_string(rep.status) << " steps=" << rep.steps
            << " t=" << rep.final.t << " wall=" << std::fixed << std::setprecision(2) << rep.wall_seconds << "s -> "
            << c.output_dir << "\n";
  if (!rep.message.empty()) std::cout << "  " << rep.message << "\n";
  if (rep.status == wbfv::RunStatus::blowup) return kBlowup;
  if (rep.status == wbfv::RunStatus::fault) return kFault;
  return kOk;
}

int cmd_convergence(const CommonOptions& o, std::vector<int> cells, int reference) {
  auto c = load(o);
  if (!o.t_end) c.t_end = 0.1;
  const auto table = wbfv::study_convergence(c, cells, reference);
  std::filesystem::create_directories(c.output_dir);
  std::ofstream f(std::filesystem::path(c.output_dir) / "convergence.csv");
  f << "cells,l1_error,order\n" << std::scientific << std::setprecision(16);
  std::cout << std::setw(8) << "cells" << std::setw(16) << "L1 error" << std::setw(10) << "order\n";
  for (const auto& r : table.rows) {
    f << r.cells << ',' << r.error << ',';
    if (r.order) f << *r.order;
    f << '\n';
    std::cout << std::setw(8) << r.cells << std::setw(16) << std::scientific << std::setprecision(4) << r.error;
    if (r.order) std::cout << std::setw(10) << std::fixed << std::setprecision(2) << *r.order;
    std::cout << '\n';
  }
  return kOk;
}

int cmd_wellbalance(const CommonOptions& o, double tolerance) {
  auto c = load(o);
  if (c.id == "ex31" || c.id == "ex32") c.initial = "steady";
  if (!o.cells) c.cells = 50;
  if (!o.t_end) c.t_end = 5.0;
  const std::vector<int> orders = o.order ? std::vector<int>{*o.order} : std::vector<int>{3, 5};
  const auto rows = wbfv::study_wellbalance(c, orders);
  std::filesystem::create_directories(c.output_dir);
  std::ofstream f(std::filesystem::path(c.output_dir) / "wellbalance.csv");
  f << "order,l1_residual,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    const bool pass = r.residual <= tolerance;
    all = all && pass;
    f << r.order << ',' << std::scientific << std::setprecision(16) << r.residual << ',' << (pass ? "PASS" : "FAIL")
      << '\n';
    std::cout << "order " << r.order << ": L1 residual " << std::scientific << std::setprecision(4) << r.residual
              << (pass ? "  PASS" : "  FAIL") << '\n';
  }
  return all ? kOk : kFault;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order well-balanced finite-volume solver for hydrodynamics with nonlocal free energies"};
  app.require_subcommand(1);

  CommonOptions run_opt, conv_opt, wb_opt;
  auto* run = app.add_subcommand("run", "run a scenario and write CSV snapshots, energies and a manifest");
  add_common(run, run_opt);

  auto* conv = app.add_subcommand("convergence", "L1 convergence study against a fine reference");
  add_common(conv, conv_opt);
  std::vector<int> cells{50, 100, 200, 400};
  int reference = 6400;
  conv->add_option("--grids", cells, "coarse grid sizes, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
  conv->add_option("--reference", reference, "reference grid size")->check(CLI::PositiveNumber);

  auto* wb = app.add_subcommand("wellbalance", "preservation of the steady initial data");
  add_common(wb, wb_opt);
  double tolerance = 1e-14;
  wb->add_option("--tolerance", tolerance, "pass threshold on the L1 residual");

  app.add_subcommand("list-scenarios", "print the built-in scenario ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*run) return cmd_run(run_opt);
    if (*conv) return cmd_convergence(conv_opt, cells, reference);
    if (*wb) return cmd_wellbalance(wb_opt, tolerance);
    for (const auto& id : wbfv::scenario_ids()) std::cout << std::left << std::setw(8) << id << wbfv::scenario_summary(id) << '\n';
    return kOk;
  } catch (const wbfv::InvalidInput& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const wbfv::NumericalFault& e) {
    std::cerr << "numerical fault: " << e.what() << '\n';
    return kFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFault;
  }
}
