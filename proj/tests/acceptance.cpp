// Acceptance runner: one PASS/FAIL line per criterion, exit status = number of failures.
#include <wbfv/wbfv.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace wbfv;

namespace {

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail, double seconds) {
  std::printf("%s  %-22s %s  [%.1fs]\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fix(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------- well-balance

void well_balance() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream d;
  for (const char* id : {"ex31", "ex32"}) {
    ScenarioConfig c = builtin_scenario(id);
    c.initial = "steady";
    c.cells = 50;
    c.t_end = 5.0;
    for (const auto& row : study_wellbalance(c)) {
      pass = pass && row.residual <= 1e-14 && row.wall_seconds < 60.0;
      d << id << "/o" << row.order << '=' << sci(row.residual) << ' ';
    }
  }
  report(pass, "well-balance", d.str() + "(<= 1e-14)", seconds_since(t0));
}

// ----------------------------------------------------------------- convergence

void convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream d;
  for (const char* id : {"ex31", "ex32"})
    for (int order : {3, 5}) {
      ScenarioConfig c = builtin_scenario(id);
      c.t_end = 0.1;
      c.order = order;
      const auto table = study_convergence(c, {50, 100, 200, 400}, 6400);
      const double p = table.final_order().value_or(0.0);
      pass = pass && p >= (order == 3 ? 2.6 : 4.3);
      d << id << "/o" << order << '=' << fix(p) << ' ';
    }
  const double wall = seconds_since(t0);
  pass = pass && wall < 600.0;
  report(pass, "convergence", d.str() + "(>= 2.6 / 4.3)", wall);
}

// ------------------------------------------------------------------ positivity

/// L1 distance to the compactly supported steady state xi(C - V) with one
/// level C per potential well, each fitted to the mass the run left there.
double distance_to_steady_profile(const ScenarioConfig& c, const FieldState& s) {
  const Grid g = c.grid();
  const PressureLaw& law = c.model.pressure;
  const ExternalPotential& V = c.model.potential;
  std::vector<int> cuts{0};
  for (int i = 1; i + 1 < g.size(); ++i)
    if (V(g.center(i)) > V(g.center(i - 1)) && V(g.center(i)) >= V(g.center(i + 1))) cuts.push_back(i);
  cuts.push_back(g.size());
  double dist = 0.0;
  for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
    const int lo = cuts[b], hi = cuts[b + 1];
    double mass = 0.0;
    for (int i = lo; i < hi; ++i) mass += s.rho[i] * g.dx();
    auto profile = [&](double C, int i) {
      return gauss_cell_average([&](double x) { return law.xi(C - V(x)); }, g.center(i), g.dx());
    };
    auto excess = [&](double C) {
      double m = 0.0;
      for (int i = lo; i < hi; ++i) m += profile(C, i) * g.dx();
      return m - mass;
    };
    double C = 0.0;
    if (mass > 0.0) {
      double a = -1.0, bb = 1.0;
      for (int i = lo; i < hi; ++i) a = std::min(a, V(g.center(i)) - 1.0);
      while (excess(bb) < 0.0) bb *= 2.0;
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t iters = 200;
      const auto root = boost::math::tools::toms748_solve(excess, a, bb, tol, iters);
      C = 0.5 * (root.first + root.second);
    }
    for (int i = lo; i < hi; ++i) dist += std::abs(s.rho[i] - (mass > 0.0 ? profile(C, i) : 0.0)) * g.dx();
  }
  return dist;
}

void positivity() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream d;
  for (const char* id : {"ex33a", "ex33b"}) {
    ScenarioConfig c = builtin_scenario(id);
    c.snapshots.clear();
    c.energy_every = 0;
    const RunReport rep = run(c);
    const double l1 = distance_to_steady_profile(c, rep.final);
    pass = pass && rep.status == RunStatus::ok && rep.min_rho_seen >= 0.0 && l1 <= 5e-2;
    d << id << ": " << to_string(rep.status) << " min=" << sci(rep.min_rho_seen) << " L1=" << sci(l1) << "  ";
  }
  report(pass, "positivity", d.str() + "(min >= 0, L1 <= 5e-2)", seconds_since(t0));
}

// -------------------------------------------------------------- energy decay

void energy_decay() {
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioConfig c = builtin_scenario("ex31");
  c.snapshots.clear();
  c.energy_every = 1;
  const RunReport rep = run(c);
  double rise = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rep.energy.size(); ++k)
    rise = std::max(rise, rep.energy[k].total_energy - rep.energy[k - 1].total_energy);
  const bool pass = rep.status == RunStatus::ok && rise <= 1e-8;
  report(pass, "energy-decay",
         "ex31 " + std::to_string(rep.energy.size()) + " samples, largest increase " + sci(rise) + " (<= 1e-8)",
         seconds_since(t0));
}

// ----------------------------------------------------------- damping compare

void damping() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Out {
    double u_small;
    double kinetic;
  };
  auto run_variant = [](double gamma, Alignment a) {
    ScenarioConfig c = builtin_scenario("ex34");
    c.cells = 190;
    c.snapshots.clear();
    c.energy_every = 0;
    c.model.damping.gamma = gamma;
    c.model.damping.alignment = a;
    const RunReport rep = run(c);
    if (rep.status != RunStatus::ok) throw NumericalFault("ex34 run failed: " + rep.message);
    const Grid g = c.grid();
    double m = 0.0, p = 0.0;
    for (int i = 0; i < g.size(); ++i)
      if (g.center(i) > 5.0) {
        m += rep.final.rho[i];
        p += rep.final.mom[i];
      }
    return Out{p / m, discrete_energies(rep.final, g, c.model).kinetic};
  };
  const Out lin = run_variant(1.0, Alignment::none);
  const Out cs = run_variant(0.0, Alignment::cucker_smale);
  const Out mt = run_variant(0.0, Alignment::motsch_tadmor);
  const bool pass = mt.u_small > 0.0 && cs.u_small < 0.0 && lin.kinetic < cs.kinetic && lin.kinetic < mt.kinetic;
  report(pass, "damping",
         "small-group u: MT=" + fix(mt.u_small, 3) + " CS=" + fix(cs.u_small, 3) + "; kinetic: linear=" +
             sci(lin.kinetic) + " CS=" + sci(cs.kinetic) + " MT=" + sci(mt.kinetic),
         seconds_since(t0));
}

// -------------------------------------------------------------- Keller-Segel

void keller_segel() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool pass = true;
  {
    ScenarioConfig c = builtin_scenario("ex35a");
    c.snapshots.clear();
    c.energy_every = 50;
    const RunReport rep = run(c);
    // Transients: the first quarter of the run.
    double rise = 0.0;
    for (std::size_t k = 1; k < rep.energy.size(); ++k)
      if (rep.energy[k - 1].t >= 0.25 * c.t_end) rise = std::max(rise, rep.energy[k].max_rho - rep.energy[k - 1].max_rho);
    pass = pass && rep.status == RunStatus::ok && rise <= 1e-12;
    d << "M=0.1: " << to_string(rep.status) << " max-rho rise " << sci(rise) << "; ";
  }
  {
    ScenarioConfig c = builtin_scenario("ex35b");
    c.snapshots.clear();
    c.energy_every = 0;
    const RunReport rep = run(c);
    const double tb = rep.blowup_time.value_or(-1.0);
    pass = pass && rep.status == RunStatus::blowup && tb >= 6.5 && tb <= 8.5;
    d << "M=3: " << to_string(rep.status) << " t=" << fix(tb) << "; ";
  }
  for (const char* file : {"ex35c_m2", "ex35c_m25"}) {
    ScenarioConfig c = builtin_scenario("ex35c");
    const bool m25 = std::string(file) == "ex35c_m25";
    c.model.pressure = PressureLaw(m25 ? 2.5 : 2.0, 3.0);
    c.t_end = m25 ? 100.0 : 250.0;
    c.snapshots.clear();
    c.energy_every = 0;
    const RunReport rep = run(c);
    const double spread = K_spread_on_support(rep.final);
    pass = pass && rep.status == RunStatus::ok && spread <= 1e-6;
    // Reported only: the spread on the component holding the peak and the mass left outside it.
    const auto& s = rep.final;
    const auto peak = std::max_element(s.rho.begin(), s.rho.end()) - s.rho.begin();
    double bulk_spread = 0.0, stray = 0.0;
    for (const auto& comp : wet_components(s.rho)) {
      if (peak >= comp.begin && peak < comp.end) {
        const auto [lo, hi] = std::minmax_element(s.K.begin() + comp.begin, s.K.begin() + comp.end);
        bulk_spread = *hi - *lo;
      } else {
        for (int i = comp.begin; i < comp.end; ++i) stray += s.rho[i] * c.grid().dx();
      }
    }
    d << "m=" << (m25 ? "2.5" : "2") << ": K spread " << sci(spread) << " (bulk " << sci(bulk_spread)
      << ", stray mass " << sci(stray) << "); ";
  }
  report(pass, "keller-segel", d.str() + "(K spread <= 1e-6)", seconds_since(t0));
}

// ---------------------------------------------------------- property suites

bool gauss_exactness() {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    double a[6];
    for (double& v : a) v = u(gen);
    const double c = u(gen), dx = 0.1 + std::abs(u(gen));
    auto p = [&](double x) { return a[0] + x * (a[1] + x * (a[2] + x * (a[3] + x * (a[4] + x * a[5])))); };
    auto P = [&](double x) {
      return x * (a[0] + x * (a[1] / 2 + x * (a[2] / 3 + x * (a[3] / 4 + x * (a[4] / 5 + x * a[5] / 6)))));
    };
    const double exact = (P(c + dx / 2) - P(c - dx / 2)) / dx;
    if (std::abs(gauss_cell_average(p, c, dx) - exact) > 1e-12 * std::max(1.0, std::abs(exact))) return false;
  }
  return true;
}

double richardson_slope(SourceOrder order, double dx0) {
  auto rho = [](double x) { return 1.0 + 0.5 * std::sin(x); };
  auto h = [](double x) { return std::cos(x); };
  auto zero = [](double) { return 0.0; };
  auto err = [&](double dx) {
    const double a = 0.3, b = a + dx;
    const double exact = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return -rho(x) * std::sin(x); }, a, b);
    return std::abs(richardson_source(order, rho, h, zero, a, b) - exact) / dx;
  };
  return std::log2(err(dx0) / err(dx0 / 8.0)) / 3.0;
}

bool cweno_constant() {
  for (double v : {-3.0, 0.0, 1e-8, 2.5}) {
    const Stencil g{v, v, v, v, v};
    for (auto o : {ReconstructionOrder::third, ReconstructionOrder::fifth}) {
      const auto p = reconstruct(o, g, 0.1, 0.0);
      for (double x : {-0.5, 0.0, 0.3, 0.5})
        if (p.at(x, 0.1) != v) return false;
    }
  }
  return true;
}

double identity_error() {
  double worst = 0.0;
  for (double m : {1.0, 2.0})
    for (auto order : {ReconstructionOrder::third, ReconstructionOrder::fifth}) {
      const PressureLaw law(m);
      const Grid g(60, -5.0, 5.0);
      ModelSpec md;
      md.pressure = law;
      md.potential = ExternalPotential::quadratic();
      const Scheme scheme(g, md, order, resolve_flux("auto", law));
      const double C = law.isothermal() ? std::log(0.4) : 2.0;
      const FieldState s = scheme.initialize([&](double x) { return law.xi(C - 0.5 * x * x); }, [](double) { return 0.0; });
      const Reconstruction r = scheme.reconstruct(s);
      for (int i = 0; i < g.size(); ++i) {
        bool steady = s.rho[i] > 1e-8;
        for (int k = i - 2; k <= i + 2; ++k) steady = steady && std::abs(s.K[g.wrap(k)] - C) < 1e-13;
        if (!steady) continue;
        const auto H = reconstruct_H(r.K_at(i), r.rho_at(i), law);
        for (double o : scheme.points().offsets) {
          const double x = g.center(i) + o * g.dx();
          const double rho = r.rho_at(i)(x);
          const auto h = H(x);
          if (h && rho > 0.0) worst = std::max(worst, std::abs(law.pi_prime(rho) + *h - s.K[i]));
        }
      }
    }
  return worst;
}

double flux_consistency() {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PressureLaw law(1.0 + 2.0 * u(gen), 0.5 + 2.0 * u(gen));
    const double rho = 3.0 * u(gen);
    const Conserved U{rho, rho * (6.0 * u(gen) - 3.0)};
    const Conserved F = physical_flux(U, law);
    const double scale = std::max(1.0, std::abs(F.momentum));
    for (auto kind : {FluxKind::llf, FluxKind::kinetic}) {
      if (kind == FluxKind::kinetic && law.isothermal()) continue;
      const Conserved G = numerical_flux(kind, U, U, law);
      worst = std::max({worst, std::abs(G.mass - F.mass) / scale, std::abs(G.momentum - F.momentum) / scale});
    }
  }
  return worst;
}

bool positivity_trials() {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const bool isothermal = t % 2 == 0;
    ModelSpec m;
    m.pressure = PressureLaw(isothermal ? 1.0 : 2.0);
    m.potential = ExternalPotential::double_well();
    const auto order = t % 4 < 2 ? ReconstructionOrder::third : ReconstructionOrder::fifth;
    const Scheme scheme(Grid(16, -2.5, 2.5), m, order, isothermal ? FluxKind::llf : FluxKind::kinetic);
    FieldState s(16);
    std::vector<double> nodes(48);
    for (int i = 0; i < 16; ++i) {
      s.rho[i] = (!isothermal && u(gen) < 0.25) ? 0.0 : 0.01 + u(gen);
      s.mom[i] = s.rho[i] * (4.0 * u(gen) - 2.0);
      nodes[3 * i] = nodes[3 * i + 1] = nodes[3 * i + 2] = std::max(s.rho[i], kLogDensityFloor);
    }
    s.K = compute_K(nodes, discrete_convolution(nodes, scheme.grid(), m.potential, nullptr), scheme.law());
    try {
      const FieldState next = ssp_rk3_step(scheme, s, compute_dt(scheme, s, 0.9));
      for (double r : next.rho)
        if (!(r >= 0.0)) return false;
    } catch (const NumericalFault&) {
      return false;
    }
  }
  return true;
}

bool k_invariance() {
  for (const char* id : {"ex31", "ex32"}) {
    ScenarioConfig c = builtin_scenario(id);
    c.initial = "steady";
    c.cells = 50;
    const Scheme scheme = make_scheme(c);
    const FieldState s = initial_state(c, scheme);
    const auto polys = scheme.reconstruct_density(s.rho);
    if (scheme.update_K(s.K, polys, polys) != s.K) return false;
  }
  return true;
}

void properties() {
  const auto t0 = std::chrono::steady_clock::now();
  const bool gauss = gauss_exactness();
  const double s4 = richardson_slope(SourceOrder::fourth, 0.4), s6 = richardson_slope(SourceOrder::sixth, 0.8);
  const bool cweno = cweno_constant();
  const double ident = identity_error();
  const double cons = flux_consistency();
  const bool pos = positivity_trials();
  const bool kinv = k_invariance();
  const bool pass = gauss && s4 >= 3.8 && s6 >= 5.5 && cweno && ident <= 5e-13 && cons <= 1e-12 && pos && kinv;
  std::ostringstream d;
  d << "gauss=" << (gauss ? "ok" : "bad") << " richardson=" << fix(s4) << '/' << fix(s6)
    << " cweno-const=" << (cweno ? "ok" : "bad") << " identity=" << sci(ident) << " consistency=" << sci(cons)
    << " positivity=" << (pos ? "1000/1000" : "bad") << " K-invariance=" << (kinv ? "exact" : "bad");
  report(pass, "property-suites", d.str(), seconds_since(t0));
}

} // namespace

int main(int argc, char** argv) {
  const std::set<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<const char*, std::function<void()>>> criteria{
      {"well-balance", well_balance}, {"convergence", convergence}, {"positivity", positivity},
      {"energy-decay", energy_decay}, {"damping", damping},         {"keller-segel", keller_segel},
      {"property-suites", properties}};
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    try {
      fn();
    } catch (const std::exception& e) {
      report(false, name, std::string("exception: ") + e.what(), 0.0);
    }
  }
  return failures;
}
