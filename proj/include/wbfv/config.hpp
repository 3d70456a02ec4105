#pragma once

#include "errors.hpp"
#include "scenarios.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace wbfv {

inline ConvolutionMethod parse_convolution(std::string_view s) {
  if (s == "auto") return ConvolutionMethod::automatic;
  if (s == "direct") return ConvolutionMethod::direct;
  if (s == "fft") return ConvolutionMethod::fft;
  throw InvalidInput("unknown convolution method '" + std::string(s) + "'");
}

inline std::string_view to_string(ConvolutionMethod m) {
  switch (m) {
    case ConvolutionMethod::automatic: return "auto";
    case ConvolutionMethod::direct: return "direct";
    case ConvolutionMethod::fft: return "fft";
  }
  return "?";
}

namespace config_detail {

using boost::property_tree::ptree;

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput("malformed number '" + item + "' in list");
    }
  }
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Reads typed values from a section while recording every key it touched.
class Reader {
public:
  explicit Reader(const ptree& root) : root_(root) {}

  template <class T>
  void get(const std::string& path, T& out) {
    seen_.insert(path);
    const auto node = root_.get_child_optional(ptree::path_type(path, '.'));
    if (!node) return;
    try {
      out = node->get_value<T>();
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse value of '" + path + "'");
    }
  }

  bool has(const std::string& path) const { return root_.get_child_optional(ptree::path_type(path, '.')).has_value(); }

  void reject_unknown() const {
    for (const auto& [section, body] : root_) {
      if (section == "run") continue;  // manifests carry run metadata
      if (body.empty() && !body.data().empty()) throw InvalidInput("key '" + section + "' outside any section");
      for (const auto& [key, value] : body) {
        const std::string path = section + "." + key;
        if (!seen_.count(path)) throw InvalidInput("unknown config key '" + path + "'");
      }
    }
  }

private:
  const ptree& root_;
  std::set<std::string> seen_;
};

inline TabulatedProfile read_table(Reader& r, const std::string& prefix) {
  double x0 = 0.0, dx = 0.0;
  std::string values;
  r.get("model." + prefix + "_x0", x0);
  r.get("model." + prefix + "_dx", dx);
  r.get("model." + prefix + "_values", values);
  return TabulatedProfile(parse_list(values), x0, dx);
}

} // namespace config_detail

/// Parses an INI scenario description. The `[scenario] id` key selects the
/// built-in defaults; every other key overrides one field.
inline ScenarioConfig parse_config(std::istream& in) {
  using config_detail::ptree;
  ptree root;
  try {
    boost::property_tree::read_ini(in, root);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidInput(std::string("config syntax: ") + e.what());
  }
  config_detail::Reader r(root);

  std::string id = "custom";
  r.get("scenario.id", id);
  ScenarioConfig c = builtin_scenario(id);

  r.get("scenario.initial", c.initial);
  r.get("scenario.mass", c.mass);

  r.get("grid.cells", c.cells);
  r.get("grid.x_left", c.x_left);
  r.get("grid.x_right", c.x_right);
  std::string boundary(to_string(c.boundary));
  r.get("grid.boundary", boundary);
  c.boundary = parse_boundary(boundary);

  r.get("time.t_end", c.t_end);
  r.get("time.cfl", c.cfl);
  std::string snaps = config_detail::format_list(c.snapshots);
  r.get("time.snapshots", snaps);
  c.snapshots = config_detail::parse_list(snaps);
  r.get("time.dt_min", c.dt_min);
  r.get("time.blowup_factor", c.blowup_factor);
  r.get("time.blowup_rho", c.blowup_rho);
  r.get("time.blowup_mass_fraction", c.blowup_mass_fraction);
  r.get("time.energy_every", c.energy_every);

  r.get("scheme.order", c.order);
  r.get("scheme.flux", c.flux);
  std::string conv(to_string(c.convolution));
  r.get("scheme.convolution", conv);
  c.convolution = parse_convolution(conv);

  double m = c.model.pressure.exponent(), cp = c.model.pressure.scale();
  r.get("model.pressure_exponent", m);
  r.get("model.pressure_scale", cp);
  c.model.pressure = PressureLaw(m, cp);

  std::string potential(to_string(c.model.potential.kind));
  r.get("model.potential", potential);
  switch (parse_potential(potential)) {
    case PotentialKind::none: c.model.potential = ExternalPotential::none(); break;
    case PotentialKind::quadratic: c.model.potential = ExternalPotential::quadratic(); break;
    case PotentialKind::double_well: c.model.potential = ExternalPotential::double_well(); break;
    case PotentialKind::tabulated:
      c.model.potential = ExternalPotential::tabulated(config_detail::read_table(r, "potential"));
      break;
  }

  std::string kernel(to_string(c.model.kernel.kind));
  double alpha = c.model.kernel.alpha;
  r.get("model.kernel", kernel);
  r.get("model.kernel_alpha", alpha);
  switch (parse_kernel(kernel)) {
    case KernelKind::none: c.model.kernel = InteractionKernel::none(); break;
    case KernelKind::quadratic: c.model.kernel = InteractionKernel::quadratic(); break;
    case KernelKind::log: c.model.kernel = InteractionKernel::log(); break;
    case KernelKind::power: c.model.kernel = InteractionKernel::power(alpha); break;
    case KernelKind::morse: c.model.kernel = InteractionKernel::morse(); break;
    case KernelKind::tabulated:
      c.model.kernel = InteractionKernel::tabulated(config_detail::read_table(r, "kernel"));
      break;
  }
  r.get("model.gamma", c.model.damping.gamma);
  std::string align(to_string(c.model.damping.alignment));
  r.get("model.alignment", align);
  c.model.damping.alignment = parse_alignment(align);
  r.get("model.psi_decay", c.model.damping.psi_decay);

  r.get("initial.center", c.ic_center);
  r.get("initial.width", c.ic_width);
  r.get("initial.velocity", c.ic_velocity);

  r.get("output.dir", c.output_dir);

  r.reject_unknown();
  c.validate();
  return c;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Full INI echo of a config; parse_config reads it back to an equal config.
inline void write_config(std::ostream& os, const ScenarioConfig& c) {
  using config_detail::format_list;
  using config_detail::format_number;
  const auto& md = c.model;
  os << "[scenario]\n"
     << "id = " << c.id << "\n"
     << "initial = " << c.initial << "\n"
     << "mass = " << format_number(c.mass) << "\n\n"
     << "[grid]\n"
     << "cells = " << c.cells << "\n"
     << "x_left = " << format_number(c.x_left) << "\n"
     << "x_right = " << format_number(c.x_right) << "\n"
     << "boundary = " << to_string(c.boundary) << "\n\n"
     << "[time]\n"
     << "t_end = " << format_number(c.t_end) << "\n"
     << "cfl = " << format_number(c.cfl) << "\n"
     << "snapshots = " << format_list(c.snapshots) << "\n"
     << "dt_min = " << format_number(c.dt_min) << "\n"
     << "blowup_factor = " << format_number(c.blowup_factor) << "\n"
     << "blowup_rho = " << format_number(c.blowup_rho) << "\n"
     << "blowup_mass_fraction = " << format_number(c.blowup_mass_fraction) << "\n"
     << "energy_every = " << c.energy_every << "\n\n"
     << "[scheme]\n"
     << "order = " << c.order << "\n"
     << "flux = " << c.flux << "\n"
     << "convolution = " << to_string(c.convolution) << "\n\n"
     << "[model]\n"
     << "pressure_exponent = " << format_number(md.pressure.exponent()) << "\n"
     << "pressure_scale = " << format_number(md.pressure.scale()) << "\n"
     << "potential = " << to_string(md.potential.kind) << "\n";
  if (md.potential.table)
    os << "potential_x0 = " << format_number(md.potential.table->x0()) << "\n"
       << "potential_dx = " << format_number(md.potential.table->spacing()) << "\n"
       << "potential_values = " << format_list(md.potential.table->samples()) << "\n";
  os << "kernel = " << to_string(md.kernel.kind) << "\n"
     << "kernel_alpha = " << format_number(md.kernel.alpha) << "\n";
  if (md.kernel.table)
    os << "kernel_x0 = " << format_number(md.kernel.table->x0()) << "\n"
       << "kernel_dx = " << format_number(md.kernel.table->spacing()) << "\n"
       << "kernel_values = " << format_list(md.kernel.table->samples()) << "\n";
  os << "gamma = " << format_number(md.damping.gamma) << "\n"
     << "alignment = " << to_string(md.damping.alignment) << "\n"
     << "psi_decay = " << format_number(md.damping.psi_decay) << "\n\n"
     << "[initial]\n"
     << "center = " << format_number(c.ic_center) << "\n"
     << "width = " << format_number(c.ic_width) << "\n"
     << "velocity = " << format_number(c.ic_velocity) << "\n\n"
     << "[output]\n"
     << "dir = " << c.output_dir << "\n";
}

} // namespace wbfv
