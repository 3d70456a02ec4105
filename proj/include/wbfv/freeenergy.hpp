#pragma once

#include "convolution.hpp"
#include "model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace wbfv {

inline NodeConvolution make_kernel_convolution(const Grid& grid, const InteractionKernel& kernel,
                                               ConvolutionMethod method = ConvolutionMethod::automatic) {
  return NodeConvolution(
      grid, [kernel](double x) { return kernel(x); },
      [kernel](double h) { return kernel.self_value(h); }, method);
}

/// H_dx(x) = V(x) + sum_l sum_m dx alpha_m W(x - x_l^m) rho(x_l^m) at all Gauss
/// nodes. `interaction` may be empty when the model has no kernel.
inline DiscretePotentialField discrete_convolution(std::span<const double> rho_nodes, const Grid& grid,
                                                   const ExternalPotential& potential,
                                                   const NodeConvolution* interaction) {
  DiscretePotentialField field;
  if (interaction != nullptr) {
    field.nodes = interaction->apply(rho_nodes);
  } else {
    field.nodes.assign(rho_nodes.size(), 0.0);
  }
  const auto x = gauss_nodes(grid);
  for (std::size_t k = 0; k < x.size(); ++k) field.nodes[k] += potential(x[k]);
  field.cell_average = node_averages(field.nodes);
  return field;
}

/// K_i = Gauss average over cell i of Pi'(rho) + H_dx.
inline std::vector<double> compute_K(std::span<const double> rho_nodes, const DiscretePotentialField& field,
                                     const PressureLaw& law) {
  std::vector<double> variation(rho_nodes.size());
  for (std::size_t k = 0; k < rho_nodes.size(); ++k) variation[k] = law.pi_prime(rho_nodes[k]) + field.nodes[k];
  return node_averages(variation);
}

} // namespace wbfv
