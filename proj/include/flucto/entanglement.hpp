#pragma once

#include <vector>

#include "flucto/quantum_states.hpp"

namespace flucto {

/// Linear entropy 1 - Tr rho_1^2 of the entangled preparation.
double entanglement_closed(double e, double epsilon, double sigma1, double sigma2,
                           double hbar = 1.0);

/// Limit of entanglement_closed as e -> infinity.
double entanglement_saturation(double epsilon);

/// <p | rho_1 | p'> of the receiver's reduced state, obtained by integrating
/// the agent momentum out of the entangled amplitude.
double reduced_receiver_element(const quantum::QuantumState& state, double p, double p_prime);

struct PurityGrid {
  /// Half-width of the square grid in whitened units.
  double radius = 10.0;
  int nodes = 161;
  /// Maximum allowed change of the purity between the grid and its
  /// every-other-node subgrid.
  double tolerance = 1e-9;
};

/// 1 - double integral of |rho_1(p, p')|^2, evaluated on a grid rotated to
/// (p + p', p - p') and scaled to the Gaussian widths. Throws GridTooCoarse
/// when the refinement check fails and UnsupportedState for non-entangled
/// states.
double purity_oracle(const quantum::QuantumState& state, const PurityGrid& grid = {});

struct EntanglementReport {
  double e = 0.0;
  double epsilon = 0.0;
  double theta_e = 0.0;
  double closed = 0.0;
  double rescaled = 0.0;
};

/// Closed-form entanglement along a strictly increasing grid of e.
std::vector<EntanglementReport> monotonicity_scan(double epsilon, double sigma1, double sigma2,
                                                  const std::vector<double>& e_grid,
                                                  double hbar = 1.0);

}  // namespace flucto
