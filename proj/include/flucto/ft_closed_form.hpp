#pragma once

#include <map>
#include <string>
#include <vector>

#include "flucto/classical_states.hpp"
#include "flucto/model.hpp"
#include "flucto/quantum_states.hpp"

namespace flucto {

enum class FtStatus { ok, divergent };

/// Closed-form value of <exp(-beta1 W)>.
///
/// `condition_margin` is the convergence radicand normalised by the squared
/// reference mass difference (m1 - m2, or m1 - m2 + 2 m1 c for momentum
/// correlations; M when that difference vanishes). It is positive exactly when
/// the average is finite. Invalid predictions carry value = +inf.
struct FtPrediction {
  double value = 0.0;
  bool valid = false;
  double condition_margin = 0.0;
  FtStatus status = FtStatus::divergent;
  std::string condition;
  std::map<std::string, double> helpers;
};

enum class ApproxRegime { eps_first_order, eps_ll_gamma_ll_1, eps_ll_1 };

FtPrediction ft_classical(const classical::ClassicalState& state, const ModelParams& params);

FtPrediction ft_quantum(const quantum::QuantumState& state, const ModelParams& params);

/// Small-epsilon forms. Throws RegimeUnavailable for pairings that have no
/// approximate expression:
///   eps_first_order    TG, TT, Superpos
///   eps_ll_1           MomCorr, Entangled, PosCorr
///   eps_ll_gamma_ll_1  every variant (the classical limit)
FtPrediction ft_quantum_approx(const quantum::QuantumState& state, const ModelParams& params,
                               ApproxRegime regime);

/// [1 - (2 gamma r / (1 - r))^2]^(-1/2) with r = m1 / m2.
double gamma_factor(double gamma, double ratio);

/// Attenuation factor of the superposition at small epsilon. Throws
/// DomainError unless 0 < ratio < 1 / (1 + 2 gamma).
double xi_factor(double gamma, double eta, double ratio);

struct XiSurface {
  double gamma = 0.0;
  std::vector<double> etas;
  std::vector<double> ratios;
  /// values[i][j] = xi_factor(gamma, etas[i], ratios[j]).
  std::vector<std::vector<double>> values;
};

XiSurface xi_surface(double gamma, const std::vector<double>& eta_grid,
                     const std::vector<double>& ratio_grid);

/// -ln(value) / beta1. Throws ConvergenceError for invalid predictions.
double jensen_bound(const FtPrediction& prediction, double beta1);

/// Throws ConvergenceError when the prediction is not valid.
void require_valid(const FtPrediction& prediction);

}  // namespace flucto
