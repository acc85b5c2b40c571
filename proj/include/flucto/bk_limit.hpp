#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "flucto/classical_states.hpp"
#include "flucto/ft_numeric.hpp"
#include "flucto/model.hpp"
#include "flucto/quantum_states.hpp"

namespace flucto {

/// |<exp(-beta1 W)> - 1| from the closed form; +inf when the average diverges.
double bk_deviation(const classical::ClassicalState& state, const ModelParams& params);
double bk_deviation(const quantum::QuantumState& state, const ModelParams& params);

/// 2-norm of the block d(X2_0, P2_0) / d(X1_t, P1_t) of the inverse flow in
/// mass-weighted canonical coordinates X = sqrt(m) x, P = p / sqrt(m).
double agent_backmap_sensitivity(double t, const ModelParams& params);

/// Same quantity parametrised by the mass ratio r = m1 / m2 >= 0 and the
/// spring constant k >= 0, so the decoupled limits r = 0 and k = 0 can be
/// evaluated directly.
double agent_backmap_sensitivity(double t, double ratio, double m1, double k);

enum class BkFamilyKind {
  classical_tg,
  classical_tt,
  classical_corr,
  /// Correlated family at c = (m2 - m1) / (2 m1) for every ratio.
  classical_corr_critical,
  quantum_tg,
  quantum_tt,
  entangled,
};

struct BkFamily {
  BkFamilyKind kind = BkFamilyKind::classical_tg;
  double sigma1 = 0.01;
  double sigma2 = 1.0;
  double delta2 = 1.0;
  double c = 0.0;
  double e = 0.0;
};

std::string_view family_name(BkFamilyKind kind);

struct BkScanRow {
  double ratio = 0.0;
  double m2 = 0.0;
  double deviation = 0.0;
  bool diverged = false;
  double sensitivity = 0.0;
};

struct BkScanReport {
  BkFamily family;
  std::vector<BkScanRow> rows;
};

/// Keeps m1, k, beta1 and hbar of `base` and sets m2 = m1 / r for every r in
/// the grid. Sensitivities are evaluated at t = tau of each model.
BkScanReport bk_scan(const BkFamily& family, const std::vector<double>& ratios,
                     const ModelParams& base);

/// Monte Carlo estimate of the integral of exp(-beta1 W) times the
/// correlation part of the density, i.e. the average under the state minus
/// the average under the product of its marginals. The product sample pairs
/// each receiver draw with an agent from an independent substream.
FtEstimate correlation_functional_mc(const classical::ClassicalState& state,
                                     const ModelParams& params, const ProcessInterval& interval,
                                     std::size_t n, std::uint64_t seed, unsigned threads = 1);

}  // namespace flucto
