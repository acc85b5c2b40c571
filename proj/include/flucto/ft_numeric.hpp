#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flucto/classical_states.hpp"
#include "flucto/model.hpp"
#include "flucto/quantum_states.hpp"

namespace flucto {

enum class EstimateMethod { monte_carlo, quadrature };

struct FtEstimate {
  double value = 0.0;
  /// Standard error (Monte Carlo) or truncation error (quadrature).
  double error = 0.0;
  /// Samples or quadrature nodes.
  std::uint64_t count = 0;
  EstimateMethod method = EstimateMethod::monte_carlo;
  bool diverged = false;
  /// (sum f)^2 / sum f^2; Monte Carlo only.
  double effective_sample_size = 0.0;
  /// Whether f has finite variance under the sampled law, decided
  /// analytically. A finite mean with infinite variance makes the standard
  /// error unreliable even when the estimator converges.
  bool variance_finite = true;
  std::vector<std::string> warnings;
};

/// Tensor trapezoid grid on [-radius, radius]^2 in whitened coordinates.
struct QuadratureConfig {
  double radius = 12.0;
  int nodes = 257;
  /// Number of successively coarser grids (every other node) compared with
  /// the full grid for the error estimate.
  int levels = 1;
  unsigned threads = 1;

  /// Throws std::invalid_argument unless radius >= 6, nodes odd and >= 5, and
  /// the grid supports `levels` halvings.
  void validate() const;
};

struct McOptions {
  unsigned threads = 1;
  /// Inverse temperature of the exponential; defaults to params.beta1().
  std::optional<double> beta;
};

/// Plain Monte Carlo average of exp(-beta work_classical) over n >= 10^4
/// draws. Chunk i of the sample comes from substream i and the chunks are
/// reduced in index order, so the result is independent of the thread count.
FtEstimate estimate_mc(const classical::ClassicalState& state, const ModelParams& params,
                       const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
                       const McOptions& options = {});

/// Integral of exp(-beta1 w) times the momentum density. Throws
/// NonIntegrable when the combined quadratic exponent is not negative definite.
FtEstimate estimate_quadrature(const quantum::QuantumState& state, const ModelParams& params,
                               const QuadratureConfig& config = {});

/// Mean classical work by Monte Carlo.
FtEstimate mean_work(const classical::ClassicalState& state, const ModelParams& params,
                     const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
                     unsigned threads = 1);

/// Mean quantum work by quadrature.
FtEstimate mean_work(const quantum::QuantumState& state, const ModelParams& params,
                     const QuadratureConfig& config = {});

}  // namespace flucto
