#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flucto/ft_numeric.hpp"
#include "flucto/model.hpp"
#include "flucto/quantum_states.hpp"

namespace flucto {

struct TpmRecord {
  double first = 0.0;
  double second = 0.0;
  double work = 0.0;

  friend bool operator==(const TpmRecord&, const TpmRecord&) = default;
};

struct TpmRun {
  std::string tag;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Empty unless records were requested.
  std::vector<TpmRecord> records;
  FtEstimate exp_average;
};

/// Density of the first receiver-momentum outcome, a centred Gaussian of
/// variance delta1^2 + sigma1^2. Throws UnsupportedState unless the state is
/// Entangled or PosCorr.
double first_measurement_density(const quantum::QuantumState& state, double p);

/// Product of two minimum-uncertainty packets.
struct GaussianProduct {
  quantum::Centroid receiver;
  double sigma1 = 0.0;
  quantum::Centroid agent;
  double sigma2 = 0.0;
  /// Set when epsilon is not small and the product form is a poor
  /// approximation of the collapsed state.
  bool approximate = false;

  friend bool operator==(const GaussianProduct&, const GaussianProduct&) = default;
};

/// State right after the first measurement returns p: receiver packet at
/// momentum p, agent packet at position e p (or c p).
GaussianProduct post_measurement_state(const quantum::QuantumState& state, double p);

/// |<claimed agent packet | exact conditional agent state>|^2 after a
/// receiver outcome p on the entangled state, by numerical integration over
/// the agent momentum.
double conditional_overlap(const quantum::QuantumState& state, double p);

struct TpmOptions {
  bool keep_records = true;
  unsigned threads = 1;
};

/// Two-point measurement of the receiver's kinetic energy at 0 and v tau.
/// The second outcome follows from P1(v tau) = [(m1 - m2) P1 + 2 m1 P2] / M
/// applied to the post-measurement product state. Records are partitioned in
/// chunks of kChunkSize, chunk i drawn from substream i.
TpmRun run_tpm(const quantum::QuantumState& state, const ModelParams& params,
               const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
               const TpmOptions& options = {});

/// Exact <exp(-beta1 w)> of the simulated chain; +inf when it diverges.
double tpm_exp_average_exact(const quantum::QuantumState& state, const ModelParams& params);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(alpha) sqrt((n + m) / (n m)).
double ks_critical_value(std::size_t n, std::size_t m, double alpha = 0.01);

}  // namespace flucto
