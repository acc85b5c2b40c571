#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "flucto/gaussian_work.hpp"
#include "flucto/model.hpp"

namespace flucto::classical {

/// Thermal receiver with a Gaussian agent centred at (xbar2, pbar2). The
/// agent's position width is hbar / (2 sigma2), as for a minimum-uncertainty
/// packet.
struct ThermalGaussian {
  double sigma2;
  double xbar2 = 0.0;
  double pbar2 = 0.0;
};

/// Both particles thermal; delta2 = sqrt(m2 / beta2).
struct ThermalThermal {
  double delta2;
  double agent_x_width = 1.0;
};

/// Thermal receiver with the agent momentum locked to p2 = c p1.
struct Correlated {
  double c;
  double agent_x_width = 1.0;
};

using Family = std::variant<ThermalGaussian, ThermalThermal, Correlated>;

/// Liouville preparation of the pair. The receiver's position marginal is a
/// zero-centred Gaussian of configurable width; work at odd multiples of tau
/// does not depend on positions.
class ClassicalState {
 public:
  static ClassicalState thermal_gaussian(const ModelParams& params, double sigma2,
                                         double xbar2 = 0.0, double pbar2 = 0.0,
                                         double receiver_x_width = 1.0);
  static ClassicalState thermal_thermal(const ModelParams& params, double delta2,
                                        double receiver_x_width = 1.0,
                                        double agent_x_width = 1.0);
  static ClassicalState correlated(const ModelParams& params, double c,
                                   double receiver_x_width = 1.0, double agent_x_width = 1.0);

  const Family& family() const noexcept { return family_; }
  std::string_view tag() const noexcept;
  double delta1() const noexcept { return delta1_; }
  double hbar() const noexcept { return hbar_; }
  double receiver_x_width() const noexcept { return receiver_x_width_; }

  /// Law of (p1, p2). Singular for the correlated family.
  MomentumGaussian momentum_law() const;

  /// Sample standard deviation of the agent's position.
  double agent_x_width() const;

 private:
  ClassicalState(Family family, double delta1, double hbar, double receiver_x_width);

  Family family_;
  double delta1_;
  double hbar_;
  double receiver_x_width_;
};

/// For TG and TT, the joint density of (p1, p2). For the correlated family the
/// momenta live on the line p2 = c p1, and the returned value is the density
/// of p1 along that line (p2 is implied and ignored).
double momentum_density(const ClassicalState& state, double p1, double p2);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<PhasePoint> points;
};

/// Fills `out` with i.i.d. draws from substream `stream` of `seed`.
void sample_into(const ClassicalState& state, std::uint64_t seed, std::uint64_t stream,
                 std::span<PhasePoint> out);

/// n i.i.d. draws. Chunk i of kChunkSize points comes from substream i, so
/// the batch is reproducible and partitionable.
SampleBatch sample(const ClassicalState& state, std::uint64_t seed, std::size_t n);

}  // namespace flucto::classical
