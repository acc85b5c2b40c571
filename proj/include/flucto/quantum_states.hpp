#pragma once

#include <complex>
#include <string_view>
#include <variant>

#include "flucto/gaussian_work.hpp"
#include "flucto/model.hpp"

namespace flucto::quantum {

/// Phase-space centre (x, p) of a Gaussian wave packet.
struct Centroid {
  double x = 0.0;
  double p = 0.0;
  friend bool operator==(const Centroid&, const Centroid&) = default;
};

enum class Representation { position, momentum };

/// Minimum-uncertainty packet with momentum width sigma and position width
/// hbar / (2 sigma), evaluated in the requested representation. The momentum
/// amplitude carries the phase exp(-i (p - pbar) xbar / hbar); the position
/// amplitude carries exp(i pbar x / hbar).
std::complex<double> gaussian_wavefunction(const Centroid& centre, double sigma, double hbar,
                                           Representation rep, double arg);

/// <p'| T |p> for the receiver's effective thermal state, a Gaussian mixture of
/// packets G_{(0,p), sigma1} with thermal weights of width delta1.
double receiver_matrix_element(double delta1, double sigma1, double p_left, double p_right);

struct ThermalGaussian {
  Centroid agent;
};

struct ThermalThermal {
  double delta2;
};

/// Receiver and agent packets share the mixing momentum: G_(0,p) x G_(0,cp).
/// Both packets have the same width (sigma1 == sigma2).
struct MomentumCorrelated {
  double c;
};

/// Agent in the superposition of packets centred at agent and agent + (dx, 0).
struct Superposition {
  Centroid agent;
  double dx;
};

/// Pure state  int dp A(p) |0,p> x |e p, 0>: receiver momentum entangled with
/// agent position.
struct Entangled {
  double e;
};

/// Mixture of G_(0,p) x G_(c p, 0): receiver momentum classically correlated
/// with agent position.
struct PositionCorrelated {
  double c;
};

using Family = std::variant<ThermalGaussian, ThermalThermal, MomentumCorrelated, Superposition,
                            Entangled, PositionCorrelated>;

class QuantumState {
 public:
  static QuantumState thermal_gaussian(const ModelParams& params, double sigma1, double sigma2,
                                       Centroid agent = {});
  static QuantumState thermal_thermal(const ModelParams& params, double sigma1, double sigma2,
                                      double delta2);
  static QuantumState momentum_correlated(const ModelParams& params, double sigma, double c);
  static QuantumState superposition(const ModelParams& params, double sigma1, double sigma2,
                                    Centroid agent, double dx);
  static QuantumState entangled(const ModelParams& params, double sigma1, double sigma2,
                                double e);
  static QuantumState position_correlated(const ModelParams& params, double sigma1,
                                          double sigma2, double c);

  const Family& family() const noexcept { return family_; }
  std::string_view tag() const noexcept;

  double delta1() const noexcept { return delta1_; }
  double sigma1() const noexcept { return sigma1_; }
  double sigma2() const noexcept { return sigma2_; }
  double hbar() const noexcept { return hbar_; }

  /// sigma1 / delta1.
  double epsilon() const noexcept { return sigma1_ / delta1_; }
  /// sigma1 sigma2 / delta1^2.
  double gamma() const noexcept { return sigma1_ * sigma2_ / (delta1_ * delta1_); }

  /// Gaussian envelope of the joint momentum density. Exact for every family
  /// except the superposition, whose density is this envelope times a
  /// bounded interference factor.
  MomentumGaussian momentum_envelope() const;

  /// Throws std::invalid_argument when the state was built for a different
  /// receiver temperature, mass or hbar than `params`.
  void check_compatible(const ModelParams& params) const;

 private:
  QuantumState(Family family, double delta1, double sigma1, double sigma2, double hbar);

  Family family_;
  double delta1_;
  double sigma1_;
  double sigma2_;
  double hbar_;
};

/// 2 sigma2 dx / hbar.
double interference_parameter(const QuantumState& state);
/// 2 [1 + exp(-eta^2 / 8)].
double superposition_norm(double eta);
/// hbar / (2 e sigma1 sigma2); infinite when e == 0.
double correlation_theta(const QuantumState& state);
/// epsilon / sqrt(1 + epsilon^2 + theta^-2).
double entangled_kappa(const QuantumState& state);

/// <p1, p2| rho |p1, p2>.
double momentum_density(const QuantumState& state, double p1, double p2);

/// log of momentum_density, evaluated without forming the density, so it stays
/// finite far in the tails where the density underflows. -inf at exact zeros.
double log_momentum_density(const QuantumState& state, double p1, double p2);

/// <p1, p2 | psi_e> in closed form.
std::complex<double> entangled_amplitude(const QuantumState& state, double p1, double p2);

/// Normalised agent amplitude of the superposition in momentum representation.
std::complex<double> superposition_agent_amplitude(const QuantumState& state, double p2);

}  // namespace flucto::quantum
