#pragma once

#include <array>

namespace flucto {

/// Two particles on a line coupled by a spring of constant k.
/// Particle 1 is the receiver, particle 2 the agent.
class ModelParams {
 public:
  /// Throws std::invalid_argument naming the offending field unless every
  /// argument is finite and strictly positive.
  ModelParams(double m1, double m2, double k, double beta1, double hbar = 1.0);

  double m1() const noexcept { return m1_; }
  double m2() const noexcept { return m2_; }
  double k() const noexcept { return k_; }
  double beta1() const noexcept { return beta1_; }
  double hbar() const noexcept { return hbar_; }

  double total_mass() const noexcept { return m1_ + m2_; }
  double reduced_mass() const noexcept { return m1_ * m2_ / (m1_ + m2_); }
  double omega() const noexcept;
  /// Half period of the relative motion, pi / omega.
  double tau() const noexcept;
  /// Thermal momentum width of the receiver, sqrt(m1 / beta1).
  double delta1() const noexcept;

  ModelParams with_masses(double m1, double m2) const { return {m1, m2, k_, beta1_, hbar_}; }
  ModelParams with_hbar(double hbar) const { return {m1_, m2_, k_, beta1_, hbar}; }

 private:
  double m1_;
  double m2_;
  double k_;
  double beta1_;
  double hbar_;
};

struct DerivedParams {
  double total_mass;
  double reduced_mass;
  double omega;
  double tau;
  double delta1;
};

DerivedParams derived_params(const ModelParams& params);

struct PhasePoint {
  double x1 = 0.0;
  double p1 = 0.0;
  double x2 = 0.0;
  double p2 = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Either [0, v tau] with v odd, or [0, t] for an arbitrary t >= 0.
/// Generic times are meaningful for the classical framework only.
class ProcessInterval {
 public:
  static ProcessInterval odd_multiple(int v = 1);
  static ProcessInterval generic(double t);

  bool is_generic() const noexcept { return generic_; }
  int v() const noexcept { return v_; }
  double duration(const ModelParams& params) const noexcept;

 private:
  ProcessInterval(bool generic, int v, double t) : generic_(generic), v_(v), t_(t) {}

  bool generic_;
  int v_;
  double t_;
};

double hamiltonian(const PhasePoint& point, const ModelParams& params);

/// Hamiltonian flow of the coupled pair, solved in centre-of-mass and
/// relative coordinates. Requires t >= 0.
PhasePoint evolve_classical(const PhasePoint& start, double t, const ModelParams& params);

/// Matrix of the linear map (x1, p1, x2, p2)_0 -> (x1, p1, x2, p2)_t.
/// Any real t is accepted; negative t gives the backward flow.
using FlowMatrix = std::array<std::array<double, 4>, 4>;
FlowMatrix flow_matrix(double t, const ModelParams& params);

/// p1(t) = a p1 + b p2 + c (x2 - x1).
struct MomentumCoefficients {
  double a;
  double b;
  double c;
};

MomentumCoefficients momentum_coefficients(double t, const ModelParams& params);

/// Work done by the agent on the receiver, i.e. the receiver's kinetic energy
/// change. Odd multiples of tau use the closed momentum-only expression;
/// generic intervals integrate the trajectory.
double work_classical(const PhasePoint& start, const ProcessInterval& interval,
                      const ModelParams& params);

/// Eigenvalue of the work operator on the joint momentum eigenstate |p1, p2>.
double work_eigenvalue(double p1, double p2, const ModelParams& params);

}  // namespace flucto
