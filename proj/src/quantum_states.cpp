#include "flucto/quantum_states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "flucto/detail/overloaded.hpp"
#include "flucto/linalg2.hpp"

namespace flucto::quantum {

using detail::overloaded;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and positive");
  }
}

void require_non_negative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and non-negative");
  }
}

void require_finite(const Centroid& c) {
  if (!std::isfinite(c.x) || !std::isfinite(c.p)) {
    throw std::invalid_argument("agent centroid must be finite");
  }
}

// Exponent coefficients of psi_e(p1, p2) = K exp(-a p1^2 - b p2^2 - i c p1 p2).
struct EntangledForm {
  double a;
  double b;
  double c;
  double k;
};

EntangledForm entangled_form(const QuantumState& s, double e) {
  const double d2 = s.delta1() * s.delta1();
  const double s1 = s.sigma1() * s.sigma1();
  const double s2 = s.sigma2() * s.sigma2();
  const double hbar = s.hbar();
  const double width = d2 * s1 / (d2 + s1);
  EntangledForm f;
  f.a = 1.0 / (4.0 * (d2 + s1));
  f.b = 1.0 / (4.0 * s2) + width * e * e / (hbar * hbar);
  f.c = e * d2 / (hbar * (d2 + s1));
  // Mixing amplitude prefactor times both packet prefactors times the
  // Gaussian integral over the mixing momentum.
  const double kappa = entangled_kappa(s);
  f.k = std::sqrt(4.0 * M_PI * width) / std::sqrt(4.0 * M_PI * kappa * d2) /
        std::pow(2.0 * M_PI * s1, 0.25) / std::pow(2.0 * M_PI * s2, 0.25);
  return f;
}

}  // namespace

std::complex<double> gaussian_wavefunction(const Centroid& centre, double sigma, double hbar,
                                           Representation rep, double arg) {
  require_positive(sigma, "sigma");
  require_positive(hbar, "hbar");
  if (rep == Representation::momentum) {
    const double d = arg - centre.p;
    return std::pow(2.0 * M_PI * sigma * sigma, -0.25) *
           std::exp(-d * d / (4.0 * sigma * sigma) - kI * d * centre.x / hbar);
  }
  const double d = arg - centre.x;
  return std::pow(2.0 * sigma * sigma / (M_PI * hbar * hbar), 0.25) *
         std::exp(-sigma * sigma * d * d / (hbar * hbar) + kI * centre.p * arg / hbar);
}

double receiver_matrix_element(double delta1, double sigma1, double p_left, double p_right) {
  require_positive(delta1, "delta1");
  require_positive(sigma1, "sigma1");
  const double eps2 = sigma1 * sigma1 / (delta1 * delta1);
  const double var = delta1 * delta1 * (1.0 + eps2);
  const double diff = p_left - p_right;
  return std::exp(-(p_left * p_left + p_right * p_right) / (4.0 * var) -
                  diff * diff / (8.0 * var * eps2)) /
         std::sqrt(2.0 * M_PI * var);
}

QuantumState::QuantumState(Family family, double delta1, double sigma1, double sigma2,
                           double hbar)
    : family_(family), delta1_(delta1), sigma1_(sigma1), sigma2_(sigma2), hbar_(hbar) {
  require_positive(sigma1, "sigma1");
  require_positive(sigma2, "sigma2");
}

QuantumState QuantumState::thermal_gaussian(const ModelParams& params, double sigma1,
                                            double sigma2, Centroid agent) {
  require_finite(agent);
  return {ThermalGaussian{agent}, params.delta1(), sigma1, sigma2, params.hbar()};
}

QuantumState QuantumState::thermal_thermal(const ModelParams& params, double sigma1,
                                           double sigma2, double delta2) {
  require_positive(delta2, "delta2");
  return {ThermalThermal{delta2}, params.delta1(), sigma1, sigma2, params.hbar()};
}

QuantumState QuantumState::momentum_correlated(const ModelParams& params, double sigma,
                                               double c) {
  require_non_negative(c, "c");
  return {MomentumCorrelated{c}, params.delta1(), sigma, sigma, params.hbar()};
}

QuantumState QuantumState::superposition(const ModelParams& params, double sigma1,
                                         double sigma2, Centroid agent, double dx) {
  require_finite(agent);
  require_non_negative(dx, "dx");
  return {Superposition{agent, dx}, params.delta1(), sigma1, sigma2, params.hbar()};
}

QuantumState QuantumState::entangled(const ModelParams& params, double sigma1, double sigma2,
                                     double e) {
  require_non_negative(e, "e");
  return {Entangled{e}, params.delta1(), sigma1, sigma2, params.hbar()};
}

QuantumState QuantumState::position_correlated(const ModelParams& params, double sigma1,
                                               double sigma2, double c) {
  require_non_negative(c, "c");
  return {PositionCorrelated{c}, params.delta1(), sigma1, sigma2, params.hbar()};
}

std::string_view QuantumState::tag() const noexcept {
  return std::visit(overloaded{[](const ThermalGaussian&) { return "TG"; },
                               [](const ThermalThermal&) { return "TT"; },
                               [](const MomentumCorrelated&) { return "MomCorr"; },
                               [](const Superposition&) { return "Superpos"; },
                               [](const Entangled&) { return "Entangled"; },
                               [](const PositionCorrelated&) { return "PosCorr"; }},
                    family_);
}

void QuantumState::check_compatible(const ModelParams& params) const {
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
  if (!close(delta1_, params.delta1()) || !close(hbar_, params.hbar())) {
    throw std::invalid_argument("quantum state was prepared for different model parameters");
  }
}

MomentumGaussian QuantumState::momentum_envelope() const {
  const double v1 = delta1_ * delta1_ + sigma1_ * sigma1_;
  const double s2 = sigma2_ * sigma2_;
  return std::visit(
      overloaded{
          [&](const ThermalGaussian& f) {
            return MomentumGaussian{{0.0, f.agent.p}, {v1, 0.0, s2}};
          },
          [&](const ThermalThermal& f) {
            return MomentumGaussian{{0.0, 0.0}, {v1, 0.0, f.delta2 * f.delta2 + s2}};
          },
          [&](const MomentumCorrelated& f) {
            const double d2 = delta1_ * delta1_;
            return MomentumGaussian{{0.0, 0.0}, {v1, f.c * d2, f.c * f.c * d2 + s2}};
          },
          [&](const Superposition& f) {
            return MomentumGaussian{{0.0, f.agent.p}, {v1, 0.0, s2}};
          },
          [&](const Entangled& f) {
            // |psi_e|^2 factorises; the agent width shrinks with e.
            const EntangledForm form = entangled_form(*this, f.e);
            return MomentumGaussian{{0.0, 0.0}, {v1, 0.0, 1.0 / (4.0 * form.b)}};
          },
          [&](const PositionCorrelated&) {
            return MomentumGaussian{{0.0, 0.0}, {v1, 0.0, s2}};
          }},
      family_);
}

double interference_parameter(const QuantumState& state) {
  const auto* f = std::get_if<Superposition>(&state.family());
  if (f == nullptr) {
    throw std::invalid_argument("interference parameter is defined for the superposition only");
  }
  return 2.0 * state.sigma2() * f->dx / state.hbar();
}

double superposition_norm(double eta) { return 2.0 * (1.0 + std::exp(-eta * eta / 8.0)); }

double correlation_theta(const QuantumState& state) {
  double corr = 0.0;
  if (const auto* f = std::get_if<Entangled>(&state.family())) {
    corr = f->e;
  } else if (const auto* g = std::get_if<PositionCorrelated>(&state.family())) {
    corr = g->c;
  } else {
    throw std::invalid_argument("theta is defined for the entangled and position-correlated states");
  }
  if (corr == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return state.hbar() / (2.0 * corr * state.sigma1() * state.sigma2());
}

double entangled_kappa(const QuantumState& state) {
  const auto* f = std::get_if<Entangled>(&state.family());
  if (f == nullptr) {
    throw std::invalid_argument("kappa is defined for the entangled state only");
  }
  const double eps = state.epsilon();
  const double inv_theta = 2.0 * f->e * state.sigma1() * state.sigma2() / state.hbar();
  return eps / std::sqrt(1.0 + eps * eps + inv_theta * inv_theta);
}

std::complex<double> entangled_amplitude(const QuantumState& state, double p1, double p2) {
  const auto* f = std::get_if<Entangled>(&state.family());
  if (f == nullptr) {
    throw std::invalid_argument("entangled_amplitude requires the entangled state");
  }
  const EntangledForm form = entangled_form(state, f->e);
  return form.k * std::exp(-form.a * p1 * p1 - form.b * p2 * p2 - kI * form.c * p1 * p2);
}

std::complex<double> superposition_agent_amplitude(const QuantumState& state, double p2) {
  const auto* f = std::get_if<Superposition>(&state.family());
  if (f == nullptr) {
    throw std::invalid_argument("superposition_agent_amplitude requires the superposition");
  }
  const Centroid shifted{f->agent.x + f->dx, f->agent.p};
  const auto first =
      gaussian_wavefunction(f->agent, state.sigma2(), state.hbar(), Representation::momentum, p2);
  const auto second =
      gaussian_wavefunction(shifted, state.sigma2(), state.hbar(), Representation::momentum, p2);
  return (first + second) / std::sqrt(superposition_norm(interference_parameter(state)));
}

double momentum_density(const QuantumState& state, double p1, double p2) {
  const double v1 = state.delta1() * state.delta1() + state.sigma1() * state.sigma1();
  const double s2 = state.sigma2() * state.sigma2();
  return std::visit(
      overloaded{[&](const ThermalGaussian& f) {
                   return normal_pdf(p1, 0.0, v1) * normal_pdf(p2, f.agent.p, s2);
                 },
                 [&](const ThermalThermal& f) {
                   return normal_pdf(p1, 0.0, v1) * normal_pdf(p2, 0.0, f.delta2 * f.delta2 + s2);
                 },
                 [&](const MomentumCorrelated&) {
                   const MomentumGaussian law = state.momentum_envelope();
                   return normal_pdf2({p1, p2}, law.mean, law.cov);
                 },
                 [&](const Superposition&) {
                   return normal_pdf(p1, 0.0, v1) *
                          std::norm(superposition_agent_amplitude(state, p2));
                 },
                 [&](const Entangled&) { return std::norm(entangled_amplitude(state, p1, p2)); },
                 [&](const PositionCorrelated&) {
                   // Position shifts of the agent packet only change phases.
                   return normal_pdf(p1, 0.0, v1) * normal_pdf(p2, 0.0, s2);
                 }},
      state.family());
}

namespace {

double log_normal(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * d * d / variance - 0.5 * std::log(2.0 * M_PI * variance);
}

}  // namespace

double log_momentum_density(const QuantumState& state, double p1, double p2) {
  const double v1 = state.delta1() * state.delta1() + state.sigma1() * state.sigma1();
  const double s2 = state.sigma2() * state.sigma2();
  return std::visit(
      overloaded{[&](const ThermalGaussian& f) {
                   return log_normal(p1, 0.0, v1) + log_normal(p2, f.agent.p, s2);
                 },
                 [&](const ThermalThermal& f) {
                   return log_normal(p1, 0.0, v1) +
                          log_normal(p2, 0.0, f.delta2 * f.delta2 + s2);
                 },
                 [&](const MomentumCorrelated&) {
                   const MomentumGaussian law = state.momentum_envelope();
                   const Vec2 d{p1 - law.mean[0], p2 - law.mean[1]};
                   return -0.5 * law.cov.inverse().quad(d) -
                          std::log(2.0 * M_PI * std::sqrt(law.cov.det()));
                 },
                 [&](const Superposition& f) {
                   // The two packets differ by the phase exp(-i (p2 - pbar) dx / hbar).
                   const double phase = (p2 - f.agent.p) * f.dx / state.hbar();
                   return log_normal(p1, 0.0, v1) + log_normal(p2, f.agent.p, s2) +
                          std::log(2.0 + 2.0 * std::cos(phase)) -
                          std::log(superposition_norm(interference_parameter(state)));
                 },
                 [&](const Entangled& f) {
                   const EntangledForm form = entangled_form(state, f.e);
                   return 2.0 * std::log(std::abs(form.k)) - 2.0 * form.a * p1 * p1 -
                          2.0 * form.b * p2 * p2;
                 },
                 [&](const PositionCorrelated&) {
                   return log_normal(p1, 0.0, v1) + log_normal(p2, 0.0, s2);
                 }},
      state.family());
}

}  // namespace flucto::quantum
