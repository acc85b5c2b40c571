#include "flucto/ft_closed_form.hpp"

#include <cmath>
#include <limits>

#include "flucto/detail/overloaded.hpp"
#include "flucto/errors.hpp"

namespace flucto {

using detail::overloaded;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double square(double x) { return x * x; }

// value = scale * M / sqrt(radicand) when radicand > 0.
FtPrediction from_radicand(const ModelParams& params, double radicand, double reference,
                           std::string condition, double scale = 1.0) {
  FtPrediction out;
  const double mass = params.total_mass();
  const double norm = reference != 0.0 ? square(reference) : square(mass);
  out.condition = std::move(condition);
  out.condition_margin = radicand / norm;
  out.valid = radicand > 0.0 && std::isfinite(radicand);
  if (out.valid) {
    out.value = scale * mass / std::sqrt(radicand);
    out.status = FtStatus::ok;
  } else {
    out.value = kInf;
    out.status = FtStatus::divergent;
  }
  return out;
}

// Mass-weighted squared "M frak".
double m_frak_squared(const ModelParams& params, double eps, double gam) {
  const double m1 = params.m1();
  const double m2 = params.m2();
  return square(m1 - m2) - 4.0 * m1 * (m1 * gam * gam + m2 * eps * eps);
}

double sqrt_or_nan(double x) { return x > 0.0 ? std::sqrt(x) : kNaN; }

}  // namespace

FtPrediction ft_classical(const classical::ClassicalState& state, const ModelParams& params) {
  const double m1 = params.m1();
  const double m2 = params.m2();
  return std::visit(
      overloaded{[&](const classical::Correlated& f) {
                   const double ref = m1 - m2 + 2.0 * m1 * f.c;
                   auto out = from_radicand(params, square(ref), params.total_mass(),
                                            "m1 - m2 + 2 m1 c != 0");
                   out.helpers["c"] = f.c;
                   return out;
                 },
                 [&](const auto&) {
                   return from_radicand(params, square(m1 - m2), params.total_mass(),
                                        "m1 != m2");
                 }},
      state.family());
}

FtPrediction ft_quantum(const quantum::QuantumState& state, const ModelParams& params) {
  state.check_compatible(params);
  const double m1 = params.m1();
  const double m2 = params.m2();
  const double eps = state.epsilon();
  const double gam = state.gamma();
  const double d1 = state.delta1();
  const double mf2 = m_frak_squared(params, eps, gam);

  FtPrediction out = std::visit(
      overloaded{
          [&](const quantum::ThermalGaussian& f) {
            const double pbar = f.agent.p;
            const double shift = mf2 > 0.0 ? std::exp(2.0 * m1 * m1 * eps * eps * pbar * pbar /
                                                      (mf2 * d1 * d1))
                                           : kNaN;
            return from_radicand(params, mf2, m1 - m2, "M_frak^2 > 0", shift);
          },
          [&](const quantum::ThermalThermal& f) {
            const double rad = mf2 - 4.0 * square(eps * m1 * f.delta2 / d1);
            auto p = from_radicand(params, rad, m1 - m2,
                                   "M_frak^2 - 4 eps^2 m1^2 (delta2/delta1)^2 > 0");
            p.helpers["delta2"] = f.delta2;
            return p;
          },
          [&](const quantum::MomentumCorrelated& f) {
            const double ref = m1 - m2 + 2.0 * m1 * f.c;
            const double ff = 4.0 * m1 * m1 *
                              (std::pow(eps, 4) + eps * eps * (f.c * f.c + m2 / m1));
            auto p = from_radicand(params, ref * ref - ff, ref, "F_frak < (m1 - m2 + 2 m1 c)^2");
            p.helpers["F_frak"] = ff;
            p.helpers["c"] = f.c;
            return p;
          },
          [&](const quantum::Superposition& f) {
            const double eta = quantum::interference_parameter(state);
            const double pbar = f.agent.p;
            if (!(mf2 > 0.0)) {
              auto p = from_radicand(params, mf2, m1 - m2, "M_frak^2 > 0");
              p.helpers["eta"] = eta;
              return p;
            }
            const double tg = std::exp(2.0 * m1 * m1 * eps * eps * pbar * pbar / (mf2 * d1 * d1));
            const double omega = 1.0 + 4.0 * m1 * m1 * gam * gam / mf2;
            const double s2 = state.sigma2();
            const double theta =
                4.0 * pbar * s2 * s2 * f.dx * eps * eps * m1 * m1 / (state.hbar() * d1 * d1 * mf2);
            const double factor = (1.0 + std::exp(-omega * eta * eta / 8.0) * std::cos(theta)) /
                                  (1.0 + std::exp(-eta * eta / 8.0));
            auto p = from_radicand(params, mf2, m1 - m2, "M_frak^2 > 0", tg * factor);
            p.helpers["eta"] = eta;
            p.helpers["Omega"] = omega;
            p.helpers["Theta"] = theta;
            return p;
          },
          [&](const quantum::Entangled& f) {
            const double theta = quantum::correlation_theta(state);
            const double term =
                std::isinf(theta) ? 0.0 : 4.0 * m1 * m1 * gam * gam / (1.0 + theta * theta * (1.0 + eps * eps));
            auto p = from_radicand(params, mf2 + term, m1 - m2,
                                   "M_frak^2 + 4 m1^2 gamma^2 / (1 + theta_e^2 (1 + eps^2)) > 0");
            p.helpers["theta_e"] = theta;
            p.helpers["kappa"] = quantum::entangled_kappa(state);
            p.helpers["e"] = f.e;
            return p;
          },
          [&](const quantum::PositionCorrelated& f) {
            auto p = from_radicand(params, mf2, m1 - m2, "M_frak^2 > 0");
            p.helpers["theta_c"] = quantum::correlation_theta(state);
            p.helpers["c"] = f.c;
            return p;
          }},
      state.family());

  out.helpers["M_frak"] = sqrt_or_nan(mf2);
  out.helpers["epsilon"] = eps;
  out.helpers["gamma"] = gam;
  return out;
}

double gamma_factor(double gamma, double ratio) {
  return 1.0 / std::sqrt(1.0 - square(2.0 * gamma * ratio / (1.0 - ratio)));
}

double xi_factor(double gamma, double eta, double ratio) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be finite and positive");
  }
  if (!(eta >= 0.0)) {
    throw DomainError("eta must be non-negative");
  }
  if (!(ratio > 0.0) || !(ratio < 1.0 / (1.0 + 2.0 * gamma))) {
    throw DomainError("mass ratio must lie in (0, 1 / (1 + 2 gamma))");
  }
  const double g = gamma_factor(gamma, ratio);
  return (1.0 + std::exp(-eta * eta * g * g / 8.0)) / (1.0 + std::exp(-eta * eta / 8.0));
}

XiSurface xi_surface(double gamma, const std::vector<double>& eta_grid,
                     const std::vector<double>& ratio_grid) {
  XiSurface s;
  s.gamma = gamma;
  s.etas = eta_grid;
  s.ratios = ratio_grid;
  s.values.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    auto& row = s.values.emplace_back();
    row.reserve(ratio_grid.size());
    for (double r : ratio_grid) {
      row.push_back(xi_factor(gamma, eta, r));
    }
  }
  return s;
}

FtPrediction ft_quantum_approx(const quantum::QuantumState& state, const ModelParams& params,
                               ApproxRegime regime) {
  state.check_compatible(params);
  const double m1 = params.m1();
  const double m2 = params.m2();
  const double eps = state.epsilon();
  const double gam = state.gamma();
  const double diff = m1 - m2;
  const auto unavailable = [&]() -> FtPrediction {
    throw RegimeUnavailable("no approximate form for variant " + std::string(state.tag()) +
                            " in the requested regime");
  };

  FtPrediction out;
  switch (regime) {
    case ApproxRegime::eps_ll_gamma_ll_1: {
      double ref = diff;
      if (const auto* f = std::get_if<quantum::MomentumCorrelated>(&state.family())) {
        ref = diff + 2.0 * m1 * f->c;
        out = from_radicand(params, ref * ref, ref, "m1 - m2 + 2 m1 c != 0");
      } else {
        out = from_radicand(params, diff * diff, diff, "m1 != m2");
      }
      break;
    }
    case ApproxRegime::eps_first_order: {
      const bool superpos = std::holds_alternative<quantum::Superposition>(state.family());
      if (!superpos && !std::holds_alternative<quantum::ThermalGaussian>(state.family()) &&
          !std::holds_alternative<quantum::ThermalThermal>(state.family())) {
        return unavailable();
      }
      const double rad = diff * diff - 4.0 * m1 * m1 * gam * gam;
      double xi = 1.0;
      double g = kNaN;
      if (rad > 0.0) {
        g = std::abs(diff) / std::sqrt(rad);
      }
      if (superpos) {
        const double eta = quantum::interference_parameter(state);
        if (rad > 0.0) {
          xi = (1.0 + std::exp(-eta * eta * g * g / 8.0)) / (1.0 + std::exp(-eta * eta / 8.0));
        }
        out = from_radicand(params, rad, diff, "(2 m1 gamma / (m1 - m2))^2 < 1", xi);
        out.helpers["Xi"] = rad > 0.0 ? xi : kNaN;
        out.helpers["eta"] = eta;
      } else {
        out = from_radicand(params, rad, diff, "(2 m1 gamma / (m1 - m2))^2 < 1");
      }
      out.helpers["Gamma"] = g;
      break;
    }
    case ApproxRegime::eps_ll_1: {
      const double hbar = state.hbar();
      const double beta = params.beta1();
      const double s12 = state.sigma1() * state.sigma2();
      if (const auto* f = std::get_if<quantum::MomentumCorrelated>(&state.family())) {
        const double ref = diff + 2.0 * m1 * f->c;
        out = from_radicand(params, ref * ref, ref, "m1 - m2 + 2 m1 c != 0");
      } else if (const auto* f = std::get_if<quantum::Entangled>(&state.family())) {
        // e^2 (1 + theta_e^2) with e theta_e = hbar / (2 sigma1 sigma2).
        const double denom = f->e * f->e + square(hbar / (2.0 * s12));
        const double rad = diff * diff - hbar * hbar * beta * beta / denom;
        out = from_radicand(params, rad, diff,
                            "(m1 - m2)^2 > hbar^2 beta1^2 / (e^2 (1 + theta_e^2))");
        out.helpers["theta_e"] = quantum::correlation_theta(state);
      } else if (const auto* f = std::get_if<quantum::PositionCorrelated>(&state.family())) {
        double term;
        if (f->c > 0.0) {
          const double theta = quantum::correlation_theta(state);
          term = hbar * hbar * beta * beta / (f->c * f->c * theta * theta);
        } else {
          term = square(2.0 * beta * s12);
        }
        out = from_radicand(params, diff * diff - term, diff,
                            "(m1 - m2)^2 > hbar^2 beta1^2 / (c^2 theta_c^2)");
        out.helpers["theta_c"] = quantum::correlation_theta(state);
      } else {
        return unavailable();
      }
      break;
    }
  }
  out.helpers["epsilon"] = eps;
  out.helpers["gamma"] = gam;
  return out;
}

void require_valid(const FtPrediction& prediction) {
  if (!prediction.valid) {
    throw ConvergenceError(prediction.condition, prediction.condition_margin);
  }
}

double jensen_bound(const FtPrediction& prediction, double beta1) {
  require_valid(prediction);
  return -std::log(prediction.value) / beta1;
}

}  // namespace flucto
