#include "flucto/classical_states.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "flucto/detail/overloaded.hpp"
#include "flucto/linalg2.hpp"
#include "flucto/rng.hpp"

namespace flucto::classical {

using detail::overloaded;

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and positive");
  }
}

}  // namespace

ClassicalState::ClassicalState(Family family, double delta1, double hbar,
                               double receiver_x_width)
    : family_(family), delta1_(delta1), hbar_(hbar), receiver_x_width_(receiver_x_width) {
  require_positive(receiver_x_width, "receiver_x_width");
}

ClassicalState ClassicalState::thermal_gaussian(const ModelParams& params, double sigma2,
                                                double xbar2, double pbar2,
                                                double receiver_x_width) {
  require_positive(sigma2, "sigma2");
  if (!std::isfinite(xbar2) || !std::isfinite(pbar2)) {
    throw std::invalid_argument("agent centroid must be finite");
  }
  return {ThermalGaussian{sigma2, xbar2, pbar2}, params.delta1(), params.hbar(),
          receiver_x_width};
}

ClassicalState ClassicalState::thermal_thermal(const ModelParams& params, double delta2,
                                               double receiver_x_width, double agent_x_width) {
  require_positive(delta2, "delta2");
  require_positive(agent_x_width, "agent_x_width");
  return {ThermalThermal{delta2, agent_x_width}, params.delta1(), params.hbar(),
          receiver_x_width};
}

ClassicalState ClassicalState::correlated(const ModelParams& params, double c,
                                          double receiver_x_width, double agent_x_width) {
  if (!std::isfinite(c) || c < 0.0) {
    throw std::invalid_argument("c must be finite and non-negative");
  }
  require_positive(agent_x_width, "agent_x_width");
  return {Correlated{c, agent_x_width}, params.delta1(), params.hbar(), receiver_x_width};
}

std::string_view ClassicalState::tag() const noexcept {
  return std::visit(overloaded{[](const ThermalGaussian&) { return "TG"; },
                               [](const ThermalThermal&) { return "TT"; },
                               [](const Correlated&) { return "Corr"; }},
                    family_);
}

double ClassicalState::agent_x_width() const {
  return std::visit(
      overloaded{[&](const ThermalGaussian& s) { return hbar_ / (2.0 * s.sigma2); },
                 [](const ThermalThermal& s) { return s.agent_x_width; },
                 [](const Correlated& s) { return s.agent_x_width; }},
      family_);
}

MomentumGaussian ClassicalState::momentum_law() const {
  const double d2 = delta1_ * delta1_;
  return std::visit(
      overloaded{
          [&](const ThermalGaussian& s) {
            return MomentumGaussian{{0.0, s.pbar2}, {d2, 0.0, s.sigma2 * s.sigma2}};
          },
          [&](const ThermalThermal& s) {
            return MomentumGaussian{{0.0, 0.0}, {d2, 0.0, s.delta2 * s.delta2}};
          },
          [&](const Correlated& s) {
            return MomentumGaussian{{0.0, 0.0}, {d2, s.c * d2, s.c * s.c * d2}};
          }},
      family_);
}

double momentum_density(const ClassicalState& state, double p1, double p2) {
  const double d2 = state.delta1() * state.delta1();
  return std::visit(
      overloaded{[&](const ThermalGaussian& s) {
                   return normal_pdf(p1, 0.0, d2) * normal_pdf(p2, s.pbar2, s.sigma2 * s.sigma2);
                 },
                 [&](const ThermalThermal& s) {
                   return normal_pdf(p1, 0.0, d2) * normal_pdf(p2, 0.0, s.delta2 * s.delta2);
                 },
                 [&](const Correlated&) { return normal_pdf(p1, 0.0, d2); }},
      state.family());
}

void sample_into(const ClassicalState& state, std::uint64_t seed, std::uint64_t stream,
                 std::span<PhasePoint> out) {
  auto engine = substream_engine(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double d1 = state.delta1();
  const double wx1 = state.receiver_x_width();
  const double wx2 = state.agent_x_width();

  std::visit(overloaded{[&](const ThermalGaussian& s) {
                          for (auto& pt : out) {
                            pt.x1 = wx1 * normal(engine);
                            pt.p1 = d1 * normal(engine);
                            pt.x2 = s.xbar2 + wx2 * normal(engine);
                            pt.p2 = s.pbar2 + s.sigma2 * normal(engine);
                          }
                        },
                        [&](const ThermalThermal& s) {
                          for (auto& pt : out) {
                            pt.x1 = wx1 * normal(engine);
                            pt.p1 = d1 * normal(engine);
                            pt.x2 = wx2 * normal(engine);
                            pt.p2 = s.delta2 * normal(engine);
                          }
                        },
                        [&](const Correlated& s) {
                          for (auto& pt : out) {
                            pt.x1 = wx1 * normal(engine);
                            pt.p1 = d1 * normal(engine);
                            pt.x2 = wx2 * normal(engine);
                            pt.p2 = s.c * pt.p1;
                          }
                        }},
             state.family());
}

SampleBatch sample(const ClassicalState& state, std::uint64_t seed, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("sample size must be at least 1");
  }
  SampleBatch batch{seed, n, std::vector<PhasePoint>(n)};
  std::span<PhasePoint> all(batch.points);
  for (std::size_t start = 0, stream = 0; start < n; start += kChunkSize, ++stream) {
    const std::size_t count = std::min(kChunkSize, n - start);
    sample_into(state, seed, stream, all.subspan(start, count));
  }
  return batch;
}

}  // namespace flucto::classical
