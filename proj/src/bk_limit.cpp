#include "flucto/bk_limit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "flucto/detail/parallel.hpp"
#include "flucto/ft_closed_form.hpp"
#include "flucto/rng.hpp"

namespace flucto {

namespace {

constexpr std::uint64_t kProductStreamOffset = std::uint64_t{1} << 62;

double deviation_of(const FtPrediction& p) {
  return p.valid ? std::abs(p.value - 1.0) : std::numeric_limits<double>::infinity();
}

}  // namespace

double bk_deviation(const classical::ClassicalState& state, const ModelParams& params) {
  return deviation_of(ft_classical(state, params));
}

double bk_deviation(const quantum::QuantumState& state, const ModelParams& params) {
  return deviation_of(ft_quantum(state, params));
}

double agent_backmap_sensitivity(double t, double ratio, double m1, double k) {
  if (!(t >= 0.0) || !(ratio >= 0.0) || !(m1 > 0.0) || !(k >= 0.0)) {
    throw std::invalid_argument("backmap sensitivity needs t, ratio, k >= 0 and m1 > 0");
  }
  if (ratio == 0.0) {
    return 0.0;
  }
  const double mu = m1 / (1.0 + ratio);
  const double omega = std::sqrt(k / mu);
  const double s = -t;
  const double phase = omega * s;
  const double one_minus_cos = 2.0 * std::pow(std::sin(0.5 * phase), 2);
  const double sinc_term = omega > 0.0 ? std::sin(phase) / omega : s;
  const double scale = std::sqrt(ratio) / (1.0 + ratio);
  const double b11 = scale * one_minus_cos;
  const double b12 = scale * (s - sinc_term);
  const double b21 = scale * omega * std::sin(phase);
  const double b22 = b11;
  // Largest singular value from B^T B.
  const double p = b11 * b11 + b21 * b21;
  const double q = b11 * b12 + b21 * b22;
  const double r = b12 * b12 + b22 * b22;
  const double mean = 0.5 * (p + r);
  const double spread = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
  return std::sqrt(mean + spread);
}

double agent_backmap_sensitivity(double t, const ModelParams& params) {
  return agent_backmap_sensitivity(t, params.m1() / params.m2(), params.m1(), params.k());
}

std::string_view family_name(BkFamilyKind kind) {
  switch (kind) {
    case BkFamilyKind::classical_tg: return "classical_tg";
    case BkFamilyKind::classical_tt: return "classical_tt";
    case BkFamilyKind::classical_corr: return "classical_corr";
    case BkFamilyKind::classical_corr_critical: return "classical_corr_critical";
    case BkFamilyKind::quantum_tg: return "quantum_tg";
    case BkFamilyKind::quantum_tt: return "quantum_tt";
    case BkFamilyKind::entangled: return "entangled";
  }
  return "unknown";
}

BkScanReport bk_scan(const BkFamily& family, const std::vector<double>& ratios,
                     const ModelParams& base) {
  BkScanReport report;
  report.family = family;
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) {
      throw std::invalid_argument("mass ratios must lie in (0, 1)");
    }
    const ModelParams params = base.with_masses(base.m1(), base.m1() / r);
    double deviation = 0.0;
    switch (family.kind) {
      case BkFamilyKind::classical_tg:
        deviation = bk_deviation(classical::ClassicalState::thermal_gaussian(params, family.sigma2), params);
        break;
      case BkFamilyKind::classical_tt:
        deviation = bk_deviation(classical::ClassicalState::thermal_thermal(params, family.delta2), params);
        break;
      case BkFamilyKind::classical_corr:
        deviation = bk_deviation(classical::ClassicalState::correlated(params, family.c), params);
        break;
      case BkFamilyKind::classical_corr_critical: {
        const double c = (params.m2() - params.m1()) / (2.0 * params.m1());
        deviation = bk_deviation(classical::ClassicalState::correlated(params, c), params);
        break;
      }
      case BkFamilyKind::quantum_tg:
        deviation = bk_deviation(
            quantum::QuantumState::thermal_gaussian(params, family.sigma1, family.sigma2), params);
        break;
      case BkFamilyKind::quantum_tt:
        deviation = bk_deviation(quantum::QuantumState::thermal_thermal(
                                     params, family.sigma1, family.sigma2, family.delta2),
                                 params);
        break;
      case BkFamilyKind::entangled:
        deviation = bk_deviation(
            quantum::QuantumState::entangled(params, family.sigma1, family.sigma2, family.e),
            params);
        break;
    }
    BkScanRow row;
    row.ratio = r;
    row.m2 = params.m2();
    row.deviation = deviation;
    row.diverged = !std::isfinite(deviation);
    row.sensitivity = agent_backmap_sensitivity(params.tau(), params);
    report.rows.push_back(row);
  }
  return report;
}

FtEstimate correlation_functional_mc(const classical::ClassicalState& state,
                                     const ModelParams& params, const ProcessInterval& interval,
                                     std::size_t n, std::uint64_t seed, unsigned threads) {
  if (n < 10000) {
    throw std::invalid_argument("Monte Carlo sample size n must be at least 10000");
  }
  const double beta = params.beta1();
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  struct Chunk {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
  };
  std::vector<Chunk> stats(chunks);
  detail::parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t count = std::min(kChunkSize, n - c * kChunkSize);
    std::vector<PhasePoint> joint(count);
    std::vector<PhasePoint> other(count);
    classical::sample_into(state, seed, c, joint);
    classical::sample_into(state, seed, kProductStreamOffset + c, other);
    Chunk s;
    for (std::size_t i = 0; i < count; ++i) {
      const PhasePoint product{joint[i].x1, joint[i].p1, other[i].x2, other[i].p2};
      const double d = std::exp(-beta * work_classical(joint[i], interval, params)) -
                       std::exp(-beta * work_classical(product, interval, params));
      s.n += 1.0;
      const double delta = d - s.mean;
      s.mean += delta / s.n;
      s.m2 += delta * (d - s.mean);
    }
    stats[c] = s;
  });
  Chunk total;
  for (const auto& s : stats) {
    if (total.n == 0.0) {
      total = s;
      continue;
    }
    const double delta = s.mean - total.mean;
    const double sum = total.n + s.n;
    total.mean += delta * s.n / sum;
    total.m2 += s.m2 + delta * delta * total.n * s.n / sum;
    total.n = sum;
  }
  FtEstimate out;
  out.method = EstimateMethod::monte_carlo;
  out.count = static_cast<std::uint64_t>(total.n);
  out.value = total.mean;
  out.error = std::sqrt(total.m2 / (total.n - 1.0) / total.n);
  out.effective_sample_size = total.n;
  out.diverged = !std::isfinite(out.value);
  return out;
}

}  // namespace flucto
