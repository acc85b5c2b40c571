#include "flucto/tpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "flucto/detail/parallel.hpp"
#include "flucto/errors.hpp"
#include "flucto/linalg2.hpp"
#include "flucto/rng.hpp"

namespace flucto {

namespace {

// Correlation parameter linking receiver momentum to agent position.
double position_coupling(const quantum::QuantumState& state) {
  if (const auto* f = std::get_if<quantum::Entangled>(&state.family())) {
    return f->e;
  }
  if (const auto* f = std::get_if<quantum::PositionCorrelated>(&state.family())) {
    return f->c;
  }
  throw UnsupportedState("two-point measurement is defined for Entangled and PosCorr states, got " +
                         std::string(state.tag()));
}

double first_variance(const quantum::QuantumState& state) {
  return state.delta1() * state.delta1() + state.sigma1() * state.sigma1();
}

}  // namespace

double first_measurement_density(const quantum::QuantumState& state, double p) {
  position_coupling(state);
  return normal_pdf(p, 0.0, first_variance(state));
}

GaussianProduct post_measurement_state(const quantum::QuantumState& state, double p) {
  const double coupling = position_coupling(state);
  GaussianProduct out;
  out.receiver = {0.0, p};
  out.sigma1 = state.sigma1();
  out.agent = {coupling * p, 0.0};
  out.sigma2 = state.sigma2();
  out.approximate = state.epsilon() > 0.1;
  return out;
}

double conditional_overlap(const quantum::QuantumState& state, double p) {
  if (!std::holds_alternative<quantum::Entangled>(state.family())) {
    throw UnsupportedState("conditional_overlap requires the entangled state");
  }
  const GaussianProduct claimed = post_measurement_state(state, p);
  const double s2 = state.sigma2();
  const double radius = 12.0 * s2;
  const int nodes = 4001;
  const double h = 2.0 * radius / (nodes - 1);
  std::complex<double> inner = 0.0;
  double norm = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double q = -radius + h * i;
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    const auto exact = quantum::entangled_amplitude(state, p, q);
    const auto packet = quantum::gaussian_wavefunction(claimed.agent, s2, state.hbar(),
                                                       quantum::Representation::momentum, q);
    inner += w * std::conj(packet) * exact;
    norm += w * std::norm(exact);
  }
  return std::norm(inner * h) / (norm * h);
}

TpmRun run_tpm(const quantum::QuantumState& state, const ModelParams& params,
               const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
               const TpmOptions& options) {
  position_coupling(state);
  state.check_compatible(params);
  if (interval.is_generic()) {
    throw std::invalid_argument("two-point measurement requires an odd multiple of tau");
  }
  if (n == 0) {
    throw std::invalid_argument("two-point measurement needs n >= 1");
  }
  const double m1 = params.m1();
  const double mass = params.total_mass();
  const double rho = (m1 - params.m2()) / mass;
  const double lever = 2.0 * m1 / mass;
  const double beta = params.beta1();
  const double first_sd = std::sqrt(first_variance(state));
  const double s1 = state.sigma1();
  const double s2 = state.sigma2();

  struct Chunk {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
  };

  TpmRun run;
  run.tag = std::string(state.tag());
  run.n = n;
  run.seed = seed;
  if (options.keep_records) {
    run.records.resize(n);
  }
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Chunk> stats(chunks);
  detail::parallel_for(chunks, options.threads, [&](std::size_t c) {
    auto engine = substream_engine(seed, c);
    std::normal_distribution<double> gauss;
    const std::size_t start = c * kChunkSize;
    const std::size_t count = std::min(kChunkSize, n - start);
    Chunk s;
    for (std::size_t i = 0; i < count; ++i) {
      TpmRecord r;
      r.first = first_sd * gauss(engine);
      // Momenta of the collapsed product state.
      const double p1 = r.first + s1 * gauss(engine);
      const double p2 = s2 * gauss(engine);
      r.second = rho * p1 + lever * p2;
      r.work = (r.second * r.second - r.first * r.first) / (2.0 * m1);
      if (options.keep_records) {
        run.records[start + i] = r;
      }
      const double f = std::exp(-beta * r.work);
      ++s.n;
      const double delta = f - s.mean;
      s.mean += delta / static_cast<double>(s.n);
      s.m2 += delta * (f - s.mean);
      s.sum += f;
      s.sum_sq += f * f;
    }
    stats[c] = s;
  });

  Chunk total;
  for (const auto& s : stats) {
    if (total.n == 0) {
      total = s;
      continue;
    }
    const double na = static_cast<double>(total.n);
    const double nb = static_cast<double>(s.n);
    const double delta = s.mean - total.mean;
    total.mean += delta * nb / (na + nb);
    total.m2 += s.m2 + delta * delta * na * nb / (na + nb);
    total.n += s.n;
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
  }
  FtEstimate& est = run.exp_average;
  est.method = EstimateMethod::monte_carlo;
  est.count = total.n;
  est.value = total.mean;
  const double nn = static_cast<double>(total.n);
  est.error = total.n > 1 ? std::sqrt(total.m2 / (nn - 1.0) / nn) : 0.0;
  est.effective_sample_size = total.sum_sq > 0.0 ? total.sum * total.sum / total.sum_sq : nn;
  const double exact = tpm_exp_average_exact(state, params);
  est.diverged = !std::isfinite(exact) || est.effective_sample_size < 10.0;
  if (est.diverged) {
    est.warnings.emplace_back("two-point exponential average diverges or is dominated by few samples");
  }
  return run;
}

double tpm_exp_average_exact(const quantum::QuantumState& state, const ModelParams& params) {
  position_coupling(state);
  const double m1 = params.m1();
  const double mass = params.total_mass();
  const double rho = (m1 - params.m2()) / mass;
  const double lever = 2.0 * m1 / mass;
  const double a = params.beta1() / (2.0 * m1);
  const double v = first_variance(state);
  const double cond = rho * rho * state.sigma1() * state.sigma1() +
                      lever * lever * state.sigma2() * state.sigma2();
  // E[exp(-a p'^2) | p] = (1 + 2 a s^2)^(-1/2) exp(-a rho^2 p^2 / (1 + 2 a s^2)).
  const double shrink = 1.0 + 2.0 * a * cond;
  const double coef = a - a * rho * rho / shrink;
  const double outer = 1.0 - 2.0 * coef * v;
  if (!(outer > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 / std::sqrt(shrink * outer);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("KS statistic needs two non-empty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) {
      ++i;
    }
    while (j < b.size() && b[j] <= x) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("KS critical value needs n, m >= 1 and 0 < alpha < 1");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace flucto
