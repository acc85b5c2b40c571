#include "flucto/ft_numeric.hpp"

#include <cmath>
#include <stdexcept>

#include "flucto/detail/parallel.hpp"
#include "flucto/errors.hpp"
#include "flucto/gaussian_work.hpp"
#include "flucto/rng.hpp"

namespace flucto {

namespace {

struct ChunkStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
    sum += x;
    sum_sq += x * x;
  }

  void merge(const ChunkStats& o) {
    if (o.n == 0) {
      return;
    }
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

template <class F>
ChunkStats mc_reduce(const classical::ClassicalState& state, std::size_t n, std::uint64_t seed,
                     unsigned threads, F&& f) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkStats> stats(chunks);
  detail::parallel_for(chunks, threads, [&](std::size_t i) {
    const std::size_t start = i * kChunkSize;
    const std::size_t count = std::min(kChunkSize, n - start);
    std::vector<PhasePoint> buffer(count);
    classical::sample_into(state, seed, i, buffer);
    ChunkStats s;
    for (const auto& point : buffer) {
      s.push(f(point));
    }
    stats[i] = s;
  });
  ChunkStats total;
  for (const auto& s : stats) {
    total.merge(s);
  }
  return total;
}

FtEstimate from_stats(const ChunkStats& s) {
  FtEstimate out;
  out.method = EstimateMethod::monte_carlo;
  out.count = s.n;
  out.value = s.mean;
  const double n = static_cast<double>(s.n);
  out.error = s.n > 1 ? std::sqrt(s.m2 / (n - 1.0) / n) : 0.0;
  out.effective_sample_size = s.sum_sq > 0.0 ? s.sum * s.sum / s.sum_sq : n;
  return out;
}

void require_sample_size(std::size_t n) {
  if (n < 10000) {
    throw std::invalid_argument("Monte Carlo sample size n must be at least 10000");
  }
}

// Whitened tensor-grid integration. Values are stored on the finest grid and
// reduced row by row in a fixed order.
class WhitenedGrid {
 public:
  WhitenedGrid(const Vec2& centre, const Sym2& precision, const QuadratureConfig& config)
      : centre_(centre), factor_(cholesky(precision.inverse())), config_(config) {}

  template <class G>
  FtEstimate integrate(G&& integrand) const {
    const int n = config_.nodes;
    const double h = 2.0 * config_.radius / (n - 1);
    const double jac = std::abs(factor_.det());
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    detail::parallel_for(static_cast<std::size_t>(n), config_.threads, [&](std::size_t i) {
      const double u1 = -config_.radius + h * static_cast<double>(i);
      for (int j = 0; j < n; ++j) {
        const double u2 = -config_.radius + h * j;
        const Vec2 d = factor_.apply({u1, u2});
        const Vec2 z{centre_[0] + d[0], centre_[1] + d[1]};
        values[i * n + j] = integrand(z) * jac;
      }
    });

    std::vector<double> levels;
    for (int level = 0, stride = 1; level <= config_.levels; ++level, stride *= 2) {
      levels.push_back(trapezoid(values, n, stride, h * stride));
    }
    FtEstimate out;
    out.method = EstimateMethod::quadrature;
    out.count = static_cast<std::uint64_t>(n) * n;
    out.value = levels.front();
    out.error = std::abs(levels[0] - levels[1]);
    for (std::size_t k = 2; k < levels.size(); ++k) {
      if (std::abs(levels[k - 2] - levels[k - 1]) > std::abs(levels[k - 1] - levels[k])) {
        out.warnings.emplace_back("quadrature refinement is not converging monotonically");
        break;
      }
    }
    return out;
  }

 private:
  static double trapezoid(const std::vector<double>& values, int n, int stride, double h) {
    double total = 0.0;
    for (int i = 0; i < n; i += stride) {
      const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      double row = 0.0;
      for (int j = 0; j < n; j += stride) {
        const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        row += wj * values[static_cast<std::size_t>(i) * n + j];
      }
      total += wi * row;
    }
    return total * h * h;
  }

  Vec2 centre_;
  Lower2 factor_;
  QuadratureConfig config_;
};

}  // namespace

void QuadratureConfig::validate() const {
  if (!(radius >= 6.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("quadrature radius must be at least 6");
  }
  if (nodes < 5 || nodes % 2 == 0) {
    throw std::invalid_argument("quadrature nodes must be odd and at least 5");
  }
  if (levels < 1) {
    throw std::invalid_argument("quadrature levels must be at least 1");
  }
  int n = nodes;
  for (int i = 0; i < levels; ++i) {
    if ((n - 1) % 2 != 0 || n < 5) {
      throw std::invalid_argument("quadrature nodes do not support the requested levels");
    }
    n = (n - 1) / 2 + 1;
  }
}

FtEstimate estimate_mc(const classical::ClassicalState& state, const ModelParams& params,
                       const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
                       const McOptions& options) {
  require_sample_size(n);
  const double beta = options.beta.value_or(params.beta1());
  if (!std::isfinite(beta) || beta < 0.0) {
    throw std::invalid_argument("beta must be finite and non-negative");
  }
  const ChunkStats stats = mc_reduce(state, n, seed, options.threads, [&](const PhasePoint& p) {
    return beta == 0.0 ? 1.0 : std::exp(-beta * work_classical(p, interval, params));
  });
  FtEstimate out = from_stats(stats);

  bool margin_ok = true;
  if (!interval.is_generic()) {
    const MomentumGaussian law = state.momentum_law();
    margin_ok = exp_average_margin(law, params, beta) > 0.0;
    out.variance_finite = exp_average_margin(law, params, 2.0 * beta) > 0.0;
    if (!margin_ok) {
      out.warnings.emplace_back("exponential average diverges for this state");
    }
    if (!out.variance_finite) {
      out.warnings.emplace_back(
          "exp(-beta W) has infinite variance under this state; the standard error is unreliable");
    }
  } else {
    out.warnings.emplace_back("no analytic divergence check for generic intervals");
  }
  if (!std::isfinite(out.value) || out.effective_sample_size < 10.0) {
    out.warnings.emplace_back("effective sample size below 10");
  }
  out.diverged = !margin_ok || !std::isfinite(out.value) || out.effective_sample_size < 10.0;
  return out;
}

FtEstimate mean_work(const classical::ClassicalState& state, const ModelParams& params,
                     const ProcessInterval& interval, std::size_t n, std::uint64_t seed,
                     unsigned threads) {
  require_sample_size(n);
  const ChunkStats stats = mc_reduce(state, n, seed, threads, [&](const PhasePoint& p) {
    return work_classical(p, interval, params);
  });
  FtEstimate out = from_stats(stats);
  out.effective_sample_size = static_cast<double>(stats.n);
  return out;
}

FtEstimate estimate_quadrature(const quantum::QuantumState& state, const ModelParams& params,
                               const QuadratureConfig& config) {
  config.validate();
  state.check_compatible(params);
  const double beta = params.beta1();
  const MomentumGaussian env = state.momentum_envelope();
  const Sym2 env_precision = env.cov.inverse();
  const Sym2 s = work_form(params);
  const Sym2 precision = env_precision + (2.0 * beta) * s;
  if (!precision.positive_definite()) {
    throw NonIntegrable("exp(-beta1 W) is not integrable against the " +
                        std::string(state.tag()) + " momentum density");
  }
  const Vec2 shifted = env_precision.apply(env.mean);
  const Vec2 centre = precision.inverse().apply(shifted);
  const WhitenedGrid grid(centre, precision, config);
  return grid.integrate([&](const Vec2& z) {
    // The density alone underflows where exp(-beta1 w) is huge near the boundary.
    return std::exp(quantum::log_momentum_density(state, z[0], z[1]) - beta * s.quad(z));
  });
}

FtEstimate mean_work(const quantum::QuantumState& state, const ModelParams& params,
                     const QuadratureConfig& config) {
  config.validate();
  state.check_compatible(params);
  const MomentumGaussian env = state.momentum_envelope();
  const Sym2 s = work_form(params);
  const WhitenedGrid grid(env.mean, env.cov.inverse(), config);
  return grid.integrate([&](const Vec2& z) {
    return s.quad(z) * quantum::momentum_density(state, z[0], z[1]);
  });
}

}  // namespace flucto
