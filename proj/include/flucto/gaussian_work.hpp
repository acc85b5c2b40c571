#pragma once

#include "flucto/linalg2.hpp"
#include "flucto/model.hpp"

namespace flucto {

/// Work at odd multiples of tau is the quadratic form w = p^T S p in the
/// initial momenta p = (p1, p2).
Sym2 work_form(const ModelParams& params);

/// Gaussian law (or Gaussian envelope) of the initial momenta. The covariance
/// may be singular, as for perfectly correlated classical momenta.
struct MomentumGaussian {
  Vec2 mean{0.0, 0.0};
  Sym2 cov;
};

/// Smallest eigenvalue of I + 2 beta L^T S L with L L^T = cov. The average of
/// exp(-beta w) over the Gaussian is finite iff this is positive, whatever the
/// mean.
double exp_average_margin(const MomentumGaussian& law, const ModelParams& params, double beta);

inline bool exp_average_finite(const MomentumGaussian& law, const ModelParams& params,
                               double beta) {
  return exp_average_margin(law, params, beta) > 0.0;
}

}  // namespace flucto
