#include "flucto/gaussian_work.hpp"

namespace flucto {

Sym2 work_form(const ModelParams& params) {
  const double M = params.total_mass();
  const double s = 2.0 / (M * M);
  return {-s * params.m2(), 0.5 * s * (params.m1() - params.m2()), s * params.m1()};
}

double exp_average_margin(const MomentumGaussian& law, const ModelParams& params, double beta) {
  const Lower2 l = cholesky(law.cov);
  const Sym2 s = work_form(params);
  // L^T S L for L = [[l11, 0], [l21, l22]].
  const double a = l.l11 * (s.xx * l.l11 + s.xy * l.l21) + l.l21 * (s.xy * l.l11 + s.yy * l.l21);
  const double b = l.l11 * s.xy * l.l22 + l.l21 * s.yy * l.l22;
  const double c = l.l22 * s.yy * l.l22;
  const Sym2 m{1.0 + 2.0 * beta * a, 2.0 * beta * b, 1.0 + 2.0 * beta * c};
  return m.smallest_eigenvalue();
}

}  // namespace flucto
