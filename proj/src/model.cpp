#include "flucto/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flucto {
namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be finite and positive");
  }
}

// Centre-of-mass / relative solution for an arbitrary (possibly negative) t.
PhasePoint evolve_any(const PhasePoint& s, double t, const ModelParams& params) {
  const double m1 = params.m1();
  const double m2 = params.m2();
  const double M = params.total_mass();
  const double mu = params.reduced_mass();
  const double w = params.omega();

  const double x_cm = (m1 * s.x1 + m2 * s.x2) / M;
  const double x_r = s.x2 - s.x1;
  const double p_cm = s.p1 + s.p2;
  const double p_r = mu * (s.p2 / m2 - s.p1 / m1);

  const double cs = std::cos(w * t);
  const double sn = std::sin(w * t);
  const double x_cm_t = x_cm + p_cm * t / M;
  const double x_r_t = x_r * cs + p_r / (mu * w) * sn;
  const double p_r_t = p_r * cs - mu * w * x_r * sn;

  PhasePoint out;
  out.x1 = x_cm_t - m2 / M * x_r_t;
  out.x2 = x_cm_t + m1 / M * x_r_t;
  out.p1 = m1 / M * p_cm - p_r_t;
  out.p2 = m2 / M * p_cm + p_r_t;
  return out;
}

}  // namespace

ModelParams::ModelParams(double m1, double m2, double k, double beta1, double hbar)
    : m1_(m1), m2_(m2), k_(k), beta1_(beta1), hbar_(hbar) {
  require_positive(m1, "m1");
  require_positive(m2, "m2");
  require_positive(k, "k");
  require_positive(beta1, "beta1");
  require_positive(hbar, "hbar");
}

double ModelParams::omega() const noexcept { return std::sqrt(k_ / reduced_mass()); }
double ModelParams::tau() const noexcept { return M_PI / omega(); }
double ModelParams::delta1() const noexcept { return std::sqrt(m1_ / beta1_); }

DerivedParams derived_params(const ModelParams& params) {
  return {params.total_mass(), params.reduced_mass(), params.omega(), params.tau(),
          params.delta1()};
}

ProcessInterval ProcessInterval::odd_multiple(int v) {
  if (v <= 0 || v % 2 == 0) {
    throw std::invalid_argument("process.v must be an odd positive integer");
  }
  return {false, v, 0.0};
}

ProcessInterval ProcessInterval::generic(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("process.t must be finite and non-negative");
  }
  return {true, 0, t};
}

double ProcessInterval::duration(const ModelParams& params) const noexcept {
  return generic_ ? t_ : v_ * params.tau();
}

double hamiltonian(const PhasePoint& p, const ModelParams& params) {
  const double dx = p.x2 - p.x1;
  return p.p1 * p.p1 / (2.0 * params.m1()) + p.p2 * p.p2 / (2.0 * params.m2()) +
         0.5 * params.k() * dx * dx;
}

PhasePoint evolve_classical(const PhasePoint& start, double t, const ModelParams& params) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("evolve_classical requires t >= 0");
  }
  if (t == 0.0) {
    return start;
  }
  return evolve_any(start, t, params);
}

FlowMatrix flow_matrix(double t, const ModelParams& params) {
  FlowMatrix m{};
  for (int col = 0; col < 4; ++col) {
    PhasePoint e;
    (col == 0 ? e.x1 : col == 1 ? e.p1 : col == 2 ? e.x2 : e.p2) = 1.0;
    const PhasePoint out = evolve_any(e, t, params);
    m[0][col] = out.x1;
    m[1][col] = out.p1;
    m[2][col] = out.x2;
    m[3][col] = out.p2;
  }
  return m;
}

MomentumCoefficients momentum_coefficients(double t, const ModelParams& params) {
  const double M = params.total_mass();
  const double cs = std::cos(params.omega() * t);
  return {(params.m1() + params.m2() * cs) / M, (1.0 - cs) * params.m1() / M,
          params.reduced_mass() * params.omega() * std::sin(params.omega() * t)};
}

double work_eigenvalue(double p1, double p2, const ModelParams& params) {
  const double M = params.total_mass();
  return 2.0 / (M * M) * (params.m1() * p2 - params.m2() * p1) * (p1 + p2);
}

double work_classical(const PhasePoint& start, const ProcessInterval& interval,
                      const ModelParams& params) {
  if (!interval.is_generic()) {
    return work_eigenvalue(start.p1, start.p2, params);
  }
  const PhasePoint end = evolve_classical(start, interval.duration(params), params);
  return (end.p1 * end.p1 - start.p1 * start.p1) / (2.0 * params.m1());
}

}  // namespace flucto
