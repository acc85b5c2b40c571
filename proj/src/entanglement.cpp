#include "flucto/entanglement.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "flucto/errors.hpp"

namespace flucto {

double entanglement_closed(double e, double epsilon, double sigma1, double sigma2, double hbar) {
  if (!(epsilon > 0.0) || !(e >= 0.0) || !(sigma1 > 0.0) || !(sigma2 > 0.0) || !(hbar > 0.0)) {
    throw std::invalid_argument("entanglement needs epsilon, widths, hbar > 0 and e >= 0");
  }
  if (e == 0.0) {
    return 0.0;
  }
  const double eps2 = epsilon * epsilon;
  const double inv_theta2 = std::pow(2.0 * e * sigma1 * sigma2 / hbar, 2);
  if (std::isinf(inv_theta2)) {
    return entanglement_saturation(epsilon);
  }
  return 1.0 - std::sqrt(eps2 * (1.0 + eps2 + inv_theta2) / ((1.0 + eps2) * (eps2 + inv_theta2)));
}

double entanglement_saturation(double epsilon) {
  const double eps2 = epsilon * epsilon;
  return 1.0 - std::sqrt(eps2 / (1.0 + eps2));
}

double reduced_receiver_element(const quantum::QuantumState& state, double p, double p_prime) {
  const auto* f = std::get_if<quantum::Entangled>(&state.family());
  if (f == nullptr) {
    throw UnsupportedState("reduced_receiver_element requires the entangled state");
  }
  const double d2 = state.delta1() * state.delta1();
  const double s1 = state.sigma1() * state.sigma1();
  const double s2 = state.sigma2() * state.sigma2();
  const double hbar = state.hbar();
  const double var = d2 + s1;
  const double a = 1.0 / (4.0 * var);
  const double b = 1.0 / (4.0 * s2) + d2 * s1 / var * f->e * f->e / (hbar * hbar);
  const double c = f->e * d2 / (hbar * var);
  const double diff = p - p_prime;
  return std::exp(-a * (p * p + p_prime * p_prime) - c * c * diff * diff / (8.0 * b)) /
         std::sqrt(2.0 * M_PI * var);
}

namespace {

double trapezoid_purity(const quantum::QuantumState& state, double su, double sw, double radius,
                        int nodes, int stride) {
  const double h = 2.0 * radius / (nodes - 1);
  double total = 0.0;
  for (int i = 0; i < nodes; i += stride) {
    const double wi = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    const double u = su * (-radius + h * i);
    double row = 0.0;
    for (int j = 0; j < nodes; j += stride) {
      const double wj = (j == 0 || j == nodes - 1) ? 0.5 : 1.0;
      const double w = sw * (-radius + h * j);
      const double rho = reduced_receiver_element(state, (u + w) / M_SQRT2, (u - w) / M_SQRT2);
      row += wj * rho * rho;
    }
    total += wi * row;
  }
  const double step = h * stride;
  return total * step * step * su * sw;
}

}  // namespace

double purity_oracle(const quantum::QuantumState& state, const PurityGrid& grid) {
  const auto* f = std::get_if<quantum::Entangled>(&state.family());
  if (f == nullptr) {
    throw UnsupportedState("purity_oracle requires the entangled state");
  }
  if (grid.nodes < 5 || grid.nodes % 4 != 1 || !(grid.radius > 0.0)) {
    throw std::invalid_argument("purity grid needs radius > 0 and nodes = 1 mod 4");
  }
  // |rho_1|^2 = exp(-2a u^2 - (2a + c^2 / 2b) w^2) / (2 pi V) in rotated
  // coordinates; scale each axis to unit Gaussian width.
  const double d2 = state.delta1() * state.delta1();
  const double s1 = state.sigma1() * state.sigma1();
  const double s2 = state.sigma2() * state.sigma2();
  const double hbar = state.hbar();
  const double var = d2 + s1;
  const double a = 1.0 / (4.0 * var);
  const double b = 1.0 / (4.0 * s2) + d2 * s1 / var * f->e * f->e / (hbar * hbar);
  const double c = f->e * d2 / (hbar * var);
  const double su = 1.0 / std::sqrt(4.0 * a);
  const double sw = 1.0 / std::sqrt(4.0 * a + c * c / b);

  const double fine = trapezoid_purity(state, su, sw, grid.radius, grid.nodes, 1);
  const double coarse = trapezoid_purity(state, su, sw, grid.radius, grid.nodes, 2);
  if (std::abs(fine - coarse) > grid.tolerance) {
    throw GridTooCoarse("purity changes by " + std::to_string(std::abs(fine - coarse)) +
                        " under grid refinement");
  }
  return 1.0 - fine;
}

std::vector<EntanglementReport> monotonicity_scan(double epsilon, double sigma1, double sigma2,
                                                  const std::vector<double>& e_grid,
                                                  double hbar) {
  for (std::size_t i = 1; i < e_grid.size(); ++i) {
    if (!(e_grid[i] > e_grid[i - 1])) {
      throw std::invalid_argument("e grid must be strictly increasing");
    }
  }
  const double saturation = entanglement_saturation(epsilon);
  std::vector<EntanglementReport> out;
  out.reserve(e_grid.size());
  for (double e : e_grid) {
    EntanglementReport r;
    r.e = e;
    r.epsilon = epsilon;
    r.theta_e = e == 0.0 ? std::numeric_limits<double>::infinity()
                         : hbar / (2.0 * e * sigma1 * sigma2);
    r.closed = entanglement_closed(e, epsilon, sigma1, sigma2, hbar);
    r.rescaled = r.closed / saturation;
    out.push_back(r);
  }
  return out;
}

}  // namespace flucto
