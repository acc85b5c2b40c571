#include "flucto/linalg2.hpp"

#include <cmath>
#include <stdexcept>

namespace flucto {

Sym2 Sym2::inverse() const {
  const double d = det();
  if (d == 0.0) {
    throw std::domain_error("singular 2x2 matrix");
  }
  return {yy / d, -xy / d, xx / d};
}

double Sym2::smallest_eigenvalue() const noexcept {
  const double half_tr = 0.5 * trace();
  const double disc = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return half_tr - disc;
}

Lower2 cholesky(const Sym2& a) {
  if (a.xx < 0.0 || a.det() < -1e-14 * (a.xx * a.yy + a.xy * a.xy)) {
    throw std::domain_error("cholesky of a matrix that is not positive semidefinite");
  }
  Lower2 l;
  l.l11 = std::sqrt(a.xx);
  l.l21 = l.l11 > 0.0 ? a.xy / l.l11 : 0.0;
  const double rest = a.yy - l.l21 * l.l21;
  l.l22 = rest > 0.0 ? std::sqrt(rest) : 0.0;
  return l;
}

double normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * M_PI * variance);
}

double normal_pdf2(const Vec2& z, const Vec2& mean, const Sym2& cov) {
  const Vec2 d{z[0] - mean[0], z[1] - mean[1]};
  const double q = cov.inverse().quad(d);
  return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(cov.det()));
}

}  // namespace flucto
