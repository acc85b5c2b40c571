#pragma once

#include <array>

namespace flucto {

using Vec2 = std::array<double, 2>;

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const noexcept { return xx * yy - xy * xy; }
  double trace() const noexcept { return xx + yy; }
  Sym2 inverse() const;
  bool positive_definite() const noexcept { return xx > 0.0 && det() > 0.0; }
  double smallest_eigenvalue() const noexcept;
  double quad(const Vec2& v) const noexcept {
    return xx * v[0] * v[0] + 2.0 * xy * v[0] * v[1] + yy * v[1] * v[1];
  }
  Vec2 apply(const Vec2& v) const noexcept {
    return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]};
  }

  friend Sym2 operator+(const Sym2& a, const Sym2& b) noexcept {
    return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
  }
  friend Sym2 operator*(double s, const Sym2& a) noexcept { return {s * a.xx, s * a.xy, s * a.yy}; }
};

/// Lower-triangular factor L with L L^T = A. Works for positive
/// semidefinite A (a zero pivot yields a zero column).
struct Lower2 {
  double l11 = 0.0;
  double l21 = 0.0;
  double l22 = 0.0;

  Vec2 apply(const Vec2& u) const noexcept { return {l11 * u[0], l21 * u[0] + l22 * u[1]}; }
  double det() const noexcept { return l11 * l22; }
};

Lower2 cholesky(const Sym2& a);

/// Bivariate normal density with the given mean and (non-singular) covariance.
double normal_pdf2(const Vec2& z, const Vec2& mean, const Sym2& cov);

double normal_pdf(double x, double mean, double variance);

}  // namespace flucto
