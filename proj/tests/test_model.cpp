#include <doctest.h>

#include <cmath>
#include <random>

#include "flucto/model.hpp"
#include "oracles.hpp"

using namespace flucto;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double det4(FlowMatrix m) {
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int pivot = c;
    for (int r = c + 1; r < 4; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    }
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("derived parameters") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0);
  const auto d = derived_params(p);
  CHECK(d.total_mass == 2.0);
  CHECK(d.reduced_mass == 0.5);
  CHECK(d.omega == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.tau == doctest::Approx(M_PI / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d.delta1 == 1.0);
  const double w8 = ModelParams(2, 2, 8, 1).omega();
  const double w2 = ModelParams(2, 2, 2, 1).omega();
  CHECK(w8 == doctest::Approx(2.0 * w2).epsilon(1e-15));
}

TEST_CASE("parameter validation names the field") {
  CHECK_THROWS_WITH_AS(ModelParams(-1, 1, 1, 1), doctest::Contains("m1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ModelParams(1, 0, 1, 1), doctest::Contains("m2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ModelParams(1, 1, NAN, 1), doctest::Contains("k"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ModelParams(1, 1, 1, 0), doctest::Contains("beta1"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ModelParams(1, 1, 1, 1, -2), doctest::Contains("hbar"),
                       std::invalid_argument);
  CHECK_THROWS(ProcessInterval::odd_multiple(2));
  CHECK_THROWS(ProcessInterval::generic(-1.0));
}

TEST_CASE("evolution basics") {
  const ModelParams p(1.3, 0.7, 2.0, 1.0);
  const PhasePoint g{0.3, -1.2, 0.8, 0.4};
  CHECK(evolve_classical(g, 0.0, p) == g);
  const PhasePoint zero{};
  const auto z = evolve_classical(zero, 3.7, p);
  CHECK(z.x1 == 0.0);
  CHECK(z.p2 == 0.0);
  CHECK_THROWS(evolve_classical(g, -1.0, p));

  // Equal momenta and positions with equal masses: uniform translation.
  const ModelParams q(1.0, 1.0, 1.0, 1.0);
  const PhasePoint u{0.5, 0.25, 0.5, 0.25};
  const double t = 2.3;
  const auto ut = evolve_classical(u, t, q);
  CHECK(ut.x1 == doctest::Approx(0.5 + 0.5 * t / 2.0).epsilon(1e-13));
  CHECK(ut.x2 == doctest::Approx(0.5 + 0.5 * t / 2.0).epsilon(1e-13));
  CHECK(ut.p1 == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("analytic flow matches an RK4 integration") {
  const ModelParams p(1.0, 2.5, 3.0, 1.0);
  const PhasePoint g{0.2, 1.1, -0.4, -0.3};
  const double t = 1.7 * p.tau();
  const auto exact = evolve_classical(g, t, p);
  const oracle::Rk4Pair rk{p.m1(), p.m2(), p.k()};
  const auto num = rk.run({g.x1, g.p1, g.x2, g.p2}, t, 20000);
  CHECK(exact.x1 == doctest::Approx(num[0]).epsilon(1e-10));
  CHECK(exact.p1 == doctest::Approx(num[1]).epsilon(1e-10));
  CHECK(exact.x2 == doctest::Approx(num[2]).epsilon(1e-10));
  CHECK(exact.p2 == doctest::Approx(num[3]).epsilon(1e-10));
}

TEST_CASE("momentum coefficients") {
  const ModelParams p(1.0, 3.0, 2.0, 1.0);
  const auto c0 = momentum_coefficients(0.0, p);
  CHECK(c0.a == 1.0);
  CHECK(c0.b == 0.0);
  CHECK(c0.c == 0.0);
  const auto ct = momentum_coefficients(p.tau(), p);
  CHECK(ct.a == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(ct.b == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(ct.c) < 1e-14);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double t = ut(rng) * p.tau();
    const auto c = momentum_coefficients(t, p);
    // Momentum conservation fixes a + (m2 / m1) b = 1.
    CHECK(c.a + p.m2() / p.m1() * c.b == doctest::Approx(1.0).epsilon(1e-14));
    const auto c2 = momentum_coefficients(t + 2.0 * p.tau(), p);
    CHECK(std::abs(c.a - c2.a) < 1e-12);
    CHECK(std::abs(c.b - c2.b) < 1e-12);
    CHECK(std::abs(c.c - c2.c) < 1e-12);
  }
}

TEST_CASE("a + b = 1 only for equal masses") {
  const ModelParams equal(2.0, 2.0, 1.0, 1.0);
  const ModelParams unequal(1.0, 3.0, 1.0, 1.0);
  for (double t : {0.3, 1.1, 2.9}) {
    const auto e = momentum_coefficients(t, equal);
    CHECK(e.a + e.b == doctest::Approx(1.0).epsilon(1e-14));
    const auto u = momentum_coefficients(t, unequal);
    CHECK(std::abs(u.a + u.b - 1.0) > 1e-3);
  }
}

TEST_CASE("p1(t) equals the coefficient expansion") {
  const ModelParams p(0.8, 1.9, 1.4, 2.0);
  const PhasePoint g{0.7, -0.2, -1.1, 0.9};
  for (double t : {0.1, 0.9, 2.2, 5.0}) {
    const auto c = momentum_coefficients(t, p);
    const auto gt = evolve_classical(g, t, p);
    CHECK(gt.p1 == doctest::Approx(c.a * g.p1 + c.b * g.p2 + c.c * (g.x2 - g.x1)).epsilon(1e-13));
  }
}

TEST_CASE("property: energy conservation and unit Jacobian") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> um(0.1, 5.0);
  std::normal_distribution<double> g;
  for (int i = 0; i < 300; ++i) {
    const ModelParams p(um(rng), um(rng), um(rng), um(rng));
    const PhasePoint start{g(rng), g(rng), g(rng), g(rng)};
    const double t = std::uniform_real_distribution<double>(0.0, 10.0)(rng) * p.tau();
    const double h0 = hamiltonian(start, p);
    const double h1 = hamiltonian(evolve_classical(start, t, p), p);
    CHECK(std::abs(h1 - h0) <= 1e-12 * h0);
    CHECK(det4(flow_matrix(t, p)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("work at odd multiples of tau") {
  const ModelParams p(1.0, 1.0, 1.0, 1.0);
  const PhasePoint g{0.0, 0.0, 0.0, 2.0};
  CHECK(work_classical(g, ProcessInterval::odd_multiple(), p) == doctest::Approx(2.0));
  CHECK(work_classical(g, ProcessInterval::generic(p.tau()), p) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const PhasePoint still{3.0, 0.0, -1.0, 0.0};
  CHECK(work_classical(still, ProcessInterval::odd_multiple(3), p) == 0.0);

  const ModelParams q(1.0, 3.0, 1.0, 1.0);
  CHECK(work_eigenvalue(0.0, 0.0, q) == 0.0);
  CHECK(work_eigenvalue(1.0, 1.0, q) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("property: eigenvalue form equals kinetic-energy change at v tau") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> um(0.2, 4.0);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const ModelParams p(um(rng), um(rng), um(rng), 1.0);
    const PhasePoint s{g(rng), g(rng), g(rng), g(rng)};
    for (int v : {1, 3, 5}) {
      const double closed = work_classical(s, ProcessInterval::odd_multiple(v), p);
      const double traced = work_classical(s, ProcessInterval::generic(v * p.tau()), p);
      CHECK(rel(traced, closed) <= 1e-12);
      CHECK(closed == work_eigenvalue(s.p1, s.p2, p));
    }
  }
}

TEST_CASE("property: equal-mass work is antisymmetric under momentum exchange") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  const ModelParams p(1.7, 1.7, 1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double a = g(rng);
    const double b = g(rng);
    CHECK(work_eigenvalue(a, b, p) == doctest::Approx(-work_eigenvalue(b, a, p)).epsilon(1e-14));
  }
}

TEST_CASE("eigenvalue and classical work agree on a grid") {
  const ModelParams p(1.0, 3.0, 1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double p1 = -2.0 + 0.4 * i;
      const double p2 = -2.0 + 0.4 * j;
      const PhasePoint s{0.1 * i, p1, -0.2 * j, p2};
      CHECK(work_eigenvalue(p1, p2, p) == work_classical(s, ProcessInterval::odd_multiple(), p));
    }
  }
}
