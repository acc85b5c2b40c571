#include <doctest.h>

#include <array>
#include <cmath>

#include "flucto/bk_limit.hpp"
#include "flucto/ft_closed_form.hpp"
#include "oracles.hpp"

using namespace flucto;
using classical::ClassicalState;

namespace {

// Largest singular value of the mass-weighted block, by central differences
// of the backward RK4 flow.
double backmap_oracle(double t, double m1, double m2, double k) {
  const oracle::Rk4Pair pair{m1, m2, k};
  const double h = 1e-5;
  const double r1 = std::sqrt(m1);
  const double r2 = std::sqrt(m2);
  // Columns: derivative w.r.t. X1_t = sqrt(m1) x1 and P1_t = p1 / sqrt(m1).
  std::array<std::array<double, 2>, 2> j{};
  for (int col = 0; col < 2; ++col) {
    std::array<double, 4> plus{0.3, -0.2, 0.1, 0.4};
    std::array<double, 4> minus = plus;
    const double dx = col == 0 ? h / r1 : h * r1;
    plus[col] += dx;
    minus[col] -= dx;
    const auto a = pair.run(plus, -t, 4000);
    const auto b = pair.run(minus, -t, 4000);
    j[0][col] = r2 * (a[2] - b[2]) / (2.0 * h);
    j[1][col] = (a[3] - b[3]) / r2 / (2.0 * h);
  }
  const double p = j[0][0] * j[0][0] + j[1][0] * j[1][0];
  const double q = j[0][0] * j[0][1] + j[1][0] * j[1][1];
  const double r = j[0][1] * j[0][1] + j[1][1] * j[1][1];
  return std::sqrt(0.5 * (p + r) + std::sqrt(0.25 * (p - r) * (p - r) + q * q));
}

}  // namespace

TEST_CASE("deviation from the BK value") {
  for (double r : {1e-3, 1e-4}) {
    const ModelParams p(1.0, 1.0 / r, 1.0, 1.0);
    const double dev = bk_deviation(ClassicalState::thermal_gaussian(p, 0.5), p);
    CHECK(std::abs(dev - 2.0 * r / (1.0 - r)) <= 1e-8 * r);
  }
  const ModelParams eq(2.0, 2.0, 1.0, 1.0);
  CHECK(std::isinf(bk_deviation(ClassicalState::thermal_gaussian(eq, 0.5), eq)));
  const ModelParams heavy(1.0, 1000.0, 1.0, 1.0);
  const auto critical = ClassicalState::correlated(heavy, (1000.0 - 1.0) / 2.0);
  CHECK(std::isinf(bk_deviation(critical, heavy)));
  const auto q = quantum::QuantumState::thermal_gaussian(heavy, 0.01, 0.5);
  CHECK(bk_deviation(q, heavy) < 3e-3);
  const auto bad = quantum::QuantumState::thermal_gaussian(eq, 0.9, 2.0);
  CHECK(std::isinf(bk_deviation(bad, eq)));
}

TEST_CASE("backmap sensitivity") {
  CHECK(agent_backmap_sensitivity(2.0, 0.0, 1.0, 1.0) == 0.0);
  for (double t : {0.0, 0.5, 3.0, 40.0}) {
    for (double r : {1.0, 0.1, 1e-3}) {
      CHECK(agent_backmap_sensitivity(t, r, 1.0, 0.0) == 0.0);
    }
  }
  CHECK(agent_backmap_sensitivity(0.0, 0.3, 1.0, 1.0) == 0.0);
  CHECK_THROWS(agent_backmap_sensitivity(-1.0, 0.3, 1.0, 1.0));
  CHECK_THROWS(agent_backmap_sensitivity(1.0, -0.3, 1.0, 1.0));

  for (auto [m1, m2, k, t] : {std::array{1.0, 3.0, 1.0, 1.7}, std::array{0.5, 2.0, 2.5, 0.9},
                              std::array{1.0, 1.0, 1.0, 4.0}}) {
    const ModelParams p(m1, m2, k, 1.0);
    CAPTURE(m2);
    CHECK(agent_backmap_sensitivity(t, p) ==
          doctest::Approx(backmap_oracle(t, m1, m2, k)).epsilon(1e-6));
  }
}

TEST_CASE("property: sensitivity shrinks with the mass ratio") {
  const ModelParams base(1.0, 1.0, 1.0, 1.0);
  double last = 1e300;
  for (double r : {1.0, 0.1, 0.01, 0.001}) {
    const ModelParams p = base.with_masses(1.0, 1.0 / r);
    const double s = agent_backmap_sensitivity(p.tau(), p);
    CHECK(s < last);
    last = s;
  }
  // At fixed t up to 10 tau the block vanishes with the ratio.
  for (double t = 0.37; t <= 10.0 * base.tau(); t += 0.37) {
    const double s6 = agent_backmap_sensitivity(t, 1e-6, 1.0, 1.0);
    const double s8 = agent_backmap_sensitivity(t, 1e-8, 1.0, 1.0);
    CHECK(s6 <= 1e-3 * (t + 2.0));
    CHECK(s8 < 0.2 * s6);
  }
}

TEST_CASE("scan over mass ratios") {
  const ModelParams base(1.0, 1.0, 1.0, 1.0);
  const auto tg = bk_scan({BkFamilyKind::classical_tg}, {0.5, 0.1, 0.01}, base);
  REQUIRE(tg.rows.size() == 3);
  CHECK(tg.rows[0].deviation == doctest::Approx(2.0));
  CHECK(tg.rows[1].deviation == doctest::Approx(2.0 / 9.0));
  CHECK(tg.rows[2].deviation == doctest::Approx(0.02 / 0.99));
  CHECK(tg.rows[2].m2 == doctest::Approx(100.0));
  for (std::size_t i = 1; i < tg.rows.size(); ++i) {
    CHECK(tg.rows[i].deviation < tg.rows[i - 1].deviation);
    CHECK(tg.rows[i].sensitivity < tg.rows[i - 1].sensitivity);
  }

  BkFamily tt{BkFamilyKind::classical_tt};
  tt.delta2 = 3.0;
  const auto tts = bk_scan(tt, {0.5, 0.1, 0.01}, base);
  for (std::size_t i = 0; i < tts.rows.size(); ++i) {
    CHECK(tts.rows[i].deviation == tg.rows[i].deviation);
  }

  BkFamily ent{BkFamilyKind::entangled};
  ent.e = 2.0;
  const auto es = bk_scan(ent, {0.5, 0.1, 0.01, 0.001, 1e-4}, base);
  for (std::size_t i = 1; i < es.rows.size(); ++i) {
    CHECK(es.rows[i].deviation < es.rows[i - 1].deviation);
  }
  CHECK(es.rows.back().deviation < 1e-3);

  const auto crit = bk_scan({BkFamilyKind::classical_corr_critical}, {0.5, 0.01, 1e-4}, base);
  for (const auto& row : crit.rows) {
    CHECK(row.diverged);
  }
  CHECK(family_name(BkFamilyKind::quantum_tt) == "quantum_tt");
  CHECK_THROWS(bk_scan({BkFamilyKind::classical_tg}, {1.0}, base));
  CHECK_THROWS(bk_scan({BkFamilyKind::classical_tg}, {0.0}, base));
}

TEST_CASE("correlation functional") {
  const auto v1 = ProcessInterval::odd_multiple();
  const ModelParams p(1.0, 10.0, 1.0, 1.0);
  // Product states carry no correlation part.
  const auto tg = correlation_functional_mc(ClassicalState::thermal_gaussian(p, 0.5), p, v1,
                                            200000, 6);
  CHECK(std::abs(tg.value) <= 4.0 * tg.error);

  // For Corr the product of marginals is a TT state with delta2 = c delta1.
  const double c = 0.3;
  const auto corr = ClassicalState::correlated(p, c);
  REQUIRE(estimate_mc(corr, p, v1, 10000, 1).variance_finite);
  const double expected = ft_classical(corr, p).value - 11.0 / 9.0;
  const auto est = correlation_functional_mc(corr, p, v1, 1000000, 6);
  CHECK(std::abs(est.value - expected) <= 4.0 * est.error);
  CHECK(est.error < 0.05);

  McOptions three;
  three.threads = 3;
  CHECK(correlation_functional_mc(corr, p, v1, 200000, 6, 3).value ==
        correlation_functional_mc(corr, p, v1, 200000, 6, 1).value);
}
