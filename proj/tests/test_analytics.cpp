#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "zeno/analytics.hpp"

using namespace zeno;
using std::numbers::pi;

namespace {

SystemParams<double> with_coupling(double g) {
  SystemParams<double> p;
  p.coupling = g;
  return p;
}

// P10 after free evolution t1, n back-to-back kicks of strength g, then free
// evolution up to t.
auto back_to_back(double t1, double g, std::size_t n, const SystemParams<double>& p) {
  auto s = free_propagate(ReducedState<double>::initial(), t1, p);
  for (std::size_t k = 0; k < n; ++k) s = apply_kick(s, g);
  return [s, t1, p](double t) { return free_propagate(s, t - t1, p).p10(); };
}

double one_kick_numeric(double t_m, double g, const SystemParams<double>& p) {
  const KickSchedule<double> s{{{t_m, g}}, t_m, 1};
  return finite_difference_rate(s, p, t_m, DifferenceSide::right, kOneSidedStep);
}

}  // namespace

TEST_CASE("rate_free") {
  CHECK(rate_free(0.0, with_coupling(1)) == 0);
  CHECK(rate_free(pi / 4, with_coupling(1)) == doctest::Approx(-1).epsilon(1e-15));
  CHECK(rate_free(pi / 8, with_coupling(2)) == doctest::Approx(-2).epsilon(1e-15));

  const KickSchedule<double> none{{}, 0.0, 1};
  for (const double G : {1.0, 2.0}) {
    const auto p = with_coupling(G);
    const double t = pi / (4 * G);
    const double numeric = finite_difference_rate(none, p, t, DifferenceSide::central, kCentralStep);
    CHECK(std::abs(numeric - rate_free(t, p)) < kCentralTolerance);
  }
}

TEST_CASE("rate_after_one_kick") {
  const auto p = with_coupling(1);
  SUBCASE("complete measurement stops the transition") {
    for (const double t_m : {0.1, 0.5, 1.2, 2.7}) {
      CHECK(rate_after_one_kick(t_m, pi / 2, p) == 0);
      CHECK(std::abs(one_kick_numeric(t_m, pi / 2, p)) < kOneSidedTolerance);
    }
  }
  SUBCASE("no interaction") {
    for (const double t_m : {0.1, 0.5, 1.2}) CHECK(rate_after_one_kick(t_m, 0.0, p) == rate_free(t_m, p));
  }
  SUBCASE("g = 3pi/4 inverts the sign") {
    const double expected = -std::sin(1.0) * std::cos(3 * pi / 4);  // 0.59500983...
    CHECK(expected == doctest::Approx(0.5950098).epsilon(1e-7));
    const double analytic = rate_after_one_kick(0.5, 3 * pi / 4, p);
    CHECK(analytic == doctest::Approx(expected).epsilon(1e-14));
    CHECK(analytic > 0);
    CHECK(rate_free(0.5, p) < 0);
    CHECK(std::abs(one_kick_numeric(0.5, 3 * pi / 4, p) - analytic) < kOneSidedTolerance);
  }
}

TEST_CASE("rate_super_zeno") {
  const auto p = with_coupling(1);
  CHECK(rate_super_zeno(0.5, 0.5, p) == 0);
  CHECK(rate_super_zeno(0.5, 0.2, p) == doctest::Approx(std::sin(0.6)).epsilon(1e-15));
  CHECK(rate_super_zeno(0.5, 0.2, p) == doctest::Approx(0.5646425).epsilon(1e-7));
  CHECK(rate_super_zeno(0.5, 0.8, p) < 0);

  const KickSchedule<double> s{{{0.5, pi}}, 0.5, 1};
  for (const double t : {0.2, 0.8}) {
    const double numeric = finite_difference_rate(s, p, 0.5 + t, DifferenceSide::central, kCentralStep);
    CHECK(std::abs(numeric - rate_super_zeno(0.5, t, p)) < kCentralTolerance);
  }
  // G != 1 carries the restored factors of G
  const auto p2 = with_coupling(1.7);
  const double numeric = finite_difference_rate(s, p2, 0.5 + 0.3, DifferenceSide::central, kCentralStep);
  CHECK(std::abs(numeric - rate_super_zeno(0.5, 0.3, p2)) < kCentralTolerance);
}

TEST_CASE("rate_after_n_kicks") {
  const auto p = with_coupling(1);
  SUBCASE("N = 0 is the free rate") {
    for (const double t : {0.3, 0.9}) CHECK(rate_after_n_kicks(t, 1.0, 0, p) == rate_free(t, p));
  }
  SUBCASE("three pi/4 kicks") {
    const double expected = -std::sin(1.0) * std::pow(std::sqrt(0.5), 3);  // -0.29750...
    CHECK(expected == doctest::Approx(-0.2975049).epsilon(1e-6));
    const double analytic = rate_after_n_kicks(0.5, pi / 4, 3, p);
    CHECK(analytic == doctest::Approx(expected).epsilon(1e-14));
    const double numeric = finite_difference_rate(back_to_back(0.5, pi / 4, 3, p), 0.5, DifferenceSide::right,
                                                  kOneSidedStep);
    CHECK(std::abs(numeric - analytic) < kOneSidedTolerance);
  }
  SUBCASE("vanishes as N grows when |cos g| < 1") {
    for (const double g : {0.4, pi / 4, 2.0, 3.0}) {
      for (std::size_t n : {10, 100, 1000}) {
        const double r = rate_after_n_kicks(0.7, g, n, p);
        CHECK(std::abs(r) <= 2 * std::pow(std::abs(std::cos(g)), static_cast<double>(n)) + 1e-300);
      }
      CHECK(std::abs(rate_after_n_kicks(0.7, g, 20000, p)) < 1e-20);
    }
  }
  SUBCASE("geometric in N") {
    for (const double g : {0.4, 1.0, 2.0, 3.0})
      for (std::size_t n = 0; n < 30; ++n) {
        const double r0 = rate_after_n_kicks(0.7, g, n, p);
        const double r1 = rate_after_n_kicks(0.7, g, n + 1, p);
        CHECK(r1 == r0 * std::cos(g));
        CHECK(std::abs(r1 / r0 - std::cos(g)) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(std::cos(g)));
      }
  }
  SUBCASE("kicks spread over a short window approach the back-to-back rate") {
    const double t1 = 0.5;
    const double g = 3 * pi / 4;
    const std::size_t n = 4;
    for (const double window : {1e-2, 1e-3, 1e-4}) {
      KickSchedule<double> s;
      for (std::size_t k = 0; k < n; ++k)
        s.kicks.push_back({t1 + window * static_cast<double>(k) / static_cast<double>(n - 1), g});
      s.total_time = t1 + window;
      const double numeric = finite_difference_rate(s, p, t1 + window, DifferenceSide::right, kOneSidedStep);
      CHECK(std::abs(numeric - rate_after_n_kicks(t1, g, n, p)) < 5 * window);
    }
  }
}

TEST_CASE("analytic_rate dispatch") {
  RateQuery<double> q;
  q.t = 0.4;
  CHECK(analytic_rate(q) == rate_free(0.4, q.params));
  q.g = 1.0;
  CHECK(analytic_rate(q) == rate_after_one_kick(0.4, 1.0, q.params));
  q.t_m = 0.9;
  CHECK(analytic_rate(q) == rate_after_one_kick(0.9, 1.0, q.params));
  q.n = 3;
  CHECK(analytic_rate(q) == rate_after_n_kicks(0.4, 1.0, 3, q.params));
  q.g.reset();
  CHECK_THROWS_AS(analytic_rate(q), std::invalid_argument);
}

TEST_CASE("closed forms refuse detuned parameters") {
  SystemParams<double> p;
  p.energy_a = 0.1;
  CHECK_THROWS_AS(rate_free(0.3, p), UnsupportedRegime);
  CHECK_THROWS_AS(rate_after_one_kick(0.3, 1.0, p), UnsupportedRegime);
  CHECK_THROWS_AS(rate_super_zeno(0.3, 0.1, p), UnsupportedRegime);
  CHECK_THROWS_AS(rate_after_n_kicks(0.3, 1.0, 2, p), UnsupportedRegime);
}

TEST_CASE("finite_difference_rate") {
  auto cos2 = [](double t) { return std::pow(std::cos(t), 2); };
  CHECK(std::abs(finite_difference_rate(cos2, pi / 4, DifferenceSide::central, 1e-5) + 1) < 1e-8);
  CHECK(std::abs(finite_difference_rate(cos2, pi / 4, DifferenceSide::left, 1e-6) + 1) < 1e-5);
  CHECK(std::abs(finite_difference_rate(cos2, pi / 4, DifferenceSide::right, 1e-6) + 1) < 1e-5);
  CHECK_THROWS_AS(finite_difference_rate(cos2, 0.3, DifferenceSide::central, 1e-10), ConditioningError);
  CHECK_THROWS_AS(finite_difference_rate(cos2, 0.3, DifferenceSide::central, 0.0), std::invalid_argument);

  // right-sided at a complete-measurement kick instant
  const auto p = with_coupling(1);
  const KickSchedule<double> s{{{0.8, pi / 2}}, 2.0, 10};
  CHECK(std::abs(finite_difference_rate(s, p, 0.8, DifferenceSide::right, kOneSidedStep)) < 1e-4);
  // the left side still sees the free rate
  CHECK(std::abs(finite_difference_rate(s, p, 0.8, DifferenceSide::left, kOneSidedStep) - rate_free(0.8, p)) < 1e-4);
}

TEST_CASE("one-kick rate agrees with finite differences for random kicks") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> when(0, 3);
  std::uniform_real_distribution<double> strength(0, 2 * pi);
  const auto p = with_coupling(1);
  for (int trial = 0; trial < 100; ++trial) {
    const double t_m = when(rng);
    const double g = strength(rng);
    CHECK(std::abs(one_kick_numeric(t_m, g, p) - rate_after_one_kick(t_m, g, p)) < kOneSidedTolerance);
  }
}

TEST_CASE("sign and magnitude classification over g") {
  const auto p = with_coupling(1);
  for (const double t_m : {0.2, 0.6, 1.1}) {
    const double free = rate_free(t_m, p);
    REQUIRE(free < 0);
    for (int k = 1; k < 16; ++k) {
      const double g = k * pi / 32;  // (0, pi/2)
      const double r = rate_after_one_kick(t_m, g, p);
      CHECK(r < 0);
      CHECK(std::abs(r) < std::abs(free));
    }
    CHECK(rate_after_one_kick(t_m, pi / 2, p) == 0);
    for (int k = 17; k < 32; ++k) {
      const double g = k * pi / 32;  // (pi/2, pi)
      const double r = rate_after_one_kick(t_m, g, p);
      CHECK(r > 0);
      CHECK(std::abs(r) < std::abs(free));
    }
    CHECK(rate_after_one_kick(t_m, pi, p) == -free);
    CHECK(rate_after_one_kick(t_m, 0.0, p) == free);
  }
}
