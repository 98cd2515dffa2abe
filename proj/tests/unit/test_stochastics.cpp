#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/stochastics.hpp"

using namespace rmtlab;

namespace {
template <class F>
std::pair<double, double> moments(int n, F&& draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, s2 / n - m * m};
}
}  // namespace

TEST_CASE("gamma draws have mean and variance equal to the shape") {
  RngStream r(11, 0);
  for (double shape : {0.3, 1.0, 2.5, 40.0}) {
    const auto [m, v] = moments(200000, [&] { return gamma_variate(r, shape); });
    CHECK(m == doctest::Approx(shape).epsilon(0.02));
    CHECK(v == doctest::Approx(shape).epsilon(0.04));
  }
}

TEST_CASE("chi with fractional degrees of freedom: E chi^2 = k") {
  RngStream r(12, 0);
  for (double k : {0.5, 1.0, 3.7, 100.0}) {
    const auto [m, v] = moments(200000, [&] { return chi(r, k); });
    CHECK(v + m * m == doctest::Approx(k).epsilon(0.02));
  }
}

TEST_CASE("beta draws have mean a/(a+b)") {
  RngStream r(13, 0);
  const auto [m, v] = moments(200000, [&] { return beta_variate(r, 2.0, 5.0); });
  CHECK(m == doctest::Approx(2.0 / 7.0).epsilon(0.01));
  CHECK(v == doctest::Approx(2.0 * 5.0 / (49.0 * 8.0)).epsilon(0.03));
}

TEST_CASE("invalid distribution parameters are rejected") {
  RngStream r(1, 1);
  CHECK_THROWS_AS(gamma_variate(r, 0.0), Error);
  CHECK_THROWS_AS(chi(r, -1.0), Error);
  CHECK_THROWS_AS(beta_variate(r, 1.0, NAN), Error);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), Error);
}

TEST_CASE("uniform grid lands exactly on the right endpoint") {
  const auto g = uniform_grid(0.0, 1.0, 0.3);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[3] == doctest::Approx(0.9));
}

TEST_CASE("Brownian endpoints have variance diffusion * t") {
  double s2 = 0.0, c2 = 0.0;
  const int paths = 4000;
  for (int p = 0; p < paths; ++p) {
    RngStream r = RngStream(14, 0).child(p);
    s2 += std::pow(brownian_path(r, 0.0, 2.0, 0.01, 3.0, 0.0).values.back(), 2);
    c2 += std::norm(planar_brownian_path(r, 0.0, 2.0, 0.01, 3.0, 0.0).values.back());
  }
  CHECK(s2 / paths == doctest::Approx(6.0).epsilon(0.08));
  CHECK(c2 / paths == doctest::Approx(6.0).epsilon(0.08));
}

TEST_CASE("Euler-Maruyama reproduces the Ornstein-Uhlenbeck variance") {
  // dx = -x dt + dB from 0: Var x(T) = (1 - e^{-2T}) / 2.
  const double T = 3.0;
  double s2 = 0.0;
  const int paths = 4000;
  SdeOptions o;
  o.record_path = false;
  for (int p = 0; p < paths; ++p) {
    RngStream r = RngStream(15, 0).child(p);
    const auto res = integrate_sde([](double, double x) { return -x; }, [](double, double) { return 1.0; },
                                   0.0, T, 1e-3, ExplosionPolicy::none, r, o);
    s2 += res.final_value * res.final_value;
  }
  CHECK(s2 / paths == doctest::Approx(0.5 * (1.0 - std::exp(-2.0 * T))).epsilon(0.06));
}

TEST_CASE("deterministic Riccati flow explodes at the analytic time and restarts") {
  // x' = -(1 + x^2) from x0 = 0 reaches -inf at t = pi/2 and re-enters from +inf,
  // so on [0, 5] it explodes at pi/2 and again at 3 pi/2.
  RngStream r(16, 0);
  SdeOptions o;
  o.blow_threshold = 1e6;
  const auto res = integrate_sde([](double, double x) { return -(1.0 + x * x); },
                                 [](double, double) { return 0.0; }, 0.0, 5.0, 1e-4,
                                 ExplosionPolicy::restart_from_plus_infinity, r, o);
  REQUIRE(res.explosion_times.size() == 2);
  CHECK(res.explosion_times[0] == doctest::Approx(M_PI / 2).epsilon(2e-3));
  CHECK(res.explosion_times[1] == doctest::Approx(1.5 * M_PI).epsilon(2e-3));

  RngStream r2(16, 0);
  const auto stop = integrate_sde([](double, double x) { return -(1.0 + x * x); },
                                  [](double, double) { return 0.0; }, 0.0, 5.0, 1e-3, ExplosionPolicy::none, r2, o);
  CHECK(stop.exploded);
  CHECK(stop.explosion_times.size() == 1);
}
