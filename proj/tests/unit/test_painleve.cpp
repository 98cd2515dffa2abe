#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/painleve.hpp"

using namespace rmtlab;

namespace {

// Fourth-order central difference (Richardson on steps h and 2h).
template <class F>
double deriv(F&& f, double t, double h) {
  const double d1 = (f(t + h) - f(t - h)) / (2 * h);
  const double d2 = (f(t + 2 * h) - f(t - 2 * h)) / (4 * h);
  return (4 * d1 - d2) / 3;
}

}  // namespace

TEST_CASE("Airy function: reference values, ODE residual, first zero") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.3550280538878172).epsilon(1e-12));
  CHECK(airy_ai_prime(0.0) == doctest::Approx(-0.2588194037928068).epsilon(1e-12));
  CHECK(airy_ai(5.0) == doctest::Approx(1.08344428136074e-4).epsilon(1e-10));
  CHECK(airy_ai(-10.0) == doctest::Approx(0.04024123848644319).epsilon(1e-10));
  for (double t = -20.0; t <= 10.0; t += 0.37)
    CHECK(std::abs(deriv(airy_ai_prime, t, 1e-3) - t * airy_ai(t)) < 1e-8);
  for (double t = 1.0; t < 10.0; t += 0.5) CHECK(airy_ai(t + 0.5) < airy_ai(t));
  CHECK(airy_ai_zero(1) == doctest::Approx(-2.338107410459767).epsilon(1e-12));
  CHECK(std::abs(airy_ai(airy_ai_zero(3))) < 1e-12);
}

TEST_CASE("Hastings-McLeod: boundary match, PII residual, left asymptote") {
  const auto& hm = default_hm();
  CHECK(hm.t_min <= -8.0);
  CHECK(hm.at(5.0).u / airy_ai(5.0) == doctest::Approx(1.0).epsilon(1e-4));
  for (double t = -6.0; t <= 6.0; t += 0.25) {
    const auto p = hm.at(t);
    CHECK(p.u > 0.0);
    const double upp = deriv([&](double s) { return hm.at(s).u_prime; }, t, 2e-3);
    CHECK(std::abs(upp - (2 * p.u * p.u * p.u + t * p.u)) < 1e-7);
  }
  const double u8 = hm.at(-8.0).u;
  CHECK(std::abs(u8 * u8 - 4.0) <= 0.05 * 4.0);
}

TEST_CASE("Hastings-McLeod: u(0) is stable under the shooting point") {
  const double u6 = hastings_mcleod(-2.0, 6.0).at(0.0).u;
  const double u8 = hastings_mcleod(-2.0, 8.0).at(0.0).u;
  const double u10 = hastings_mcleod(-2.0, 10.0).at(0.0).u;
  CHECK(std::abs(u8 - u6) < 1e-6);
  CHECK(std::abs(u10 - u8) < 1e-6);
  CHECK(u10 == doctest::Approx(0.36706155154807).epsilon(1e-7));
}

TEST_CASE("TW2 distribution against an independent Fredholm determinant") {
  // det(I - K_Airy) on (s, inf), Gauss-Legendre Nystrom with 120 nodes.
  const double ref[][2] = {{-5.0, 2.135996984745933e-05}, {-4.0, 0.0035445535955096552},
                           {-3.0, 0.08031955293933438},   {-2.0, 0.4132241425051213},
                           {-1.0, 0.8072142419992843},    {0.0, 0.9693728283552622},
                           {1.0, 0.9975054381493893},     {2.0, 0.999887553698309},
                           {3.0, 0.9999970059566081}};
  for (const auto& r : ref) CHECK(tw2_cdf(r[0]) == doctest::Approx(r[1]).epsilon(1e-7));
  CHECK(tw2_cdf(8.0) >= 1.0 - 1e-6);
  CHECK(tw2_cdf(12.0) <= 1.0);
  for (double t = -7.0; t < 6.0; t += 0.1) CHECK(tw2_cdf(t + 0.1) >= tw2_cdf(t));
}

TEST_CASE("auxiliary chain d log F/dt = v and dv/dt = -u^2") {
  const auto& hm = default_hm();
  for (double t = -6.0; t <= 5.0; t += 0.5) {
    const double dlogf = deriv([&](double s) { return std::log(tw2_cdf(hm, s)); }, t, 1e-2);
    const double dv = deriv([&](double s) { return hm.at(s).v; }, t, 1e-2);
    const auto p = hm.at(t);
    CHECK(std::abs(dlogf - p.v) < 1e-6);
    CHECK(std::abs(dv + p.u * p.u) < 1e-6);
  }
  const auto aux = tw_auxiliaries(hm, {-4.0, -1.0, 2.0});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(aux.v[i] >= 0.0);
    CHECK(aux.f[i] == doctest::Approx(tw2_cdf(aux.t_grid[i])).epsilon(1e-14));
    if (i > 0) {
      CHECK(aux.v[i] < aux.v[i - 1]);
      CHECK(aux.e[i] > aux.e[i - 1]);
      CHECK(aux.f[i] > aux.f[i - 1]);
    }
  }
}

TEST_CASE("w = 0 deformed law equals E F and matches F1 squared") {
  // F1(s)^2 = E(s) F2(s), with F1 = det(I - Ai((x+y)/2)/2) on (s, inf).
  const double ref[][2] = {{-4.0, 5.7269759374691116e-05}, {-3.0, 0.004844176546352111},
                           {-2.0, 0.07525157098095221},    {-1.0, 0.3408106421109382},
                           {0.0, 0.6920710306135329},      {1.0, 0.9052023700463044},
                           {2.0, 0.9793033526969891}};
  const auto& hm = default_hm();
  for (const auto& r : ref) {
    CHECK(deformed_tw(r[0], 0.0) == tw_e(hm, r[0]) * tw2_cdf(hm, r[0]));
    CHECK(deformed_tw(r[0], 0.0) == doctest::Approx(r[1]).epsilon(1e-7));
  }
}

TEST_CASE("deformed law is monotone in w and lies in [0, 1]") {
  for (double t = -5.0; t <= 3.0; t += 0.5) {
    double prev = 0.0;
    for (double w = -3.0; w <= 10.0; w += 0.5) {
      const double f = deformed_tw(t, w);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
      CHECK(f >= prev - 1e-10);
      prev = f;
    }
    CHECK(deformed_tw(t, INFINITY) == tw2_cdf(t));
  }
}

TEST_CASE("large w: the deformed law is F2 shifted by 1/w") {
  // From the PDE, F(t, w) = F2(t) - F2'(t)/w + O(w^-2). The gap at w = 8 is
  // therefore about max F2' / 8 = 0.056, and shrinks like 1/w.
  double worst8 = 0.0;
  for (double t = -5.0; t <= 3.0; t += 0.25) {
    const double dens = deriv([](double s) { return tw2_cdf(s); }, t, 1e-2);
    const double gap64 = tw2_cdf(t) - deformed_tw(t, 64.0);
    CHECK(std::abs(64.0 * gap64 - dens) < 0.02);
    worst8 = std::max(worst8, std::abs(tw2_cdf(t) - deformed_tw(t, 8.0)));
  }
  CHECK(worst8 == doctest::Approx(0.446 / 8).epsilon(0.05));
  CHECK(std::abs(deformed_tw(-1.85, kMaxLaxW) - tw2_cdf(-1.85)) < 0.45 / kMaxLaxW);
}

TEST_CASE("out-of-table arguments raise range errors") {
  CHECK_THROWS_AS(deformed_tw(-20.0, 1.0), Error);
  CHECK_THROWS_AS(deformed_tw(0.0, -INFINITY), Error);
  CHECK_THROWS_AS(deformed_tw(NAN, 0.0), Error);
  CHECK_THROWS_AS(deformed_tw(0.0, 1e4), Error);
}
