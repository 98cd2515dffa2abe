#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "core/carousel.hpp"
#include "core/error.hpp"

using namespace rmtlab;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("hyperbolic BM stays in the disk; frozen path is constant") {
  RngStream r(1, 0);
  const auto p = hyperbolic_bm(HbmMode::flat(), 20.0, 1e-3, r);
  for (auto z : p.points) CHECK(std::abs(z) < 1.0);
  CHECK(p.points.front() == std::complex<double>(0.0));

  HbmMode frozen = HbmMode::flat();
  frozen.noise_scale = 0.0;
  RngStream s(1, 1);
  const auto q = hyperbolic_bm(frozen, 1.0, 1e-2, s);
  for (auto z : q.points) CHECK(z == std::complex<double>(0.0));
}

TEST_CASE("hyperbolic distance is a metric invariant under rotations") {
  const std::complex<double> a(0.3, -0.2), b(-0.5, 0.4), c(0.1, 0.7);
  CHECK(hyperbolic_distance(a, a) == doctest::Approx(0.0));
  CHECK(hyperbolic_distance(a, b) == doctest::Approx(hyperbolic_distance(b, a)));
  CHECK(hyperbolic_distance(a, c) <= hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-12);
  const auto rot = std::polar(1.0, 0.9);
  CHECK(hyperbolic_distance(rot * a, rot * b) == doctest::Approx(hyperbolic_distance(a, b)));
  CHECK(hyperbolic_distance(0.0, 0.5) == doctest::Approx(2.0 * std::atanh(0.5)));
}

TEST_CASE("radial part of flat hyperbolic BM drifts at coth(q)/4") {
  // Start at q = 2 and average the change of q over short excursions.
  const double q0 = 2.0, horizon = 0.1;
  const std::complex<double> start(std::tanh(q0 / 2.0), 0.0);
  const std::size_t n = 200000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream r(2, i);
    const auto p = hyperbolic_bm(HbmMode::flat(), horizon, 1e-3, r, start);
    sum += hyperbolic_distance(p.points.back(), 0.0) - q0;
  }
  const double drift = sum / n / horizon;
  CHECK(std::abs(drift / (1.0 / std::tanh(q0) / 4.0) - 1.0) < 0.1);
}

TEST_CASE("sine-beta HBM approaches the circle as t -> 1") {
  // The radial SDE alone, run for flat time 4 log(1e4), puts 0.917 of its mass past |B| = 0.99.
  int near = 0;
  const int paths = 2000;
  for (int i = 0; i < paths; ++i) {
    RngStream r(3, i);
    const auto p = hyperbolic_bm(HbmMode::sine(2.0), 1.0 - 1e-4, 1e-3, r);
    if (std::abs(p.points.back()) >= 0.99) ++near;
  }
  CHECK(near >= 0.9 * paths);
  CHECK(std::abs(near / static_cast<double>(paths) - 0.917) < 0.025);
  RngStream r(3, 999);
  CHECK_THROWS_AS(hyperbolic_bm(HbmMode::sine(2.0), 1.5, 1e-3, r), Error);
}

TEST_CASE("phase trajectory starts at 0 and never falls below a passed multiple of 2 pi") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream r(4, s);
    const auto tr = phase_trajectory(30.0, CarouselDriver::sine(2.0), 20.0, r);
    CHECK(tr.alpha.front() == 0.0);
    double floor_mult = 0.0;
    for (double a : tr.alpha) {
      CHECK(a >= floor_mult - 1e-9);
      floor_mult = std::max(floor_mult, 2.0 * M_PI * std::floor(a / (2.0 * M_PI)));
    }
  }
}

TEST_CASE("counts: zero at lambda = 0 and monotone in lambda on shared noise") {
  RngStream z(5, 0);
  CHECK(carousel_count(0.0, CarouselDriver::sine(2.0), z).count == 0);
  const std::vector<double> lams{1.0, 5.0, 10.0, 20.0, 40.0, 80.0};
  for (std::uint64_t s = 0; s < 50; ++s) {
    RngStream r(5, s + 1);
    const auto c = carousel_counts(lams, CarouselDriver::sine(1.0), r);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].count >= c[i - 1].count);
  }
}

TEST_CASE("sine-beta intensity is 1/(2 pi) and counts are additive in mean") {
  const std::size_t paths = 600;
  std::vector<double> n100(paths), n30(paths), n70(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    RngStream r(6, p);
    const auto c = carousel_counts({30.0, 70.0, 100.0}, CarouselDriver::sine(2.0), r);
    n30[p] = c[0].count;
    n70[p] = c[1].count;
    n100[p] = c[2].count;
  }
  CHECK(std::abs(mean_of(n100) / (100.0 / (2.0 * M_PI)) - 1.0) < 0.02);
  CHECK(std::abs(mean_of(n30) + mean_of(n70) - mean_of(n100)) < 0.15);
}

TEST_CASE("gap probabilities match the sine-kernel determinant") {
  // P(no Sine_2 point in [0, lambda]), Fredholm determinant of the sine kernel.
  const std::pair<double, double> ref[] = {{2.0, 0.6843599696042}, {4.0, 0.4000806791193}, {8.0, 0.07411496108880}};
  for (auto [lam, p] : ref) {
    const auto g = gap_probability(2.0, lam, 0, 20000, RngStream(7, static_cast<std::uint64_t>(lam)));
    const double se = std::sqrt(p * (1.0 - p) / 20000.0);
    CHECK(std::abs(g.mc_estimate - p) < 4.0 * se + 0.005);
    CHECK(g.ci.lo <= g.mc_estimate);
    CHECK(g.ci.hi >= g.mc_estimate);
  }
}

TEST_CASE("gap theory record") {
  const auto t = gap_theory(2.0, 12.0);
  CHECK(t.exponent == doctest::Approx(-4.5));
  CHECK(t.gamma_beta == doctest::Approx(-0.25));
  CHECK(gap_theory(1.0, 5.0).gamma_beta == doctest::Approx(-0.125));
  CHECK(gap_theory(4.0, 5.0).gamma_beta == doctest::Approx(-0.125));
  for (double beta : {0.5, 1.0, 2.0, 4.0, 7.0}) {
    const auto g = gap_theory(beta, 10.0);
    CHECK(g.f_norm_sq_over_8 == doctest::Approx(g.beta_over_64).epsilon(1e-10));
    CHECK(g.ggap_exponent == doctest::Approx(-100.0 * beta / 64.0).epsilon(1e-10));
  }
}

TEST_CASE("closed forms: CLT variance, repulsion bound, arcsine law, tau_E, martingale tail") {
  CHECK(clt_variance(2.0) == doctest::Approx(1.0 / (M_PI * M_PI)));
  const double base = std::log(20.0 * M_PI) - 2.0;
  CHECK(repulsion_bound(1.0, 0.1) == doctest::Approx(4.0 * std::exp(-base * base)));
  CHECK(repulsion_bound(5.0, 0.5) == 1.0);
  CHECK(arcsine_cdf(-2.0) == 0.0);
  CHECK(arcsine_cdf(0.0) == doctest::Approx(0.5));
  CHECK(arcsine_cdf(1.0) == doctest::Approx(0.5 + std::asin(0.5) / M_PI));
  CHECK(arcsine_cdf(3.0) == 1.0);
  CHECK(schrodinger_tau(1.0, 0.0) == doctest::Approx(0.25));
  CHECK(schrodinger_tau(2.0, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK(gtail_bound(2.0, 1.0, 2.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("CLT statistic is centered") {
  const auto x = clt_statistic(2.0, 1000.0, 300, RngStream(8, 0));
  double m = mean_of(x), v = 0.0;
  for (double a : x) v += (a - m) * (a - m);
  v /= x.size() - 1;
  CHECK(std::abs(m) < 3.0 * std::sqrt(v / x.size()) + 0.02);
  CHECK(v > 0.5 * clt_variance(2.0));
  CHECK(v < 1.6 * clt_variance(2.0));
}

TEST_CASE("Schrodinger bulk: repulsion under the bound, gap decays faster than exponentially") {
  const auto rec = sch_statistics(1.0, 0.5, 0.5, 20000, RngStream(9, 0));
  CHECK(rec.counts.size() == 20000);
  CHECK(rec.repulsion_ci.lo <= rec.repulsion_bound);
  const double l6 = -std::log(sch_gap_probability(1.0, 6.0, 20000, RngStream(9, 1)));
  const double l9 = -std::log(sch_gap_probability(1.0, 9.0, 20000, RngStream(9, 2)));
  CHECK(l9 / l6 >= 2.25);
}

TEST_CASE("eigenvector profile: unit mass, theory rate, finite fit") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    RngStream r(10, s);
    const auto p = eigenvector_profile(600, 1.0, r, 60);
    CHECK(p.profile.size() == 60);
    CHECK(std::accumulate(p.profile.begin(), p.profile.end(), 0.0) == doctest::Approx(1.0));
    CHECK(std::abs(p.E_sample) < 2.0 + 4.0);
    CHECK(p.index < 600);
    CHECK(p.peak_position >= 0.0);
    CHECK(p.peak_position <= 1.0);
    if (std::abs(p.E_sample) < 2.0) CHECK(p.theory_rate == doctest::Approx(schrodinger_tau(1.0, p.E_sample) / 2.0));
  }
  RngStream r(10, 99);
  const auto lim = eigenvector_profile_limit(5.0, r, 50);
  CHECK(std::accumulate(lim.profile.begin(), lim.profile.end(), 0.0) == doctest::Approx(1.0));
  CHECK(lim.fitted_decay_rate > 0.0);
}

TEST_CASE("pooled spectrum of H_n follows the arcsine law") {
  CHECK(pooled_arcsine_ks(1000, 1.0, 40, RngStream(11, 0), 201) < 0.05);
}
