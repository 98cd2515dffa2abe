#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/airy.hpp"
#include "core/ensembles.hpp"
#include "core/error.hpp"
#include "core/painleve.hpp"
#include "core/statkit.hpp"
#include "core/tridiag.hpp"

using namespace rmtlab;

TEST_CASE("deterministic operator: bottom eigenvalues match Airy zeros") {
  RngStream r(1, 0);
  const auto d = discretize_sao(kDirichlet, kDirichlet, 20.0, 0.01, r);
  const auto ev = sao_bottom_eigs(d, 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] + airy_ai_zero(k + 1)) < 1e-3);
}

TEST_CASE("discretized noise has variance 4/(beta h)") {
  RngStream r(2, 0);
  const double beta = 2.0, h = 0.01;
  const auto d = discretize_sao(beta, kDirichlet, 40.0, h, r);
  const double v = variance(d.noise);
  CHECK(std::abs(v / (4.0 / (beta * h)) - 1.0) < 0.03);
}

TEST_CASE("bottom eigenvalue decreases as w decreases, same noise") {
  const std::vector<double> ws{kDirichlet, 1.0, 0.0, -1.0};
  for (std::uint64_t s = 0; s < 5; ++s) {
    double prev = INFINITY;
    for (double w : ws) {
      RngStream r(3, s);
      const auto d = discretize_sao(2.0, w, 12.0, 0.01, r);
      const double l0 = sao_bottom_eigs(d, 1)[0];
      CHECK(l0 < prev);
      prev = l0;
    }
  }
}

TEST_CASE("Riccati explosion count equals the Sturm count") {
  for (double w : {kDirichlet, 0.5, -0.5}) {
    RngStream r(4, 0);
    const auto d = discretize_sao(1.0, w, 12.0, 0.02, r);
    for (double lam = -6.0; lam <= 8.0; lam += 0.7) CHECK(sao_riccati_count(d, lam) == sturm_count(d.matrix, lam));
  }
}

TEST_CASE("k-th explosion tail agrees with the k-th operator eigenvalue") {
  // Fraction of paths with > k explosions at a vs fraction of SAO draws with Lambda_k < -a.
  const double beta = 2.0, h = 0.01;
  const std::vector<double> a_grid{-5.0, -4.0, -3.0};
  const std::size_t paths = 1500;
  RiccatiOptions opt;
  opt.step = h;
  const auto c = riccati_explosion_counts(beta, kDirichlet, a_grid, paths, RngStream(5, 0), opt);
  const auto tail1 = explosion_tail(c, 1);
  std::vector<double> lam1(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    RngStream r(5, 1000 + p);
    lam1[p] = sao_bottom_eigs(discretize_sao(beta, kDirichlet, 14.0, h, r), 2)[1];
  }
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    const double frac = static_cast<double>(std::count_if(lam1.begin(), lam1.end(),
                                                          [&](double l) { return l < -a_grid[i]; })) /
                        static_cast<double>(paths);
    CHECK(std::abs(frac - tail1[i]) < 0.04);
  }
}

TEST_CASE("operator edge vs matrix edge, two-sample KS") {
  const std::size_t draws = 400;
  std::vector<double> op(draws), mat(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    RngStream r(6, i);
    op[i] = -sao_bottom_eigs(discretize_sao(2.0, kDirichlet, 12.0, 0.02, r), 1)[0];
    RngStream m(7, i);
    const auto t = sample_beta_hermite(400, 2.0, m);
    mat[i] = std::pow(400.0, 2.0 / 3.0) * (largest_eigenvalue(t, 1e-10) - 2.0);
  }
  CHECK(ks_distance(Ecdf(op), Ecdf(mat)) < 0.12);
}

TEST_CASE("Riccati cdf: monotone in a, ordered in w, near TW2") {
  const std::vector<double> grid{-4.0, -3.0, -2.0, -1.0, 0.0, 1.0};
  const auto dir = riccati_tw_cdf(2.0, kDirichlet, grid, 4000, RngStream(8, 0));
  const auto zero = riccati_tw_cdf(2.0, 0.0, grid, 4000, RngStream(8, 0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) CHECK(dir.values[i] >= dir.values[i - 1]);
    CHECK(dir.values[i] >= zero.values[i]);
    CHECK(std::abs(dir.values[i] - tw2_cdf(grid[i])) < 0.03);
  }
}

TEST_CASE("PDE table: corner value, monotone in w, Dirichlet column") {
  const auto tab = tw_pde_solve(2.0, -3.0, 2.0, 11, -1.0, 3.0, 9);
  const std::size_t nt = tab.t_grid.size(), nw = tab.w_grid.size();
  CHECK(tab.values[nt - 1][nw - 1] >= 0.97);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 1; j < nw; ++j) CHECK(tab.values[i][j] - tab.values[i][j - 1] >= -1e-8);
  const auto col = tw_pde_solve(2.0, -3.0, 2.0, 11, kDirichlet, kDirichlet, 1);
  for (std::size_t i = 0; i < col.t_grid.size(); ++i)
    CHECK(std::abs(col.values[i][0] - tw2_cdf(col.t_grid[i])) < 0.01);
  CHECK_THROWS_AS(tw_pde_solve(2.0, 1.0, -1.0, 5, 0.0, 1.0, 3), Error);
}

TEST_CASE("tail exponents") {
  const auto t = tail_formulas(2.0, 3.0);
  CHECK(t.left_exponent == doctest::Approx(2.25));
  CHECK(tail_formulas(1.0, 4.0).right_exponent == doctest::Approx(16.0 / 3.0));
  CHECK(tail_formulas(2.0, 4.0).right_exponent == doctest::Approx(32.0 / 3.0));
  CHECK(t.right_poly_power == doctest::Approx(-1.5));
  CHECK_THROWS_AS(tail_formulas(2.0, 0.0), Error);
}

TEST_CASE("Weyl law for the Airy spectrum") {
  const double lim = weyl_limit();
  CHECK(lim == doctest::Approx(std::pow(1.5 * M_PI, 2.0 / 3.0)));
  for (int k = 10; k <= 160; k *= 2) CHECK(std::abs(weyl_check(2 * k) - lim) < std::abs(weyl_check(k) - lim));
  CHECK(std::abs(weyl_check(1000) / lim - 1.0) < 0.01);
}

TEST_CASE("trial-function norms: exact values and leading orders") {
  // Reference values from an independent high-precision quadrature at a = 50.
  const double a = 50.0;
  const auto n = trial_norms(a);
  CHECK(n.a_l2 == doctest::Approx(60849.75166041677).epsilon(1e-9));
  CHECK(n.deriv_l2 == doctest::Approx(51.47550577218974).epsilon(1e-9));
  CHECK(n.sqrtx_l2 == doctest::Approx(20812.91171633458).epsilon(1e-9));
  CHECK(n.l4 == doctest::Approx(39715.70991303146).epsilon(1e-9));
  // Leading orders a^3/2, a^3/6, a^3/3 with O(1/a) relative corrections.
  const double b = 400.0;
  const auto m = trial_norms(b);
  CHECK(m.a_l2 / (b * b * b / 2.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(m.sqrtx_l2 / (b * b * b / 6.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(m.l4 / (b * b * b / 3.0) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(m.deriv_l2 < 4.0 * b);
  CHECK(trial_function(a, 0.0) == 0.0);
  CHECK(trial_function(a, a) == 0.0);
}

TEST_CASE("form bound constant is finite and tight across draws") {
  const std::vector<double> as{2.0, 4.0, 8.0, 16.0};
  std::vector<double> cs;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RngStream r(9, s);
    const double c = form_bound_constant(2.0, 0.5, as, 0.01, r);
    REQUIRE(std::isfinite(c));
    CHECK(c >= 0.0);
    cs.push_back(c);
  }
  CHECK(quantile(cs, 0.99) < 10.0 * (median(cs) + 1.0));
}

TEST_CASE("invalid inputs") {
  RngStream r(10, 0);
  CHECK_THROWS_AS(discretize_sao(0.0, kDirichlet, 10.0, 0.1, r), Error);
  CHECK_THROWS_AS(discretize_sao(2.0, -INFINITY, 10.0, 0.1, r), Error);
  CHECK_THROWS_AS(discretize_sao(2.0, 0.0, 10.0, 6.0, r), Error);
  CHECK_THROWS_AS(weyl_check(0), Error);
}
