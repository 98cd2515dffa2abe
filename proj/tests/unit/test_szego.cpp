#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "core/carousel.hpp"
#include "core/ensembles.hpp"
#include "core/error.hpp"
#include "core/szego.hpp"

using namespace rmtlab;

namespace {

VerblunskyCoeffs sample(std::size_t n, std::uint64_t s, double beta = 2.0) {
  RngStream r(100, s);
  return sample_circular_beta(n, beta, r);
}

}  // namespace

TEST_CASE("recursion: first step and modulus identity on the circle") {
  const VerblunskyCoeffs a{{cplx(0.3, -0.4), cplx(0.1, 0.2), std::polar(1.0, 0.7)}};
  const cplx z(0.6, 0.8), w(0.2, -1.3);
  const auto v = szego_recursion(a, w);
  CHECK(std::abs(v[1].first - (w - std::conj(a.alpha[0]))) < 1e-14);
  const auto u = szego_recursion(a, z);
  for (const auto& [p, ps] : u) CHECK(std::abs(std::abs(p) - std::abs(ps)) < 1e-12);
  const auto poly = szego_polynomials(a);
  CHECK(poly.phi.size() == 4);
  CHECK(poly.phi.back() == cplx(1.0));
  CHECK(std::abs(poly_eval(poly.phi, w) - v.back().first) < 1e-12);
  CHECK(std::abs(poly_eval(poly.phi_star, w) - v.back().second) < 1e-12);
}

TEST_CASE("Phi_n equals the characteristic polynomial built from its eigenangles") {
  const auto a = sample(5, 1);
  const auto th = eigenangles(a);
  REQUIRE(th.size() == 5);
  std::vector<cplx> c{cplx(1.0)};
  for (double t : th) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * std::polar(1.0, t);
    }
    c = next;
  }
  const auto poly = szego_polynomials(a);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(c[i] - poly.phi[i]) < 1e-10);
}

TEST_CASE("eigenangles: n = 1, sorted range, roots, winding") {
  const VerblunskyCoeffs one{{std::polar(1.0, -1.1)}};
  const auto t1 = eigenangles(one);
  REQUIRE(t1.size() == 1);
  CHECK(t1[0] == doctest::Approx(1.1));

  const auto a = sample(12, 2);
  const auto th = eigenangles(a);
  REQUIRE(th.size() == 12);
  CHECK(std::is_sorted(th.begin(), th.end()));
  CHECK(th.front() >= 0.0);
  CHECK(th.back() < 2.0 * M_PI);
  const auto poly = szego_polynomials(a);
  for (double t : th) CHECK(std::abs(poly_eval(poly.phi, std::polar(1.0, t))) < 1e-10);
  CHECK(lifted_phase(a, 2.0 * M_PI) - lifted_phase(a, 0.0) == doctest::Approx(2.0 * M_PI * 12));

  VerblunskyCoeffs inside = a;
  inside.alpha.back() *= 0.5;
  CHECK_THROWS_AS(eigenangles(inside), Error);
}

TEST_CASE("phase-graded rotation of the coefficients rotates the eigenangles") {
  // alpha_k -> e^{-i (k+1) theta} alpha_k maps Phi_n(z) to e^{i n theta} Phi_n(e^{-i theta} z).
  const auto a = sample(8, 3);
  const double theta = 0.37;
  VerblunskyCoeffs b = a;
  for (std::size_t k = 0; k < b.alpha.size(); ++k) b.alpha[k] *= std::polar(1.0, -theta * (k + 1.0));
  auto ta = eigenangles(a);
  for (double& t : ta) t = std::fmod(t + theta, 2.0 * M_PI);
  std::sort(ta.begin(), ta.end());
  const auto tb = eigenangles(b);
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(std::abs(ta[i] - tb[i]) < 1e-10);
}

TEST_CASE("arc counts equal the winding of the lifted phase") {
  const auto a = sample(15, 4);
  const auto th = eigenangles(a);
  const double c = std::arg(std::conj(a.alpha.back()));
  for (auto [lo, hi] : {std::pair{0.3, 1.9}, {1.0, 5.5}, {0.0, 2.0 * M_PI - 1e-9}}) {
    const long in_arc = std::count_if(th.begin(), th.end(), [&](double t) { return t > lo && t <= hi; });
    const auto winds = [&](double x) { return std::floor((lifted_phase(a, x) - c) / (2.0 * M_PI)); };
    CHECK(in_arc == static_cast<long>(winds(hi) - winds(lo)));
  }
}

TEST_CASE("CUE: E|tr U|^2 = 1 and nearest-neighbour repulsion") {
  const std::size_t draws = 4000, n = 10;
  double acc = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    cplx tr = 0.0;
    for (double t : eigenangles(sample(n, 1000 + d))) tr += std::polar(1.0, t);
    acc += std::norm(tr);
  }
  CHECK(std::abs(acc / draws - 1.0) < 0.07);

  // Fraction of gaps below a tenth of the mean spacing; Poisson gives 1 - e^{-0.1}.
  const std::size_t m = 20;
  long small = 0, total = 0;
  for (std::size_t d = 0; d < 1000; ++d) {
    const auto th = eigenangles(sample(m, 10000 + d));
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = (i + 1 < m ? th[i + 1] : th[0] + 2.0 * M_PI) - th[i];
      small += gap < 0.1 * 2.0 * M_PI / m;
      ++total;
    }
  }
  CHECK(static_cast<double>(small) / total < 1.0 - std::exp(-0.1));
}

TEST_CASE("b-path: starts at 0, vanishes for zero coefficients, round-trips") {
  const VerblunskyCoeffs zero{{0.0, 0.0, 0.0, cplx(1.0)}};
  const auto bz = b_path(zero);
  for (auto b : bz.b) CHECK(std::abs(b) < 1e-15);

  const auto a = sample(12, 5);
  const auto bp = b_path(a);
  CHECK(bp.b.size() == 12);
  CHECK(bp.b[0] == cplx(0.0));
  for (auto b : bp.b) CHECK(std::abs(b) < 1.0);
  const auto back = alpha_from_bpath(bp);
  REQUIRE(back.alpha.size() == a.alpha.size());
  for (std::size_t k = 0; k < a.alpha.size(); ++k) CHECK(std::abs(back.alpha[k] - a.alpha[k]) < 1e-10);
}

TEST_CASE("Dirac check: accepts eigenangles, their 2 pi n shifts, rejects midpoints") {
  for (std::size_t n : {1u, 6u, 20u}) {
    const auto a = sample(n, 6 + n);
    const auto th = eigenangles(a);
    const auto bp = b_path(a);
    std::vector<double> lam;
    for (double t : th) lam.push_back(static_cast<double>(n) * t);
    const auto rep = dirac_spectrum_check(bp, n, lam, 1e-6);
    CHECK(rep.passed);
    CHECK(rep.worst_defect <= 1e-6);
    CHECK(rep.grid_identity_error <= 1e-10);
    for (double l : lam) CHECK(dirac_defect(bp, n, l + 2.0 * M_PI * static_cast<double>(n)) <= 1e-6);
    for (std::size_t i = 0; i < th.size() && n > 1; ++i) {
      const double next = i + 1 < th.size() ? th[i + 1] : th[0] + 2.0 * M_PI;
      CHECK(dirac_defect(bp, n, static_cast<double>(n) * 0.5 * (th[i] + next)) > 1e-6);
    }
  }
}

TEST_CASE("Killip-Nenciu radii and coupling") {
  RngStream r(7, 0);
  const auto d = kn_radii(50, 2.0, r);
  CHECK(d.size() == 49);
  for (double x : d) CHECK(x >= 0.0);

  RngStream s(7, 1);
  const auto bm = hyperbolic_bm(HbmMode::flat(), 40.0, 1e-3, s);
  const auto still = kn_coupling(bm, std::vector<double>(5, 0.0));
  for (auto b : still.b) CHECK(b == cplx(0.0));
  for (double t : still.times) CHECK(t == 0.0);

  const std::vector<double> radii(10, 0.3);
  const auto walk = kn_coupling(bm, radii);
  REQUIRE(walk.b.size() == walk.path_index.size());
  for (std::size_t k = 0; k < walk.b.size(); ++k) {
    CHECK(walk.b[k] == bm.points[walk.path_index[k]]);
    CHECK(walk.times[k] == bm.times[walk.path_index[k]]);
  }
  for (std::size_t k = 1; k < walk.b.size(); ++k) {
    CHECK(hyperbolic_distance(walk.b[k], walk.b[k - 1]) >= radii[k - 1] - 1e-12);
    CHECK(walk.times[k] >= walk.times[k - 1]);
  }
  CHECK(kn_excursion(bm, walk) >= 0.0);
}
