#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "core/ensembles.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/tridiag.hpp"

using namespace rmtlab;

TEST_CASE("Hermite model: E (T^2)_11 = (n-1)/n + 2/(n beta)") {
  const std::size_t n = 20;
  for (double beta : {1.0, 2.0, 4.0}) {
    double s = 0.0;
    const int draws = 20000;
    for (int d = 0; d < draws; ++d) {
      RngStream r = RngStream(21, 0).child(d);
      s += root_moments(sample_beta_hermite(n, beta, r), 2)[2];
    }
    const double nn = static_cast<double>(n);
    CHECK(s / draws == doctest::Approx((nn - 1.0) / nn + 2.0 / (nn * beta)).epsilon(0.01));
  }
}

TEST_CASE("Hermite model at beta = inf is deterministic with zero diagonal") {
  RngStream a(1, 0), b(2, 0);
  const auto ta = sample_beta_hermite(10, INFINITY, a), tb = sample_beta_hermite(10, INFINITY, b);
  CHECK(ta.diag == tb.diag);
  CHECK(ta.offdiag == tb.offdiag);
  CHECK(ta.offdiag[0] == doctest::Approx(std::sqrt(9.0 / 10.0)));
  // Its eigenvalues are the Hermite zeros scaled into [-2, 2].
  CHECK(largest_eigenvalue(ta, 1e-13) < 2.0);
}

TEST_CASE("nested Jacobi: reversed and rescaled minors carry the Hermite law") {
  const std::size_t n = 8;
  double sh = 0.0, sj = 0.0;
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) {
    RngStream r1 = RngStream(22, 0).child(d), r2 = RngStream(23, 0).child(d);
    const auto h = sample_beta_hermite(n, 2.0, r1);
    auto j = reversed(leading_minor(sample_nested_jacobi(40, 2.0, r2), n));
    for (double& x : j.diag) x /= std::sqrt(static_cast<double>(n));
    for (double& x : j.offdiag) x /= std::sqrt(static_cast<double>(n));
    sh += h.offdiag[0] + largest_eigenvalue(h, 1e-12);
    sj += j.offdiag[0] + largest_eigenvalue(j, 1e-12);
  }
  CHECK(sh / draws == doctest::Approx(sj / draws).epsilon(0.01));
}

TEST_CASE("nested Jacobi minors are consistent across n_max") {
  RngStream a(5, 5), b(5, 5);
  const auto big = sample_nested_jacobi(50, 2.0, a);
  CHECK(big.offdiag.size() == 49);
  CHECK(is_jacobi(big));
  const auto small = leading_minor(big, 10);
  CHECK(small.diag.size() == 10);
  CHECK(small.offdiag.back() == big.offdiag[8]);
}

TEST_CASE("Householder reduction preserves the spectrum and the root") {
  RngStream r(31, 0);
  const auto a = sample_goe(30, 1.5, r);
  const auto t = householder_tridiagonalize(a);
  Eigen::MatrixXd m(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) m(i, j) = a(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto e = eigenvalues(t, 1e-12);
  for (int i = 0; i < 30; ++i) CHECK(e[i] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-9));
  CHECK(t.diag[0] == a(0, 0));  // e1 is fixed
  for (double b : t.offdiag) CHECK(b >= 0.0);
}

TEST_CASE("dense_from_spectral_measure inverts spectral_measure") {
  RngStream r(32, 0);
  const auto t = sample_beta_hermite(15, 1.0, r);
  const auto back = householder_tridiagonalize(dense_from_spectral_measure(spectral_measure(t, 1e-15)));
  for (std::size_t i = 0; i < 15; ++i) CHECK(back.diag[i] == doctest::Approx(t.diag[i]).epsilon(1e-8));
  for (std::size_t i = 0; i < 14; ++i) CHECK(back.offdiag[i] == doctest::Approx(t.offdiag[i]).epsilon(1e-8));
}

TEST_CASE("spiked GOE: a supercritical spike detaches the top eigenvalue") {
  // mu > 1 pushes the top of the rescaled spectrum to mu + 1/mu.
  const std::size_t n = 400;
  const double mu = 2.0;
  double s = 0.0;
  const int draws = 20;
  for (int d = 0; d < draws; ++d) {
    RngStream r = RngStream(33, 0).child(d);
    s += largest_eigenvalue(householder_tridiagonalize(sample_goe(n, mu, r)), 1e-10) / std::sqrt(double(n));
  }
  CHECK(s / draws == doctest::Approx(mu + 1.0 / mu).epsilon(0.03));
}

TEST_CASE("circular beta: radii law and a unimodular last coefficient") {
  const std::size_t n = 6;
  std::vector<double> s(n, 0.0);
  const int draws = 40000;
  for (int d = 0; d < draws; ++d) {
    RngStream r = RngStream(34, 0).child(d);
    const auto v = sample_circular_beta(n, 2.0, r);
    CHECK_NOTHROW(validate(v));
    for (std::size_t k = 0; k < n; ++k) s[k] += std::norm(v.alpha[k]);
  }
  for (std::size_t k = 0; k + 1 < n; ++k)
    CHECK(s[k] / draws == doctest::Approx(1.0 / (1.0 + double(n - k - 1))).epsilon(0.02));
  CHECK(s[n - 1] / draws == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random Schrodinger matrix: unit hopping and sigma^2/n disorder") {
  for (auto dist : {OmegaDist::gaussian, OmegaDist::rademacher, OmegaDist::uniform}) {
    RngStream r(35, static_cast<std::uint64_t>(dist));
    const auto h = sample_schrodinger(10000, 3.0, dist, r);
    for (double b : h.t.offdiag) REQUIRE(b == 1.0);
    double s2 = 0.0;
    for (double v : h.t.diag) s2 += v * v;
    CHECK(s2 / 10000.0 == doctest::Approx(9.0 / 10000.0).epsilon(0.05));
  }
}

TEST_CASE("samplers are deterministic in the seed and reject bad input") {
  RngStream a(36, 1), b(36, 1);
  CHECK(sample_beta_hermite(50, 2.5, a).diag == sample_beta_hermite(50, 2.5, b).diag);
  RngStream r(1, 1);
  CHECK_THROWS_AS(sample_beta_hermite(0, 2.0, r), Error);
  CHECK_THROWS_AS(sample_beta_hermite(5, -1.0, r), Error);
  CHECK_THROWS_AS(sample_circular_beta(5, 0.0, r), Error);
  CHECK_THROWS_AS(sample_schrodinger(5, 0.0, OmegaDist::gaussian, r), Error);
}
