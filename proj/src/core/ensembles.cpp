#include "core/ensembles.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/stochastics.hpp"

namespace rmtlab {

void validate(const VerblunskyCoeffs& v) {
  require(!v.alpha.empty(), "verblunsky: empty coefficient list");
  const std::size_t n = v.alpha.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    require(std::abs(v.alpha[k]) <= 1.0 + 1e-12, "verblunsky: |alpha_k| must be <= 1");
  require(std::abs(std::abs(v.alpha[n - 1]) - 1.0) <= 1e-10, "verblunsky: last coefficient must be unimodular");
}

namespace {

void check_n_beta(std::size_t n, double beta) {
  require(n >= 1, "sampler: n must be >= 1");
  require(beta > 0.0 && !std::isnan(beta), "sampler: beta must be > 0");
}

// chi_{k beta}/sqrt(beta); tends to sqrt(k) as beta grows.
double scaled_chi(RngStream& rng, double k, double beta) {
  if (std::isinf(beta)) return std::sqrt(k);
  return chi(rng, k * beta) / std::sqrt(beta);
}

}  // namespace

SymTridiagonal sample_beta_hermite(std::size_t n, double beta, RngStream& rng) {
  check_n_beta(n, beta);
  SymTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n - 1);
  const double nn = static_cast<double>(n);
  const bool frozen = std::isinf(beta);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = frozen ? 0.0 : gaussian(rng, 0.0, 2.0 / (nn * beta));
  for (std::size_t i = 1; i < n; ++i)
    t.offdiag[i - 1] = scaled_chi(rng, static_cast<double>(n - i), beta) / std::sqrt(nn);
  return t;
}

SymTridiagonal sample_nested_jacobi(std::size_t n_max, double beta, RngStream& rng) {
  check_n_beta(n_max, beta);
  SymTridiagonal t;
  t.diag.resize(n_max);
  t.offdiag.resize(n_max - 1);
  const bool frozen = std::isinf(beta);
  for (std::size_t i = 0; i < n_max; ++i) t.diag[i] = frozen ? 0.0 : gaussian(rng, 0.0, 2.0 / beta);
  for (std::size_t k = 1; k < n_max; ++k) t.offdiag[k - 1] = scaled_chi(rng, static_cast<double>(k), beta);
  return t;
}

SymTridiagonal reversed(const SymTridiagonal& t) {
  return {std::vector<double>(t.diag.rbegin(), t.diag.rend()),
          std::vector<double>(t.offdiag.rbegin(), t.offdiag.rend())};
}

DenseSymmetric sample_goe(std::size_t n, double spike_mu, RngStream& rng) {
  require(n >= 1, "sample_goe: n must be >= 1");
  require(std::isfinite(spike_mu), "sample_goe: spike must be finite");
  DenseSymmetric a{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // (M_ij + M_ji)/sqrt(2) is N(0,1) off the diagonal and N(0,2) on it.
      double x = (i == j) ? std::sqrt(2.0) * rng.normal() : rng.normal();
      a(i, j) = x;
      a(j, i) = x;
    }
  }
  if (spike_mu != 0.0) a(0, 0) += spike_mu * std::sqrt(static_cast<double>(n));
  return a;
}

SymTridiagonal householder_tridiagonalize(const DenseSymmetric& in) {
  const std::size_t n = in.n;
  require(n >= 1 && in.a.size() == n * n, "householder: malformed matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      require(in(i, j) == in(j, i), "householder: matrix is not symmetric");
  DenseSymmetric a = in;
  double scale = 0.0;
  for (double x : a.a) {
    require(std::isfinite(x), "householder: non-finite entry");
    scale = std::max(scale, std::abs(x));
  }
  const double zero_tol = 1e-14 * std::max(scale, 1e-300) * static_cast<double>(n);

  SymTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  std::vector<double> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += a(i, k) * a(i, k);
    double norm = std::sqrt(norm2);
    if (norm <= zero_tol)
      fail(ErrorCode::degenerate_input, "householder: zero pivot at column " + std::to_string(k) +
                                            " (e1 is not cyclic)");
    // Reflect a(k+1:, k) onto +norm * e_{k+1}; the sign choice avoids cancellation.
    double x0 = a(k + 1, k);
    double alpha = (x0 > 0.0) ? -norm : norm;
    std::fill(v.begin(), v.end(), 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = norm2 - x0 * x0 + (x0 - alpha) * (x0 - alpha);
    double tau = 2.0 / vnorm2;
    // A <- H A H with H = I - tau v v^T, via the symmetric rank-2 update.
    double pv = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      p[i] = tau * s;
      pv += p[i] * v[i];
    }
    for (std::size_t i = k; i < n; ++i) w[i] = p[i] - 0.5 * tau * pv * v[i];
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) a(i, j) -= v[i] * w[j] + w[i] * v[j];
    t.diag[k] = a(k, k);
    t.offdiag[k] = a(k + 1, k);
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.offdiag[n - 2] = a(n - 1, n - 2);
    if (std::abs(t.offdiag[n - 2]) <= zero_tol)
      fail(ErrorCode::degenerate_input, "householder: zero pivot in the last column (e1 is not cyclic)");
  }
  t.diag[n - 1] = a(n - 1, n - 1);
  // Sign normalization by a diagonal +-1 similarity; the first coordinate is kept.
  for (auto& b : t.offdiag) b = std::abs(b);
  return t;
}

DenseSymmetric dense_from_spectral_measure(const WeightedPointMeasure& m) {
  const std::size_t n = m.atoms.size();
  require(n >= 1, "dense_from_spectral_measure: empty measure");
  // Q = reflector with first column (sqrt q_i); A = Q diag(lambda) Q^T.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(m.atoms[i].weight >= 0.0, "dense_from_spectral_measure: negative weight");
    u[i] = std::sqrt(m.atoms[i].weight);
  }
  // H = I - 2 v v^T / |v|^2 with v = u - e1 maps e1 to u (|u| = 1).
  std::vector<double> v = u;
  v[0] -= 1.0;
  double vv = 0.0;
  for (double x : v) vv += x * x;
  DenseSymmetric q{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double h = (i == j ? 1.0 : 0.0);
      if (vv > 0.0) h -= 2.0 * v[i] * v[j] / vv;
      q(i, j) = h;
    }
  }
  DenseSymmetric a{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(i, k) * m.atoms[k].location * q(j, k);
      a(i, j) = s;
      a(j, i) = s;
    }
  }
  return a;
}

VerblunskyCoeffs sample_circular_beta(std::size_t n, double beta, RngStream& rng) {
  check_n_beta(n, beta);
  VerblunskyCoeffs v;
  v.alpha.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double r = 1.0;
    if (k + 1 < n) {
      double b = 0.5 * static_cast<double>(n - k - 1) * beta;
      r = std::isinf(beta) ? 0.0 : std::sqrt(beta_variate(rng, 1.0, b));
    }
    double phase = 2.0 * std::numbers::pi * rng.uniform();
    v.alpha[k] = std::polar(r, phase);
  }
  return v;
}

SchrodingerMatrix sample_schrodinger(std::size_t n, double sigma, OmegaDist dist, RngStream& rng) {
  require(n >= 1, "sample_schrodinger: n must be >= 1");
  require(sigma > 0.0 && std::isfinite(sigma), "sample_schrodinger: sigma must be > 0");
  SchrodingerMatrix h;
  h.n = n;
  h.sigma = sigma;
  h.t.diag.resize(n);
  h.t.offdiag.assign(n - 1, 1.0);
  const double scale = sigma / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double w = 0.0;
    switch (dist) {
      case OmegaDist::gaussian: w = rng.normal(); break;
      case OmegaDist::rademacher: w = (rng.next_u64() >> 63) ? 1.0 : -1.0; break;
      case OmegaDist::uniform: w = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0); break;
    }
    h.t.diag[k] = scale * w;
  }
  return h;
}

}  // namespace rmtlab
