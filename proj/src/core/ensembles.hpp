#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/rng.hpp"
#include "core/tridiag.hpp"

namespace rmtlab {

/// Dense symmetric matrix, row-major; both triangles are stored and kept equal.
struct DenseSymmetric {
  std::size_t n = 0;
  std::vector<double> a;

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct VerblunskyCoeffs {
  std::vector<std::complex<double>> alpha;
};

void validate(const VerblunskyCoeffs& v);

enum class OmegaDist { gaussian, rademacher, uniform };

struct SchrodingerMatrix {
  SymTridiagonal t;
  double sigma = 1.0;
  std::size_t n = 0;
};

/// Tridiagonal beta-Hermite model scaled so the spectrum fills [-2, 2].
/// beta may be +inf (deterministic limit).
SymTridiagonal sample_beta_hermite(std::size_t n, double beta, RngStream& rng);

/**
 * First n_max rows of one semi-infinite Jacobi matrix with diag ~ N(0, 2/beta)
 * and offdiag[k-1] ~ chi_{k beta}/sqrt(beta). The top-left entry is the root of
 * the spectral measure, so the Hermite indexing runs in the opposite direction:
 * reversing the order-n minor and dividing by sqrt(n) gives the law of
 * sample_beta_hermite(n, beta).
 */
SymTridiagonal sample_nested_jacobi(std::size_t n_max, double beta, RngStream& rng);

/// Row/column reversal (a permutation similarity).
SymTridiagonal reversed(const SymTridiagonal& t);

/// GOE (M + M^T)/sqrt(2). A nonzero spike mu adds the rank-one mean shift
/// mu/sqrt(n) * 11^T in its rotated form mu*sqrt(n) * e1 e1^T.
DenseSymmetric sample_goe(std::size_t n, double spike_mu, RngStream& rng);

/// Householder reduction fixing e1; off-diagonals come out nonnegative.
SymTridiagonal householder_tridiagonalize(const DenseSymmetric& a);

/// Dense matrix with spectral measure sum q_i delta_{lambda_i} at e1.
DenseSymmetric dense_from_spectral_measure(const WeightedPointMeasure& m);

VerblunskyCoeffs sample_circular_beta(std::size_t n, double beta, RngStream& rng);

SchrodingerMatrix sample_schrodinger(std::size_t n, double sigma, OmegaDist dist, RngStream& rng);

}  // namespace rmtlab
