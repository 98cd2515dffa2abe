#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "core/rng.hpp"
#include "core/statkit.hpp"
#include "core/tridiag.hpp"

namespace rmtlab {

inline constexpr double kDirichlet = std::numeric_limits<double>::infinity();

/**
 * Finite-difference stochastic Airy operator on [0, L] with a Dirichlet wall at
 * L. Interior rows carry 2/h^2 + t_j + xi_j on the diagonal and -1/h^2 off it,
 * xi_j ~ N(0, 4/(beta h)). With finite w the t = 0 node is kept as a half cell
 * (mass h/2) carrying f'(0) = w f(0), symmetrized so the coupling to node 1 is
 * -sqrt(2)/h^2; with w = +inf that node is removed (f(0) = 0). The t = 0 noise
 * is drawn in both cases so every w sees the same realization.
 */
struct SaoDiscretization {
  SymTridiagonal matrix;
  double grid_step = 0.0;
  double beta = 0.0;
  double boundary_w = kDirichlet;
  double domain_length = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<double> node_times;  // t of each matrix row
  std::vector<double> noise;       // xi of each matrix row
};

SaoDiscretization discretize_sao(double beta, double w, double length, double h, RngStream& rng);

/// Bottom k eigenvalues Lambda_0 < ... < Lambda_{k-1}.
std::vector<double> sao_bottom_eigs(const SaoDiscretization& d, std::size_t k, double tol = 1e-9);

/// Explosions of the discrete Riccati recursion W = f'/f on this grid and noise.
/// Equals sturm_count(d.matrix, lambda) exactly.
std::size_t sao_riccati_count(const SaoDiscretization& d, double lambda);

struct RiccatiOptions {
  double step = 2e-3;    // grid step h of the Riccati recursion
  double t_safe = 10.0;  // certify non-explosion once t - lambda > t_safe and W > sqrt(t - lambda)
  double max_extra = 200.0;
};

/// counts[p][k] = explosions of path p at a_grid[k] (lambda = -a).
struct ExplosionCounts {
  std::vector<double> a_grid;
  std::vector<std::vector<int>> counts;
};

/**
 * Riccati diffusion dW = (t + a - W^2) dt + 2/sqrt(beta) db started at
 * W(0) = w, discretized by the exact Sturm recursion
 *   W_j = W_{j-1} / (1 + h W_{j-1}) + h (t_j + a + xi_j),
 * which passes through infinity without a blow-up threshold. All grid points
 * share one noise path in t, so counts are monotone in a path by path.
 * Path p uses rng.child(p).
 */
ExplosionCounts riccati_explosion_counts(double beta, double w, const std::vector<double>& a_grid,
                                         std::size_t paths, const RngStream& rng,
                                         const RiccatiOptions& opts = {});

/// P(TW_beta,w <= a) = P(no explosion) on a_grid, with Wilson 95% half-widths.
CdfTable riccati_tw_cdf(double beta, double w, const std::vector<double>& a_grid, std::size_t paths,
                        const RngStream& rng, const RiccatiOptions& opts = {});

/// Fraction of paths with at least k+1 explosions at each grid point.
std::vector<double> explosion_tail(const ExplosionCounts& c, int k);

struct PdeOptions {
  std::size_t n_theta = 4000;
  double dt = 1e-3;
  double t_terminal = 0.0;  // 0 selects max(t_hi + 6, 8)
};

struct PdeTable {
  std::vector<double> t_grid;
  std::vector<double> w_grid;
  std::vector<std::vector<double>> values;  // values[i_t][i_w]
  double beta = 2.0;
};

/**
 * Bounded solution of d_t F + (2/beta) F_ww + (t - w^2) F_w = 0 with F -> 0 at
 * w = -inf. Solved in the angle chart W = cot(theta), which maps the whole
 * line onto (0, pi): theta = pi is the explosion point (F = 0) and theta = 0
 * is an inflow-free edge needing no data. Backward Euler in t with upwind
 * transport and centered diffusion; terminal data at t_terminal from the
 * linearization around the unstable branch -sqrt(t).
 * A single w = +inf column (w_lo = w_hi = kDirichlet, nw = 1) reads off TW_beta.
 */
PdeTable tw_pde_solve(double beta, double t_lo, double t_hi, std::size_t nt, double w_lo, double w_hi,
                      std::size_t nw, const PdeOptions& opts = {});

struct TailFormulas {
  double left_exponent;     // beta a^3 / 24
  double right_exponent;    // (2/3) beta a^{3/2}
  double right_poly_power;  // -3 beta / 4
  double beta;
  /// -log of the upper envelopes C e^{-beta n eps^{3/2}/C} and C^beta e^{-beta n^2 eps^3/C}.
  double ledoux_rider_right(std::size_t n, double eps, double c) const;
  double ledoux_rider_left(std::size_t n, double eps, double c) const;
};

TailFormulas tail_formulas(double beta, double a);

/// Left-tail trial function (x sqrt a) ^ sqrt((a - x)^+) ^ (a - x)^+.
double trial_function(double a, double x);

struct TrialNorms {
  double a_l2;      // a ||f||_2^2, about a^3/2
  double deriv_l2;  // ||f'||_2^2, O(a)
  double sqrtx_l2;  // ||sqrt(x) f||_2^2, about a^3/6
  double l4;        // ||f||_4^4, about a^3/3
};

/// Exact piecewise quadrature of the trial-function norms.
TrialNorms trial_norms(double a);

/**
 * For one white-noise path on a grid of step h, the smallest C with
 *   <f, SAO f> >= (1 - eps) <f, AO f> - C
 * over the trial functions f_a, a in a_values (clipped at 0). The noise form is
 * sum_j f(t_j)^2 xi_j h with xi_j ~ N(0, 4/(beta h)), as in discretize_sao.
 */
double form_bound_constant(double beta, double eps, const std::vector<double>& a_values, double h,
                           RngStream& rng);

/// Lambda_k / k^{2/3} for the deterministic Airy operator (Lambda_0 = |first zero|).
double weyl_check(int k);
double weyl_limit();

}  // namespace rmtlab
