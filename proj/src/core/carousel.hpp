#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/rng.hpp"
#include "core/statkit.hpp"

namespace rmtlab {

struct DiskPath {
  std::vector<double> times;
  std::vector<std::complex<double>> points;
};

struct HbmMode {
  enum Kind { sine_beta, homogeneous } kind = homogeneous;
  double beta = 2.0;
  double noise_scale = 1.0;  // 0 freezes the path

  static HbmMode sine(double beta) { return {sine_beta, beta, 1.0}; }
  static HbmMode flat() { return {homogeneous, 2.0, 1.0}; }
};

/**
 * Hyperbolic Brownian motion in the Poincare disk,
 *   dB = c(t) (1 - |B|^2) dZ,   Z complex with independent unit real/imag parts,
 * with c = 1/sqrt(beta (1 - t)) in sine_beta mode (t in [0, 1)) and
 * c = 1/(2 sqrt 2) in homogeneous mode, where the hyperbolic distance from the
 * origin q = 2 artanh|B| solves dq = db/sqrt 2 + coth(q)/4 dt.
 *
 * Each step draws the Euclidean increment at the origin and transports it to
 * B by the disk automorphism z -> (z + B)/(1 + conj(B) z). This agrees with
 * Euler-Maruyama to first order and can never leave the disk. In sine_beta
 * mode the step is dt (1 - t_k), so the path is uniform in log(1/(1-t)) and
 * horizon must be < 1.
 */
DiskPath hyperbolic_bm(const HbmMode& mode, double horizon, double dt, RngStream& rng,
                       std::complex<double> start = 0.0);

/// Hyperbolic distance 2 artanh |(z - w)/(1 - conj(w) z)|.
double hyperbolic_distance(std::complex<double> z, std::complex<double> w);

struct CarouselDriver {
  enum Kind { sine_beta, homogeneous } kind = sine_beta;
  double beta = 2.0;
  double tau = 1.0;

  static CarouselDriver sine(double beta) { return {sine_beta, beta, 1.0}; }
  static CarouselDriver schrodinger(double tau) { return {homogeneous, 2.0, tau}; }
};

struct CarouselOptions {
  double dt = 0.01;             // largest time step
  double max_rotation = 0.05;   // drift per step is kept below this
  double drift_budget = 0.02 * 3.14159265358979323846;  // remaining drift at lock
  double lock_tol = 1e-3;       // distance to a 2 pi multiple at lock
  double max_extra_time = 400.0;
};

struct CountSample {
  double lambda = 0.0;
  long count = 0;
  double alpha_final = 0.0;
  bool capped = false;  // stopped early once count exceeded the cap
};

struct PhaseTrajectory {
  std::vector<double> times;
  std::vector<double> alpha;
  double lambda = 0.0;
  CarouselDriver driver;
};

/**
 * Phase SDE d alpha = lambda f dt + s sin(alpha/2) dW, f(t) = (beta/4) e^{-beta t/4}
 * with s = 2 for the sine_beta driver, f = 1/tau on [0, tau] with s = sqrt 2
 * for the homogeneous one. Recorded on [0, horizon] from alpha0.
 */
PhaseTrajectory phase_trajectory(double lambda, const CarouselDriver& driver, double horizon,
                                 RngStream& rng, double alpha0 = 0.0, const CarouselOptions& opts = {});

/**
 * Counts for several lambda on one noise realization (the chains share the
 * time grid, which is set by the largest |lambda|), so counts are monotone in
 * lambda. sine_beta: integrate until every chain has locked to a multiple of
 * 2 pi and returns that multiple. homogeneous: a uniform reading angle theta*
 * is drawn first and the count is #{k >= 0 : 2 pi k + theta* <= alpha(tau)}.
 * A cap >= 0 stops a chain once its count provably exceeds cap.
 * Negative lambda counts the points in [lambda, 0].
 */
std::vector<CountSample> carousel_counts(const std::vector<double>& lambdas,
                                         const CarouselDriver& driver, RngStream& rng,
                                         const CarouselOptions& opts = {}, long cap = -1);

CountSample carousel_count(double lambda, const CarouselDriver& driver, RngStream& rng,
                           const CarouselOptions& opts = {});

struct GapTheory {
  double exponent;          // -beta lambda^2/64 + (beta/8 - 1/4) lambda
  double gamma_beta;        // (beta/2 + 2/beta - 3)/4
  double f_norm_sq_over_8;  // quadrature of ||f||^2 / 8
  double beta_over_64;
  double ggap_exponent;     // -lambda^2 ||f||^2 / 8
};

GapTheory gap_theory(double beta, double lambda);

struct GapRecord {
  double lambda;
  long k;
  long long paths;
  double mc_estimate;  // P(N[0, lambda] <= k)
  Interval ci;
  GapTheory theory;
};

/// Path p uses rng.child(p).
GapRecord gap_probability(double beta, double lambda, long k, std::size_t paths,
                          const RngStream& rng, const CarouselOptions& opts = {});

/// (N(lambda) - lambda/(2 pi)) / sqrt(log lambda), one value per replica.
std::vector<double> clt_statistic(double beta, double lambda, std::size_t reps, const RngStream& rng,
                                  const CarouselOptions& opts = {});

inline double clt_variance(double beta) {
  return 2.0 / (beta * 3.14159265358979323846 * 3.14159265358979323846);
}

struct SchRecord {
  double tau;
  double lambda;
  double eps;
  std::vector<long> counts;  // N[0, lambda] per path
  double repulsion_mc;       // fraction with N[0, eps] >= 2
  Interval repulsion_ci;
  double repulsion_bound;
};

/// 4 exp(-(log(2 pi/eps) - tau - 1)^2 / tau), or 1 where the base is negative.
double repulsion_bound(double tau, double eps);

SchRecord sch_statistics(double tau, double lambda, double eps, std::size_t paths,
                         const RngStream& rng, const CarouselOptions& opts = {});

/// P(N[0, lambda] = 0) for Sch_tau, averaging out the reading angle:
/// E[(2 pi - alpha(tau))^+ / (2 pi)].
double sch_gap_probability(double tau, double lambda, std::size_t paths, const RngStream& rng,
                           const CarouselOptions& opts = {});

/// Sub-Gaussian bound exp(-a^2 / (2 t m^2)) for a martingale with |integrand| < m.
double gtail_bound(double a, double t, double m);

struct EigenvectorProfile {
  double E_sample = 0.0;
  std::size_t index = 0;
  std::vector<double> profile;  // block masses of |psi|^2, total 1
  double peak_position = 0.0;   // in rescaled time [0, 1]
  double fitted_decay_rate = 0.0;
  double theory_rate = 0.0;     // tau_E / 2
};

/// tau_E = sigma^2 / (4 (1 - E^2/4)).
double schrodinger_tau(double sigma, double energy);

/**
 * Samples H_n, picks a uniform eigenvalue index, computes the eigenvector,
 * and fits log block-mass against distance from the peak (blocks of n/blocks
 * sites). fitted_decay_rate is minus that slope in rescaled time.
 */
EigenvectorProfile eigenvector_profile(std::size_t n, double sigma, RngStream& rng,
                                       std::size_t blocks = 100);

/// Same block profile and fit for the limit measure M(tau (t - U)) dt, normalized.
EigenvectorProfile eigenvector_profile_limit(double tau, RngStream& rng, std::size_t blocks = 100,
                                             std::size_t fine = 40);

/// sup_x |mean ESD(x) - arcsine cdf(x)| over draws of H_n, via Sturm counts on a grid.
double pooled_arcsine_ks(std::size_t n, double sigma, std::size_t draws, const RngStream& rng,
                         std::size_t grid = 801);

double arcsine_cdf(double x);

}  // namespace rmtlab
