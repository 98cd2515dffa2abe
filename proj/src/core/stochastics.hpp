#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "core/rng.hpp"

namespace rmtlab {

double gaussian(RngStream& rng, double mean, double variance);
/// Gamma(shape, 1) draw; Marsaglia-Tsang squeeze, shape boost below 1.
double gamma_variate(RngStream& rng, double shape);
/// Chi distribution with k (possibly fractional) degrees of freedom.
double chi(RngStream& rng, double k);
double beta_variate(RngStream& rng, double a, double b);

struct BrownianPath {
  std::vector<double> times;
  std::vector<double> values;
  double diffusion_coefficient = 1.0;
};

struct PlanarBrownianPath {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  double diffusion_coefficient = 1.0;
};

/// Uniform grid t0, t0+dt, ...; the last step is shortened to land on t1.
std::vector<double> uniform_grid(double t0, double t1, double dt);

BrownianPath brownian_path(RngStream& rng, double t0, double t1, double dt, double diffusion,
                           double start);
/// Complex BM whose real and imaginary parts each have variance diffusion*dt/2
/// per step, so E|dZ|^2 = diffusion*dt.
PlanarBrownianPath planar_brownian_path(RngStream& rng, double t0, double t1, double dt,
                                        double diffusion, std::complex<double> start);

enum class ExplosionPolicy { none, restart_from_plus_infinity };

struct SdeOptions {
  double blow_threshold = 1e4;   // |x| beyond which the state counts as infinite
  int max_halvings = 10;         // dt / 2^10 is the finest substep
  double max_relative_move = 0.25;
  bool record_path = true;
};

struct SdeResult {
  BrownianPath path;
  bool exploded = false;
  std::vector<double> explosion_times;
  double final_value = 0.0;
};

using SdeCoefficient = std::function<double(double, double)>;

/**
 * Euler-Maruyama on [0, horizon] with noise dB of unit diffusion.
 *
 * Each base step draws one Brownian increment; when the drift would move the
 * state by more than max_relative_move*(1+|x|) the step is halved (down to
 * dt/2^max_halvings) and the base increment is spread evenly over the
 * substeps, so the driving noise never depends on the state. Under
 * restart_from_plus_infinity a dive below -blow_threshold records an
 * explosion and the state re-enters at +blow_threshold; under none the
 * integration stops at the first explosion.
 */
SdeResult integrate_sde(const SdeCoefficient& drift, const SdeCoefficient& noise, double x0,
                        double horizon, double dt, ExplosionPolicy policy, RngStream& rng,
                        const SdeOptions& opts = {});

}  // namespace rmtlab
