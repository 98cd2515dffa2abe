#include "core/stochastics.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace rmtlab {

double gaussian(RngStream& rng, double mean, double variance) {
  require(variance >= 0.0 && std::isfinite(variance), "gaussian: variance must be >= 0");
  if (variance == 0.0) return mean;
  return mean + std::sqrt(variance) * rng.normal();
}

double gamma_variate(RngStream& rng, double shape) {
  require(shape > 0.0 && std::isfinite(shape), "gamma: shape must be > 0");
  if (shape < 1.0) {
    // G(a) = G(a+1) * U^(1/a)
    double g = gamma_variate(rng, shape + 1.0);
    return g * std::exp(std::log(rng.uniform()) / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi(RngStream& rng, double k) {
  require(k > 0.0 && std::isfinite(k), "chi: degrees of freedom must be > 0");
  return std::sqrt(2.0 * gamma_variate(rng, 0.5 * k));
}

double beta_variate(RngStream& rng, double a, double b) {
  require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
          "beta: parameters must be > 0");
  double x = gamma_variate(rng, a);
  double y = gamma_variate(rng, b);
  double s = x + y;
  if (s == 0.0) return a >= b ? 1.0 : 0.0;  // both underflowed; only for tiny shapes
  return x / s;
}

std::vector<double> uniform_grid(double t0, double t1, double dt) {
  require(t0 < t1, "grid: need t0 < t1");
  require(dt > 0.0 && std::isfinite(dt), "grid: dt must be > 0");
  const double span = t1 - t0;
  auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  if (steps == 0) steps = 1;
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) t[i] = t0 + static_cast<double>(i) * dt;
  t[steps] = t1;
  return t;
}

BrownianPath brownian_path(RngStream& rng, double t0, double t1, double dt, double diffusion,
                           double start) {
  require(diffusion > 0.0, "brownian_path: diffusion must be > 0");
  BrownianPath p;
  p.times = uniform_grid(t0, t1, dt);
  p.diffusion_coefficient = diffusion;
  p.values.resize(p.times.size());
  p.values[0] = start;
  for (std::size_t i = 1; i < p.times.size(); ++i) {
    double var = diffusion * (p.times[i] - p.times[i - 1]);
    p.values[i] = p.values[i - 1] + std::sqrt(var) * rng.normal();
  }
  return p;
}

PlanarBrownianPath planar_brownian_path(RngStream& rng, double t0, double t1, double dt,
                                        double diffusion, std::complex<double> start) {
  require(diffusion > 0.0, "planar_brownian_path: diffusion must be > 0");
  PlanarBrownianPath p;
  p.times = uniform_grid(t0, t1, dt);
  p.diffusion_coefficient = diffusion;
  p.values.resize(p.times.size());
  p.values[0] = start;
  for (std::size_t i = 1; i < p.times.size(); ++i) {
    double sd = std::sqrt(0.5 * diffusion * (p.times[i] - p.times[i - 1]));
    double re = rng.normal();
    double im = rng.normal();
    p.values[i] = p.values[i - 1] + sd * std::complex<double>(re, im);
  }
  return p;
}

SdeResult integrate_sde(const SdeCoefficient& drift, const SdeCoefficient& noise, double x0,
                        double horizon, double dt, ExplosionPolicy policy, RngStream& rng,
                        const SdeOptions& opts) {
  require(dt > 0.0 && std::isfinite(dt), "integrate_sde: dt must be > 0");
  require(horizon > 0.0 && std::isfinite(horizon), "integrate_sde: horizon must be > 0");
  require(opts.blow_threshold > 0.0, "integrate_sde: blow threshold must be > 0");

  SdeResult res;
  res.path.diffusion_coefficient = 1.0;
  const double h_min = std::ldexp(dt, -opts.max_halvings);
  double t = 0.0;
  double x = x0;
  if (opts.record_path) {
    res.path.times.push_back(t);
    res.path.values.push_back(x);
  }
  bool stopped = false;
  while (t < horizon && !stopped) {
    const double base = std::min(dt, horizon - t);
    const double dB = std::sqrt(base) * rng.normal();
    double left = base;
    while (left > 0.0) {
      double h = std::min(dt, left);
      double a = drift(t, x);
      if (!std::isfinite(a))
        fail(ErrorCode::numerical_failure, "integrate_sde: non-finite drift at t=" + std::to_string(t));
      const double room = opts.max_relative_move * (1.0 + std::abs(x));
      while (h > h_min && std::abs(a) * h > room) h *= 0.5;
      h = std::min(h, left);
      double b = noise(t, x);
      x += a * h + b * dB * (h / base);
      t += h;
      left -= h;
      if (left < 1e-15 * base) left = 0.0;
      if (!std::isfinite(x) && policy == ExplosionPolicy::none) {
        x = -std::numeric_limits<double>::infinity();
      }
      if (x < -opts.blow_threshold || std::isnan(x)) {
        if (std::isnan(x))
          fail(ErrorCode::numerical_failure, "integrate_sde: state became NaN at t=" + std::to_string(t));
        res.explosion_times.push_back(t);
        if (policy == ExplosionPolicy::none) {
          x = -std::numeric_limits<double>::infinity();
          stopped = true;
          break;
        }
        x = opts.blow_threshold;
      }
      if (opts.record_path) {
        res.path.times.push_back(t);
        res.path.values.push_back(x);
      }
    }
  }
  res.exploded = !res.explosion_times.empty();
  res.final_value = x;
  return res;
}

}  // namespace rmtlab
