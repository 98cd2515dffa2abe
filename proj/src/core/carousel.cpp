#include "core/carousel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core/ensembles.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/tridiag.hpp"

namespace rmtlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void check_driver(const CarouselDriver& d) {
  if (d.kind == CarouselDriver::sine_beta)
    require(d.beta > 0.0 && std::isfinite(d.beta), "carousel: beta must be finite and > 0");
  else
    require(d.tau > 0.0 && std::isfinite(d.tau), "carousel: tau must be finite and > 0");
}

void check_options(const CarouselOptions& o) {
  require(o.dt > 0.0 && o.dt <= 0.1, "carousel: dt must be in (0, 0.1]");
  require(o.max_rotation > 0.0, "carousel: max_rotation must be > 0");
  require(o.drift_budget > 0.0 && o.drift_budget < kPi, "carousel: drift_budget must be in (0, pi)");
  require(o.lock_tol > 0.0 && o.lock_tol < 0.5, "carousel: lock_tol must be in (0, 0.5)");
  require(o.max_extra_time > 0.0, "carousel: max_extra_time must be > 0");
}

double noise_factor(const CarouselDriver& d) {
  return d.kind == CarouselDriver::sine_beta ? 2.0 : std::sqrt(2.0);
}

// Multiples of 2 pi already passed in the direction of travel.
double passed_multiple(double alpha, bool up) {
  return kTwoPi * (up ? std::floor(alpha / kTwoPi) : std::ceil(alpha / kTwoPi));
}

double distance_to_lattice(double alpha) {
  return std::abs(alpha - kTwoPi * std::round(alpha / kTwoPi));
}

}  // namespace

double hyperbolic_distance(std::complex<double> z, std::complex<double> w) {
  const double r = std::abs((z - w) / (1.0 - std::conj(w) * z));
  return 2.0 * std::atanh(std::min(r, 1.0 - 1e-16));
}

DiskPath hyperbolic_bm(const HbmMode& mode, double horizon, double dt, RngStream& rng,
                       std::complex<double> start) {
  require(dt > 0.0 && std::isfinite(dt), "hyperbolic_bm: dt must be > 0");
  require(horizon >= 0.0 && std::isfinite(horizon), "hyperbolic_bm: horizon must be >= 0");
  require(std::abs(start) < 1.0, "hyperbolic_bm: start must lie in the open disk");
  require(mode.noise_scale >= 0.0, "hyperbolic_bm: noise_scale must be >= 0");
  const bool sine = mode.kind == HbmMode::sine_beta;
  if (sine) {
    require(mode.beta > 0.0 && std::isfinite(mode.beta), "hyperbolic_bm: beta must be > 0");
    if (horizon >= 1.0)
      fail(ErrorCode::range_error,
           "hyperbolic_bm: sine_beta time runs in [0, 1); the refined grid cannot reach t = 1");
    require(dt < 1.0, "hyperbolic_bm: dt must be < 1 in sine_beta mode");
  }

  DiskPath path;
  path.times.push_back(0.0);
  path.points.push_back(start);
  std::complex<double> b = start;
  double t = 0.0;
  const double flat_c = 1.0 / (2.0 * std::sqrt(2.0));
  while (t < horizon) {
    double h = sine ? dt * (1.0 - t) : dt;
    bool last = false;
    if (t + h >= horizon * (1.0 - 1e-14)) {
      h = horizon - t;
      last = true;
    }
    const double c = sine ? 1.0 / std::sqrt(mode.beta * (1.0 - t)) : flat_c;
    const double s = mode.noise_scale * c * std::sqrt(h);
    std::complex<double> d(s * rng.normal(), s * rng.normal());
    // The transport below is exact for any |d| < 1; clamp the rare huge draw.
    const double ad = std::abs(d);
    if (ad > 0.5) d *= 0.5 / ad;
    b = (d + b) / (1.0 + std::conj(b) * d);
    const double ab = std::abs(b);
    if (ab >= 1.0) b *= (1.0 - 1e-16) / ab;
    t = last ? horizon : t + h;
    path.times.push_back(t);
    path.points.push_back(b);
  }
  return path;
}

PhaseTrajectory phase_trajectory(double lambda, const CarouselDriver& driver, double horizon,
                                 RngStream& rng, double alpha0, const CarouselOptions& opts) {
  check_driver(driver);
  check_options(opts);
  require(std::isfinite(lambda), "phase_trajectory: lambda must be finite");
  require(horizon >= 0.0 && std::isfinite(horizon), "phase_trajectory: horizon must be >= 0");
  PhaseTrajectory tr;
  tr.lambda = lambda;
  tr.driver = driver;
  tr.times.push_back(0.0);
  tr.alpha.push_back(alpha0);
  const double s = noise_factor(driver);
  const bool sine = driver.kind == CarouselDriver::sine_beta;
  double t = 0.0, a = alpha0;
  while (t < horizon) {
    double f = sine ? 0.25 * driver.beta * std::exp(-0.25 * driver.beta * t)
                    : (t < driver.tau ? 1.0 / driver.tau : 0.0);
    double h = opts.dt;
    if (f * std::abs(lambda) > 0.0) h = std::min(h, opts.max_rotation / (f * std::abs(lambda)));
    if (!sine && t < driver.tau) h = std::min(h, driver.tau - t);
    h = std::min(h, horizon - t);
    double drift;
    if (sine)
      drift = lambda * (std::exp(-0.25 * driver.beta * t) - std::exp(-0.25 * driver.beta * (t + h)));
    else
      drift = t < driver.tau ? lambda * h / driver.tau : 0.0;
    a += drift + s * std::sin(0.5 * a) * std::sqrt(h) * rng.normal();
    t += h;
    tr.times.push_back(t);
    tr.alpha.push_back(a);
  }
  return tr;
}

std::vector<CountSample> carousel_counts(const std::vector<double>& lambdas,
                                         const CarouselDriver& driver, RngStream& rng,
                                         const CarouselOptions& opts, long cap) {
  check_driver(driver);
  check_options(opts);
  const std::size_t m = lambdas.size();
  double lmax = 0.0;
  for (double l : lambdas) {
    require(std::isfinite(l), "carousel_counts: lambda must be finite");
    lmax = std::max(lmax, std::abs(l));
  }
  std::vector<CountSample> out(m);
  std::vector<double> alpha(m, 0.0);
  std::vector<char> active(m, 1);
  for (std::size_t i = 0; i < m; ++i) out[i].lambda = lambdas[i];
  const double s = noise_factor(driver);

  auto passed_count = [](double a) { return static_cast<long>(std::floor(std::abs(a) / kTwoPi)); };
  // Shared increment for all active chains; returns false once none is active.
  auto advance = [&](double h, auto&& drift_of) {
    const double dw = std::sqrt(h) * rng.normal();
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) continue;
      const double a = alpha[i];
      const bool up = lambdas[i] >= 0.0;
      double next = a + drift_of(lambdas[i]) + s * std::sin(0.5 * a) * dw;
      const double floor_mult = passed_multiple(a, up);
      if (up ? next < floor_mult : next > floor_mult) next = floor_mult;
      alpha[i] = next;
      if (cap >= 0 && passed_count(next) > cap) {
        active[i] = 0;
        out[i].capped = true;
        out[i].count = passed_count(next);
        out[i].alpha_final = next;
        continue;
      }
      any = true;
    }
    return any;
  };

  if (driver.kind == CarouselDriver::sine_beta) {
    const double q = 0.25 * driver.beta;
    const double t_limit =
        std::log(std::max(1.0, lmax / opts.drift_budget)) / q + opts.max_extra_time / std::min(1.0, q);
    double t = 0.0, e = 1.0;  // e = exp(-q t)
    auto lock_pass = [&](double remaining) {
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (!active[i]) continue;
        if (std::abs(lambdas[i]) * remaining < opts.drift_budget &&
            distance_to_lattice(alpha[i]) < opts.lock_tol) {
          active[i] = 0;
          out[i].count = std::labs(std::lround(alpha[i] / kTwoPi));
          out[i].alpha_final = alpha[i];
        } else {
          any = true;
        }
      }
      return any;
    };
    bool any = lock_pass(e);
    while (any) {
      double h = opts.dt;
      const double rate = lmax * q * e;
      if (rate > 0.0) h = std::min(h, opts.max_rotation / rate);
      const double e_next = e * std::exp(-q * h);
      any = advance(h, [&](double l) { return l * (e - e_next); });
      t += h;
      e = e_next;
      if (any) any = lock_pass(e);
      if (any && t > t_limit)
        fail(ErrorCode::numerical_failure,
             "carousel_counts: phase failed to lock to a multiple of 2 pi by t = " +
                 std::to_string(t));
    }
    return out;
  }

  const double tau = driver.tau;
  const double theta_star = kTwoPi * rng.uniform();
  double h0 = opts.dt * tau;
  if (lmax > 0.0) h0 = std::min(h0, opts.max_rotation * tau / lmax);
  const auto steps = static_cast<std::size_t>(std::ceil(tau / h0 - 1e-9));
  const double h = tau / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    if (!advance(h, [&](double l) { return l * h / tau; })) break;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!active[i]) continue;
    const double a = std::abs(alpha[i]);
    out[i].alpha_final = alpha[i];
    out[i].count = a >= theta_star ? static_cast<long>(std::floor((a - theta_star) / kTwoPi)) + 1 : 0;
  }
  return out;
}

CountSample carousel_count(double lambda, const CarouselDriver& driver, RngStream& rng,
                           const CarouselOptions& opts) {
  return carousel_counts({lambda}, driver, rng, opts).front();
}

GapTheory gap_theory(double beta, double lambda) {
  require(beta > 0.0 && std::isfinite(beta), "gap_theory: beta must be > 0");
  GapTheory g{};
  g.exponent = -beta * lambda * lambda / 64.0 + (beta / 8.0 - 0.25) * lambda;
  g.gamma_beta = 0.25 * (beta / 2.0 + 2.0 / beta - 3.0);
  auto f2 = [beta](double t) {
    const double f = 0.25 * beta * std::exp(-0.25 * beta * t);
    return f * f;
  };
  const double norm_sq = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f2, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
  g.f_norm_sq_over_8 = norm_sq / 8.0;
  g.beta_over_64 = beta / 64.0;
  g.ggap_exponent = -lambda * lambda * g.f_norm_sq_over_8;
  return g;
}

GapRecord gap_probability(double beta, double lambda, long k, std::size_t paths, const RngStream& rng,
                          const CarouselOptions& opts) {
  require(paths >= 1, "gap_probability: paths must be >= 1");
  require(k >= 0, "gap_probability: k must be >= 0");
  const auto driver = CarouselDriver::sine(beta);
  check_driver(driver);
  std::vector<char> hit(paths, 0);
  parallel_for(paths, [&](std::size_t p) {
    RngStream r = rng.child(p);
    hit[p] = carousel_counts({lambda}, driver, r, opts, k).front().count <= k;
  });
  long long successes = 0;
  for (char h : hit) successes += h;
  GapRecord rec;
  rec.lambda = lambda;
  rec.k = k;
  rec.paths = static_cast<long long>(paths);
  rec.mc_estimate = static_cast<double>(successes) / static_cast<double>(paths);
  rec.ci = wilson_interval(successes, rec.paths);
  rec.theory = gap_theory(beta, lambda);
  return rec;
}

std::vector<double> clt_statistic(double beta, double lambda, std::size_t reps, const RngStream& rng,
                                  const CarouselOptions& opts) {
  require(reps >= 1, "clt_statistic: reps must be >= 1");
  require(lambda > 1.0, "clt_statistic: lambda must be > 1");
  const auto driver = CarouselDriver::sine(beta);
  check_driver(driver);
  const double centre = lambda / kTwoPi;
  const double scale = std::sqrt(std::log(lambda));
  std::vector<double> out(reps);
  parallel_for(reps, [&](std::size_t p) {
    RngStream r = rng.child(p);
    const auto c = carousel_counts({lambda}, driver, r, opts).front();
    out[p] = (static_cast<double>(c.count) - centre) / scale;
  });
  return out;
}

double repulsion_bound(double tau, double eps) {
  require(tau > 0.0 && std::isfinite(tau), "repulsion_bound: tau must be > 0");
  require(eps > 0.0 && std::isfinite(eps), "repulsion_bound: eps must be > 0");
  const double base = std::log(kTwoPi / eps) - tau - 1.0;
  if (base < 0.0) return 1.0;
  return std::min(1.0, 4.0 * std::exp(-base * base / tau));
}

SchRecord sch_statistics(double tau, double lambda, double eps, std::size_t paths,
                         const RngStream& rng, const CarouselOptions& opts) {
  require(paths >= 1, "sch_statistics: paths must be >= 1");
  require(lambda >= 0.0 && std::isfinite(lambda), "sch_statistics: lambda must be >= 0");
  const double bound = repulsion_bound(tau, eps);
  const auto driver = CarouselDriver::schrodinger(tau);
  SchRecord rec;
  rec.tau = tau;
  rec.lambda = lambda;
  rec.eps = eps;
  rec.counts.assign(paths, 0);
  std::vector<char> pair(paths, 0);
  parallel_for(paths, [&](std::size_t p) {
    RngStream r = rng.child(p);
    const auto c = carousel_counts({eps, lambda}, driver, r, opts);
    pair[p] = c[0].count >= 2;
    rec.counts[p] = c[1].count;
  });
  long long hits = 0;
  for (char h : pair) hits += h;
  rec.repulsion_mc = static_cast<double>(hits) / static_cast<double>(paths);
  rec.repulsion_ci = wilson_interval(hits, static_cast<long long>(paths));
  rec.repulsion_bound = bound;
  return rec;
}

double sch_gap_probability(double tau, double lambda, std::size_t paths, const RngStream& rng,
                           const CarouselOptions& opts) {
  require(paths >= 1, "sch_gap_probability: paths must be >= 1");
  require(lambda >= 0.0 && std::isfinite(lambda), "sch_gap_probability: lambda must be >= 0");
  const auto driver = CarouselDriver::schrodinger(tau);
  std::vector<double> p(paths);
  parallel_for(paths, [&](std::size_t i) {
    RngStream r = rng.child(i);
    const double a = carousel_counts({lambda}, driver, r, opts, 0).front().alpha_final;
    p[i] = std::clamp((kTwoPi - a) / kTwoPi, 0.0, 1.0);
  });
  return mean(p);
}

double gtail_bound(double a, double t, double m) {
  require(t > 0.0 && m > 0.0, "gtail_bound: t and m must be > 0");
  return std::exp(-a * a / (2.0 * t * m * m));
}

double schrodinger_tau(double sigma, double energy) {
  require(std::abs(energy) < 2.0, "schrodinger_tau: energy must lie in (-2, 2)");
  return sigma * sigma / (4.0 * (1.0 - 0.25 * energy * energy));
}

double arcsine_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(0.5 * x) / kPi;
}

namespace {

// Least-squares slope of log block mass against distance from the heaviest block.
void fit_profile(EigenvectorProfile& out) {
  const std::size_t blocks = out.profile.size();
  const auto peak = static_cast<std::size_t>(
      std::max_element(out.profile.begin(), out.profile.end()) - out.profile.begin());
  const double width = 1.0 / static_cast<double>(blocks);
  out.peak_position = (static_cast<double>(peak) + 0.5) * width;
  std::vector<double> x, y;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (out.profile[b] < 1e-300) continue;
    x.push_back(std::abs(static_cast<double>(b) - static_cast<double>(peak)) * width);
    y.push_back(std::log(out.profile[b]));
  }
  if (x.size() < 3)
    fail(ErrorCode::degenerate_input, "eigenvector_profile: profile too concentrated to fit");
  out.fitted_decay_rate = -linear_fit(x, y).slope;
}

}  // namespace

EigenvectorProfile eigenvector_profile_limit(double tau, RngStream& rng, std::size_t blocks,
                                             std::size_t fine) {
  require(tau > 0.0 && std::isfinite(tau), "eigenvector_profile_limit: tau must be > 0");
  require(blocks >= 4 && fine >= 1, "eigenvector_profile_limit: need blocks >= 4, fine >= 1");
  const std::size_t m = blocks * fine;
  const double u = rng.uniform();
  const double h = 1.0 / static_cast<double>(m);
  // Two-sided BM in s = tau (t - u), grown outward from the cell containing u.
  std::vector<double> logm(m);
  const auto start = std::min(m - 1, static_cast<std::size_t>(u * static_cast<double>(m)));
  auto s_of = [&](std::size_t j) { return tau * ((static_cast<double>(j) + 0.5) * h - u); };
  double bm = 0.0, prev = 0.0;
  for (std::size_t j = start; j < m; ++j) {
    const double s = s_of(j);
    bm += std::sqrt(std::abs(std::abs(s) - prev)) * rng.normal();
    prev = std::abs(s);
    logm[j] = bm - 0.5 * std::abs(s);
  }
  bm = logm[start] + 0.5 * std::abs(s_of(start));
  prev = std::abs(s_of(start));
  for (std::size_t j = start; j-- > 0;) {
    const double s = s_of(j);
    bm += std::sqrt(std::abs(std::abs(s) - prev)) * rng.normal();
    prev = std::abs(s);
    logm[j] = bm - 0.5 * std::abs(s);
  }
  EigenvectorProfile out;
  out.profile.assign(blocks, 0.0);
  const double top = *std::max_element(logm.begin(), logm.end());
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = std::exp(logm[j] - top);
    out.profile[j / fine] += w;
    total += w;
  }
  for (double& p : out.profile) p /= total;
  fit_profile(out);
  out.theory_rate = 0.5 * tau;
  return out;
}

EigenvectorProfile eigenvector_profile(std::size_t n, double sigma, RngStream& rng,
                                       std::size_t blocks) {
  require(blocks >= 4 && n >= blocks, "eigenvector_profile: need n >= blocks >= 4");
  auto h = sample_schrodinger(n, sigma, OmegaDist::gaussian, rng);
  const std::size_t idx = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
  const double e = eigenvalue_range(h.t, idx, idx + 1, 1e-11).front();
  const auto ev = eigenvector(h.t, e, 1e-10);

  EigenvectorProfile out;
  out.E_sample = e;
  out.index = idx;
  out.profile.assign(blocks, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = ev.vector[j] * ev.vector[j];
    out.profile[j * blocks / n] += w;
    total += w;
  }
  for (double& p : out.profile) p /= total;
  fit_profile(out);
  out.theory_rate = std::abs(e) < 2.0 ? 0.5 * schrodinger_tau(sigma, e)
                                      : std::numeric_limits<double>::infinity();
  return out;
}

double pooled_arcsine_ks(std::size_t n, double sigma, std::size_t draws, const RngStream& rng,
                         std::size_t grid) {
  require(n >= 1 && draws >= 1 && grid >= 2, "pooled_arcsine_ks: n, draws, grid must be positive");
  std::vector<double> xs(grid);
  for (std::size_t g = 0; g < grid; ++g)
    xs[g] = -2.5 + 5.0 * static_cast<double>(g) / static_cast<double>(grid - 1);
  std::vector<std::vector<double>> frac(draws);
  parallel_for(draws, [&](std::size_t d) {
    RngStream r = rng.child(d);
    const auto h = sample_schrodinger(n, sigma, OmegaDist::gaussian, r);
    frac[d].resize(grid);
    for (std::size_t g = 0; g < grid; ++g)
      frac[d][g] = static_cast<double>(sturm_count(h.t, xs[g])) / static_cast<double>(n);
  });
  double ks = 0.0;
  for (std::size_t g = 0; g < grid; ++g) {
    double acc = 0.0;
    for (std::size_t d = 0; d < draws; ++d) acc += frac[d][g];
    ks = std::max(ks, std::abs(acc / static_cast<double>(draws) - arcsine_cdf(xs[g])));
  }
  return ks;
}

}  // namespace rmtlab
